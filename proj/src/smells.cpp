#include "dq/smells.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <tuple>

#include "dq/detectors.hpp"

namespace dq {

namespace {

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

// trim + case-fold + internal-whitespace-squeeze
std::string canonicalize(std::string_view raw) {
    std::size_t b = 0, e = raw.size();
    while (b < e && is_space(raw[b])) ++b;
    while (e > b && is_space(raw[e - 1])) --e;
    std::string out;
    bool pending_space = false;
    for (std::size_t i = b; i < e; ++i) {
        char c = raw[i];
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

// Cells that already fired an integrity issue are not smell evidence.
bool excluded(const Cell& cell, const ColumnConstraint* col) {
    if (!col) return false;
    if (cell.is_null) return col->required;
    return cell_invalid_kind(cell, *col).has_value();
}

double value_as_double(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    return std::get<double>(v);
}

// Type-7 quantile (linear interpolation on sorted data).
double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.size() == 1) return sorted.front();
    double pos = p * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Spellings of one underlying thing, kept in first-appearance order with
// the rows that carry them.
struct VariantSet {
    std::vector<std::string> variants;
    std::vector<std::vector<std::size_t>> rows_per_variant;

    void add(const std::string& spelling, std::size_t row) {
        for (std::size_t i = 0; i < variants.size(); ++i) {
            if (variants[i] == spelling) {
                rows_per_variant[i].push_back(row);
                return;
            }
        }
        variants.push_back(spelling);
        rows_per_variant.push_back({row});
    }

    std::size_t total() const {
        std::size_t n = 0;
        for (const auto& r : rows_per_variant) n += r.size();
        return n;
    }

    std::size_t majority() const {
        std::size_t best = 0;
        for (const auto& r : rows_per_variant) best = std::max(best, r.size());
        return best;
    }

    std::vector<std::size_t> all_rows() const {
        std::vector<std::size_t> out;
        for (const auto& r : rows_per_variant) out.insert(out.end(), r.begin(), r.end());
        std::sort(out.begin(), out.end());
        return out;
    }

    std::string listed() const {
        std::string out;
        for (std::size_t i = 0; i < variants.size(); ++i)
            out += (i ? ", " : "") + quoted(variants[i]);
        return out;
    }
};

}  // namespace

bool smell_less(const SmellFinding& a, const SmellFinding& b) {
    auto key = [](const SmellFinding& s) {
        return std::tuple<const std::string&, const std::string&, int,
                          const std::vector<std::size_t>&, const std::string&, double>(
            s.table, s.column, static_cast<int>(s.kind), s.rows, s.evidence, s.score);
    };
    return key(a) < key(b);
}

void sort_smells(std::vector<SmellFinding>& smells) {
    std::sort(smells.begin(), smells.end(), smell_less);
}

std::vector<SmellFinding> detect_believability(const Table& table, const TableConstraint& schema,
                                               const SmellParams& params) {
    std::vector<SmellFinding> out;
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        const ColumnConstraint& col = schema.columns[c];
        if (col.declared_type != ValueType::integer && col.declared_type != ValueType::floating)
            continue;

        std::vector<std::pair<std::size_t, double>> values;  // (row, x)
        for (std::size_t r = 0; r < table.row_count(); ++r) {
            const Cell& cell = table.at(r, c);
            if (cell.is_null || cell.parse_failed || excluded(cell, &col)) continue;
            values.emplace_back(r, value_as_double(*cell.parsed));
        }
        if (values.size() < static_cast<std::size_t>(params.min_n)) continue;
        const double n = static_cast<double>(values.size());

        std::vector<double> xs;
        for (const auto& [r, x] : values) xs.push_back(x);
        std::sort(xs.begin(), xs.end());
        double q1 = quantile(xs, 0.25);
        double q3 = quantile(xs, 0.75);
        double iqr = q3 - q1;

        double mean = 0;
        for (double x : xs) mean += x;
        mean /= n;
        double ss = 0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        double sd = std::sqrt(ss / (n - 1));

        // degenerate spread: per-cell outlier flags would be arbitrary
        if (iqr > 0 && sd > 0) {
            double lo = q1 - params.iqr_k * iqr;
            double hi = q3 + params.iqr_k * iqr;
            double band = params.iqr_k * iqr;
            for (const auto& [r, x] : values) {
                bool iqr_out = x < lo || x > hi;
                double z = (x - mean) / sd;
                bool z_out = std::fabs(z) > params.z_max;
                if (!iqr_out && !z_out) continue;
                double exceed = 0;
                if (iqr_out) {
                    double dist = x < lo ? lo - x : x - hi;
                    exceed = std::max(exceed, band > 0 ? dist / band : 1.0);
                }
                if (z_out)
                    exceed = std::max(exceed, params.z_max > 0
                                                  ? (std::fabs(z) - params.z_max) / params.z_max
                                                  : 1.0);
                SmellFinding f;
                f.table = table.name;
                f.column = col.name;
                f.kind = Attribute::believability;
                f.rows = {r};
                f.score = std::min(1.0, exceed);
                if (iqr_out)
                    f.evidence = "value " + format_double(x) + " outside [" + format_double(lo) +
                                 ", " + format_double(hi) + "]";
                if (z_out) {
                    if (!f.evidence.empty()) f.evidence += "; ";
                    f.evidence += "|z| " + format_double(std::fabs(z)) + " exceeds " +
                                  format_double(params.z_max);
                }
                out.push_back(std::move(f));
            }
        }

        // improbable concentration of one value
        std::map<double, std::vector<std::size_t>> by_value;
        for (const auto& [r, x] : values) by_value[x].push_back(r);
        std::vector<const std::pair<const double, std::vector<std::size_t>>*> frequent;
        for (const auto& entry : by_value)
            if (static_cast<double>(entry.second.size()) / n >= params.freq_threshold)
                frequent.push_back(&entry);
        std::sort(frequent.begin(), frequent.end(),
                  [](const auto* a, const auto* b) { return a->second.front() < b->second.front(); });
        for (const auto* entry : frequent) {
            SmellFinding f;
            f.table = table.name;
            f.column = col.name;
            f.kind = Attribute::believability;
            f.rows = entry->second;
            f.score = static_cast<double>(entry->second.size()) / n;
            f.evidence = "value " + format_double(entry->first) + " accounts for " +
                         std::to_string(entry->second.size()) + " of " +
                         std::to_string(values.size()) + " values";
            out.push_back(std::move(f));
        }
    }
    sort_smells(out);
    return out;
}

std::vector<SmellFinding> detect_consistency(const Table& table, const NullPolicy& nulls,
                                             const TableConstraint* schema) {
    (void)nulls;  // null status is already on the cells
    std::vector<SmellFinding> out;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        const ColumnConstraint* col = schema ? schema->find_column(table.header[c]) : nullptr;

        VariantSet null_spellings;
        std::map<std::string, VariantSet> canonical_groups;
        std::vector<std::string> group_order;
        for (std::size_t r = 0; r < table.row_count(); ++r) {
            const Cell& cell = table.at(r, c);
            if (excluded(cell, col)) continue;
            if (cell.is_null) {
                null_spellings.add(cell.raw, r);
                continue;
            }
            std::string canon = canonicalize(cell.raw);
            if (!canonical_groups.count(canon)) group_order.push_back(canon);
            canonical_groups[canon].add(cell.raw, r);
        }

        if (null_spellings.variants.size() >= 2) {
            SmellFinding f;
            f.table = table.name;
            f.column = table.header[c];
            f.kind = Attribute::consistency;
            f.rows = null_spellings.all_rows();
            f.score = 1.0 - static_cast<double>(null_spellings.majority()) /
                                static_cast<double>(null_spellings.total());
            f.evidence = "absence spelled " + std::to_string(null_spellings.variants.size()) +
                         " ways: " + null_spellings.listed();
            out.push_back(std::move(f));
        }

        for (const auto& canon : group_order) {
            const VariantSet& group = canonical_groups[canon];
            if (group.variants.size() < 2) continue;
            SmellFinding f;
            f.table = table.name;
            f.column = table.header[c];
            f.kind = Attribute::consistency;
            f.rows = group.all_rows();
            f.score = 1.0 - static_cast<double>(group.majority()) /
                                static_cast<double>(group.total());
            f.evidence = std::to_string(group.variants.size()) +
                         " spellings of one value: " + group.listed();
            out.push_back(std::move(f));
        }
    }
    sort_smells(out);
    return out;
}

std::vector<SmellFinding> detect_syntactic(const Table& table, const TableConstraint& schema) {
    std::vector<SmellFinding> out;
    if (schema.key.empty()) return out;
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        const ColumnConstraint& col = schema.columns[c];
        if (!col.label_like) continue;

        // label value -> rows having a key identity, first-appearance order
        std::vector<std::pair<std::string, std::vector<std::size_t>>> by_value;
        for (std::size_t r = 0; r < table.row_count(); ++r) {
            const Cell& cell = table.at(r, c);
            if (cell.is_null || excluded(cell, &col)) continue;
            if (!row_key(table, schema, r)) continue;
            auto it = std::find_if(by_value.begin(), by_value.end(),
                                   [&](const auto& e) { return e.first == cell.raw; });
            if (it == by_value.end())
                by_value.push_back({cell.raw, {r}});
            else
                it->second.push_back(r);
        }

        for (const auto& [value, rows] : by_value) {
            if (rows.size() < 2) continue;
            std::vector<std::string> keys;
            for (std::size_t r : rows) keys.push_back(*row_key(table, schema, r));
            std::sort(keys.begin(), keys.end());
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
            if (keys.size() < 2) continue;
            SmellFinding f;
            f.table = table.name;
            f.column = col.name;
            f.kind = Attribute::syntactic;
            f.rows = rows;
            f.score = 1.0 - 1.0 / static_cast<double>(keys.size());
            f.evidence = "value " + quoted(value) + " is shared by " +
                         std::to_string(keys.size()) + " distinct keys";
            out.push_back(std::move(f));
        }
    }
    sort_smells(out);
    return out;
}

std::vector<SmellFinding> detect_encoding(const Table& table, const SmellParams& params,
                                          const TableConstraint* schema) {
    std::vector<SmellFinding> out;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        const ColumnConstraint* col = schema ? schema->find_column(table.header[c]) : nullptr;

        std::vector<std::size_t> included;
        std::map<ValueType, std::size_t> histogram;
        for (std::size_t r = 0; r < table.row_count(); ++r) {
            const Cell& cell = table.at(r, c);
            if (cell.is_null || excluded(cell, col)) continue;
            included.push_back(r);
            ++histogram[cell.inferred_type];
        }
        if (included.empty()) continue;

        ValueType majority = ValueType::text;
        std::size_t best = 0;
        for (const auto& [type, count] : histogram) {
            if (count > best) {
                best = count;
                majority = type;
            }
        }
        double share = static_cast<double>(best) / static_cast<double>(included.size());
        if (share < params.type_majority) continue;

        for (std::size_t r : included) {
            const Cell& cell = table.at(r, c);
            if (cell.inferred_type != majority) {
                SmellFinding f;
                f.table = table.name;
                f.column = table.header[c];
                f.kind = Attribute::encoding;
                f.rows = {r};
                f.score = share;
                f.evidence = std::string(to_string(cell.inferred_type)) + "-typed value " +
                             quoted(cell.raw) + " in a " +
                             std::string(to_string(majority)) + "-majority column";
                out.push_back(std::move(f));
            }
            bool numeric_majority =
                majority == ValueType::integer || majority == ValueType::floating;
            if (numeric_majority && cell.leading_zero_numeric) {
                SmellFinding f;
                f.table = table.name;
                f.column = table.header[c];
                f.kind = Attribute::encoding;
                f.rows = {r};
                f.score = 1.0;
                f.evidence = "leading-zero numeral " + quoted(cell.raw) +
                             " would lose digits as a number";
                out.push_back(std::move(f));
            }
        }
    }
    sort_smells(out);
    return out;
}

std::vector<SmellFinding> detect_smells(const Table& table, const TableConstraint& schema,
                                        const NullPolicy& nulls, const SmellParams& params) {
    std::vector<SmellFinding> out = detect_believability(table, schema, params);
    auto append = [&out](std::vector<SmellFinding> more) {
        out.insert(out.end(), std::make_move_iterator(more.begin()),
                   std::make_move_iterator(more.end()));
    };
    append(detect_consistency(table, nulls, &schema));
    append(detect_syntactic(table, schema));
    append(detect_encoding(table, params, &schema));
    sort_smells(out);
    return out;
}

}  // namespace dq
