#include "dq/detectors.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace dq {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string join_rows(const std::vector<std::size_t>& rows) {
    std::string out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(rows[i]);
    }
    return out;
}

// Stable id: tables, constraint, row list, column list, optional
// disambiguator (baseline key or reference element).
std::string make_id(const std::vector<std::string>& tables, const std::string& constraint,
                    const std::vector<std::size_t>& rows, const std::vector<std::string>& columns,
                    const std::string& extra = {}) {
    std::string id = join(tables, "+") + ":" + constraint + ":r" + join_rows(rows) + ":" +
                     join(columns, ",");
    if (!extra.empty()) id += ":" + extra;
    return id;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string format_value(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    if (const auto* dt = std::get_if<Date>(&v)) return to_string(*dt);
    return join(std::get<std::vector<std::string>>(v), ";");
}

std::string range_text(const RangeConstraint& r) {
    std::string out = r.min_inclusive ? "[" : "(";
    out += r.min ? format_value(*r.min) : "-inf";
    out += ", ";
    out += r.max ? format_value(*r.max) : "inf";
    out += (r.max && r.max_inclusive) ? "]" : ")";
    return out;
}

// A cell is usable for typed checks only when it parsed.
bool available(const Cell& cell) { return !cell.is_null && !cell.parse_failed; }

struct KeyGroup {
    std::string key;
    std::vector<std::size_t> rows;
};

// Rows grouped by key identity, ordered by first occurrence.
std::vector<KeyGroup> key_groups(const Table& table, const TableConstraint& schema) {
    std::vector<KeyGroup> groups;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        auto key = row_key(table, schema, r);
        if (!key) continue;
        auto [it, inserted] = index.emplace(*key, groups.size());
        if (inserted) groups.push_back({*key, {}});
        groups[it->second].rows.push_back(r);
    }
    return groups;
}

// Unique plain column names of a rule, source order.
std::vector<std::string> rule_columns(const Expr& expr, bool qualified) {
    std::vector<ColumnRef> plain, aggregated;
    collect_columns(expr, plain, aggregated);
    std::vector<std::string> out;
    for (const auto& ref : plain) {
        std::string name = qualified ? ref.qualified() : ref.column;
        if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    }
    return out;
}

}  // namespace

std::optional<std::string> row_key(const Table& table, const TableConstraint& schema,
                                   std::size_t row) {
    if (schema.key.empty()) return std::nullopt;
    std::string key;
    bool first = true;
    for (const auto& col : schema.key) {
        auto idx = table.column_index(col);
        if (!idx) return std::nullopt;
        const Cell& cell = table.at(row, *idx);
        if (cell.is_null) return std::nullopt;
        if (!first) key += '\t';
        key += cell.raw;
        first = false;
    }
    return key;
}

bool issue_less(const Issue& a, const Issue& b) {
    auto key = [](const Issue& i) {
        return std::tuple(join(i.tables, "+"),
                          i.rows.empty() ? -1LL : static_cast<long long>(i.rows.front()),
                          join(i.columns, ","), i.constraint, i.id);
    };
    return key(a) < key(b);
}

void sort_issues(std::vector<Issue>& issues) {
    std::sort(issues.begin(), issues.end(), issue_less);
}

// ---------------------------------------------------------------------------
// Missing

namespace {

void missing_cells(const Table& table, const TableConstraint& schema,
                   std::vector<Issue>& out) {
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        const ColumnConstraint& col = schema.columns[c];
        if (!col.required) continue;
        for (std::size_t r = 0; r < table.row_count(); ++r) {
            const Cell& cell = table.at(r, c);
            if (!cell.is_null) continue;
            Issue issue;
            issue.tables = {table.name};
            issue.rows = {r};
            issue.columns = {col.name};
            issue.scope = Scope::cell;
            issue.attribute = Attribute::missing;
            issue.constraint = "required";
            issue.evidence = "required value absent (raw " + quoted(cell.raw) + ")";
            issue.id = make_id(issue.tables, issue.constraint, issue.rows, issue.columns);
            out.push_back(std::move(issue));
        }
    }
}

void missing_keys(const Table& table, const TableConstraint& schema,
                  const std::vector<std::string>& baseline, std::vector<Issue>& out) {
    std::unordered_set<std::string> present;
    for (std::size_t r = 0; r < table.row_count(); ++r)
        if (auto key = row_key(table, schema, r)) present.insert(*key);
    for (const auto& expected : baseline) {
        if (present.count(expected)) continue;
        Issue issue;
        issue.tables = {table.name};
        issue.columns = schema.key;
        issue.scope = Scope::inter_row;
        issue.attribute = Attribute::missing;
        issue.constraint = "expected_keys";
        issue.evidence =
            "expected key " + quoted(expected) + " absent from table " + quoted(table.name);
        issue.id = make_id(issue.tables, issue.constraint, issue.rows, issue.columns, expected);
        out.push_back(std::move(issue));
    }
}

// Raw key values present in the reference target column.
std::unordered_set<std::string> target_keys(const Table& table, std::size_t col) {
    std::unordered_set<std::string> keys;
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        const Cell& cell = table.at(r, col);
        if (!cell.is_null) keys.insert(cell.raw);
    }
    return keys;
}

std::vector<std::string> reference_elements(const Cell& cell) {
    if (cell.parsed && std::holds_alternative<std::vector<std::string>>(*cell.parsed))
        return std::get<std::vector<std::string>>(*cell.parsed);
    return {cell.raw};
}

void missing_references(const Dataset& dataset, const ConstraintSchema& schema,
                        std::vector<Issue>& out) {
    for (const auto& rule : schema.cross_table) {
        if (rule.kind != CrossRuleKind::reference) continue;
        const Table* from = dataset.find_table(rule.from.table);
        const Table* to = dataset.find_table(rule.to.table);
        if (!from || !to) continue;
        auto from_col = from->column_index(rule.from.column);
        auto to_col = to->column_index(rule.to.column);
        if (!from_col || !to_col) continue;
        auto targets = target_keys(*to, *to_col);
        for (std::size_t r = 0; r < from->row_count(); ++r) {
            const Cell& cell = from->at(r, *from_col);
            if (!available(cell)) continue;  // null or malformed: other detectors own it
            std::set<std::string> seen;
            for (const auto& element : reference_elements(cell)) {
                if (targets.count(element) || !seen.insert(element).second) continue;
                Issue issue;
                issue.tables = {rule.from.table, rule.to.table};
                issue.rows = {r};
                issue.columns = {rule.from.column};
                issue.scope = Scope::inter_table;
                issue.attribute = Attribute::missing;
                issue.constraint = rule.id;
                issue.evidence = quoted(element) + " has no match in " + rule.to.table + "." +
                                 rule.to.column;
                issue.id =
                    make_id(issue.tables, issue.constraint, issue.rows, issue.columns, element);
                out.push_back(std::move(issue));
            }
        }
    }
}

}  // namespace

std::vector<Issue> detect_missing(const Dataset& dataset, const ConstraintSchema& schema,
                                  const KeyBaselines& baselines) {
    std::vector<Issue> out;
    for (const auto& table_schema : schema.tables) {
        const Table* table = dataset.find_table(table_schema.name);
        if (!table) continue;
        missing_cells(*table, table_schema, out);
        if (auto it = baselines.find(table_schema.name); it != baselines.end())
            missing_keys(*table, table_schema, it->second, out);
    }
    missing_references(dataset, schema, out);
    sort_issues(out);
    return out;
}

std::vector<Issue> detect_missing(const Dataset& dataset, const ConstraintSchema& schema) {
    KeyBaselines baselines;
    for (const auto& table_schema : schema.tables)
        if (table_schema.expected_keys)
            baselines[table_schema.name] = load_key_baseline(*table_schema.expected_keys);
    return detect_missing(dataset, schema, baselines);
}

// ---------------------------------------------------------------------------
// Invalid

namespace {

bool range_violated(const RangeConstraint& range, const Value& v) {
    if (std::holds_alternative<Date>(v)) {
        const Date& d = std::get<Date>(v);
        if (range.min) {
            const Date& lo = std::get<Date>(*range.min);
            if (range.min_inclusive ? d < lo : d <= lo) return true;
        }
        if (range.max) {
            const Date& hi = std::get<Date>(*range.max);
            if (range.max_inclusive ? d > hi : d >= hi) return true;
        }
        return false;
    }
    double x = std::holds_alternative<std::int64_t>(v)
                   ? static_cast<double>(std::get<std::int64_t>(v))
                   : std::get<double>(v);
    auto bound = [](const Value& b) {
        if (const auto* i = std::get_if<std::int64_t>(&b)) return static_cast<double>(*i);
        return std::get<double>(b);
    };
    if (range.min) {
        double lo = bound(*range.min);
        if (range.min_inclusive ? x < lo : x <= lo) return true;
    }
    if (range.max) {
        double hi = bound(*range.max);
        if (range.max_inclusive ? x > hi : x >= hi) return true;
    }
    return false;
}

std::optional<std::pair<InvalidKind, std::string>> invalid_reason(const Cell& cell,
                                                                  const ColumnConstraint& col) {
    if (col.pattern_re && !std::regex_match(cell.raw, *col.pattern_re))
        return {{InvalidKind::pattern,
                 quoted(cell.raw) + " does not match pattern " + quoted(*col.pattern)}};
    if (cell.parse_failed)
        return {{InvalidKind::type, quoted(cell.raw) + " does not parse as " +
                                        std::string(to_string(col.declared_type))}};
    if (col.range && cell.parsed && range_violated(*col.range, *cell.parsed))
        return {{InvalidKind::range,
                 quoted(cell.raw) + " outside range " + range_text(*col.range)}};
    if (col.enumeration &&
        std::find(col.enumeration->begin(), col.enumeration->end(), cell.raw) ==
            col.enumeration->end()) {
        std::string allowed;
        for (std::size_t i = 0; i < col.enumeration->size(); ++i)
            allowed += (i ? ", " : "") + (*col.enumeration)[i];
        return {{InvalidKind::range, quoted(cell.raw) + " not in {" + allowed + "}"}};
    }
    return std::nullopt;
}

}  // namespace

std::optional<InvalidKind> cell_invalid_kind(const Cell& cell, const ColumnConstraint& col) {
    if (cell.is_null) return std::nullopt;
    auto reason = invalid_reason(cell, col);
    if (!reason) return std::nullopt;
    return reason->first;
}

std::vector<Issue> detect_invalid(const Table& table, const TableConstraint& schema) {
    std::vector<Issue> out;
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        const ColumnConstraint& col = schema.columns[c];
        for (std::size_t r = 0; r < table.row_count(); ++r) {
            const Cell& cell = table.at(r, c);
            if (cell.is_null) continue;  // absence is the missing detector's finding
            auto reason = invalid_reason(cell, col);
            if (!reason) continue;
            Issue issue;
            issue.tables = {table.name};
            issue.rows = {r};
            issue.columns = {col.name};
            issue.scope = Scope::cell;
            issue.attribute = Attribute::invalid;
            issue.invalid_kind = reason->first;
            issue.constraint = std::string(to_string(reason->first));
            issue.evidence = std::move(reason->second);
            issue.id = make_id(issue.tables, issue.constraint, issue.rows, issue.columns);
            out.push_back(std::move(issue));
        }
    }
    sort_issues(out);
    return out;
}

// ---------------------------------------------------------------------------
// Duplicates

std::vector<Issue> detect_duplicates(const Table& table, const TableConstraint& schema) {
    std::vector<Issue> out;
    if (schema.key.empty()) return out;
    for (const auto& group : key_groups(table, schema)) {
        if (group.rows.size() < 2) continue;
        // classes of fully identical raw rows, ordered by first member
        std::vector<std::vector<std::size_t>> classes;
        for (std::size_t row : group.rows) {
            bool placed = false;
            for (auto& cls : classes) {
                if (std::equal(table.rows[cls.front()].begin(), table.rows[cls.front()].end(),
                               table.rows[row].begin(), table.rows[row].end(),
                               [](const Cell& a, const Cell& b) { return a.raw == b.raw; })) {
                    cls.push_back(row);
                    placed = true;
                    break;
                }
            }
            if (!placed) classes.push_back({row});
        }
        for (const auto& cls : classes) {
            if (cls.size() < 2) continue;
            Issue issue;
            issue.tables = {table.name};
            issue.rows = cls;
            issue.scope = Scope::inter_row;
            issue.attribute = Attribute::duplicate;
            issue.constraint = "unique_key";
            issue.evidence = std::to_string(cls.size()) + " identical rows for key " +
                             quoted(group.key);
            issue.id = make_id(issue.tables, issue.constraint, issue.rows, issue.columns);
            out.push_back(std::move(issue));
        }
    }
    sort_issues(out);
    return out;
}

// ---------------------------------------------------------------------------
// Conflicts

namespace {

// Cell identity for inter-row comparison: every null token collapses to
// one marker so representation drift stays a smell, not a conflict.
std::string canonical_cell(const Cell& cell) {
    return cell.is_null ? std::string(1, '\0') : cell.raw;
}

void row_rule_conflicts(const Table& table, const TableConstraint& schema,
                        std::vector<Issue>& out) {
    for (const auto& rule : schema.row_rules) {
        std::vector<std::string> columns = rule_columns(*rule.expr, false);
        for (std::size_t r = 0; r < table.row_count(); ++r) {
            Binding binding;
            binding.column = [&](const ColumnRef& ref) -> std::optional<Value> {
                auto idx = table.column_index(ref.column);
                if (!idx) return std::nullopt;
                const Cell& cell = table.at(r, *idx);
                if (!available(cell)) return std::nullopt;
                return cell.parsed;
            };
            binding.aggregate_sum = [](const ColumnRef&) -> std::optional<double> {
                return std::nullopt;  // unreachable: row rules reject aggregates
            };
            if (eval_rule(*rule.expr, binding, rule.tolerance) != TriState::violated) continue;
            std::string values;
            for (const auto& col : columns) {
                auto idx = table.column_index(col);
                if (!values.empty()) values += ", ";
                values += col + "=" + quoted(idx ? table.at(r, *idx).raw : std::string{});
            }
            Issue issue;
            issue.tables = {table.name};
            issue.rows = {r};
            issue.columns = columns;
            issue.scope = Scope::inter_column;
            issue.attribute = Attribute::conflict;
            issue.constraint = rule.id;
            issue.evidence = quoted(rule.source) + " violated (" + values + ")";
            issue.id = make_id(issue.tables, issue.constraint, issue.rows, issue.columns);
            out.push_back(std::move(issue));
        }
    }
}

void inter_row_conflicts(const Table& table, const TableConstraint& schema,
                         std::vector<Issue>& out) {
    if (schema.key.empty()) return;
    for (const auto& group : key_groups(table, schema)) {
        if (group.rows.size() < 2) continue;
        std::vector<std::string> differing;
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            if (schema.is_key_column(table.header[c])) continue;
            const std::string first = canonical_cell(table.at(group.rows.front(), c));
            for (std::size_t i = 1; i < group.rows.size(); ++i) {
                if (canonical_cell(table.at(group.rows[i], c)) != first) {
                    differing.push_back(table.header[c]);
                    break;
                }
            }
        }
        if (differing.empty()) continue;  // identical rows: duplicate territory
        Issue issue;
        issue.tables = {table.name};
        issue.rows = group.rows;
        issue.columns = differing;
        issue.scope = Scope::inter_row;
        issue.attribute = Attribute::conflict;
        issue.constraint = "key_conflict";
        issue.evidence = "rows sharing key " + quoted(group.key) + " disagree in " +
                         join(differing, ", ");
        issue.id = make_id(issue.tables, issue.constraint, issue.rows, issue.columns);
        out.push_back(std::move(issue));
    }
}

const CrossTableRule* find_reference(const ConstraintSchema& schema, const std::string& from,
                                     const std::string& to) {
    for (const auto& rule : schema.cross_table)
        if (rule.kind == CrossRuleKind::reference && rule.from.table == from &&
            rule.to.table == to)
            return &rule;
    return nullptr;
}

double value_as_double(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    return std::get<double>(v);
}

// Sum of the aggregated column over rows joined from one driver row;
// nullopt when the join or any summand cannot be resolved.
std::optional<double> joined_sum(const Dataset& dataset, const ConstraintSchema& schema,
                                 const std::string& driver_table, std::size_t driver_row,
                                 const ColumnRef& agg) {
    const CrossTableRule* ref = find_reference(schema, driver_table, agg.table);
    if (!ref) return std::nullopt;
    const Table* from = dataset.find_table(ref->from.table);
    const Table* to = dataset.find_table(ref->to.table);
    if (!from || !to) return std::nullopt;
    auto from_col = from->column_index(ref->from.column);
    auto to_col = to->column_index(ref->to.column);
    auto agg_col = to->column_index(agg.column);
    if (!from_col || !to_col || !agg_col) return std::nullopt;

    const Cell& link = from->at(driver_row, *from_col);
    if (!available(link)) return std::nullopt;

    double sum = 0;
    for (const auto& element : reference_elements(link)) {
        bool matched = false;
        for (std::size_t r = 0; r < to->row_count(); ++r) {
            const Cell& key_cell = to->at(r, *to_col);
            if (key_cell.is_null || key_cell.raw != element) continue;
            matched = true;
            const Cell& term = to->at(r, *agg_col);
            if (!available(term)) return std::nullopt;
            sum += value_as_double(*term.parsed);
        }
        if (!matched) return std::nullopt;  // dangling reference: missing detector owns it
    }
    return sum;
}

void cross_expression_conflicts(const Dataset& dataset, const ConstraintSchema& schema,
                                std::vector<Issue>& out) {
    for (const auto& rule : schema.cross_table) {
        if (rule.kind != CrossRuleKind::expression) continue;
        std::vector<ColumnRef> plain, aggregated;
        collect_columns(*rule.expr, plain, aggregated);
        const std::string& driver_name = plain.front().table;
        const Table* driver = dataset.find_table(driver_name);
        if (!driver) continue;

        std::vector<std::string> tables{driver_name};
        for (const auto& agg : aggregated)
            if (std::find(tables.begin(), tables.end(), agg.table) == tables.end())
                tables.push_back(agg.table);
        std::vector<std::string> columns = rule_columns(*rule.expr, false);

        for (std::size_t r = 0; r < driver->row_count(); ++r) {
            Binding binding;
            binding.column = [&](const ColumnRef& ref) -> std::optional<Value> {
                auto idx = driver->column_index(ref.column);
                if (!idx) return std::nullopt;
                const Cell& cell = driver->at(r, *idx);
                if (!available(cell)) return std::nullopt;
                return cell.parsed;
            };
            binding.aggregate_sum = [&](const ColumnRef& ref) -> std::optional<double> {
                return joined_sum(dataset, schema, driver_name, r, ref);
            };
            if (eval_rule(*rule.expr, binding, rule.tolerance) != TriState::violated) continue;

            std::string values;
            std::set<std::string> described;
            for (const auto& ref : plain) {
                if (!described.insert(ref.qualified()).second) continue;
                auto idx = driver->column_index(ref.column);
                if (!values.empty()) values += "; ";
                values += ref.qualified() + "=" +
                          quoted(idx ? driver->at(r, *idx).raw : std::string{});
            }
            for (const auto& ref : aggregated) {
                std::string name = "sum(" + ref.qualified() + ")";
                if (!described.insert(name).second) continue;
                auto sum = joined_sum(dataset, schema, driver_name, r, ref);
                if (!values.empty()) values += "; ";
                values += name + "=" + (sum ? format_double(*sum) : "?");
            }
            Issue issue;
            issue.tables = tables;
            issue.rows = {r};
            issue.columns = columns;
            issue.scope = Scope::inter_table;
            issue.attribute = Attribute::conflict;
            issue.constraint = rule.id;
            issue.evidence = quoted(rule.source) + " violated (" + values + ")";
            issue.id = make_id(issue.tables, issue.constraint, issue.rows, issue.columns);
            out.push_back(std::move(issue));
        }
    }
}

void baseline_conflicts(const Table& table, const TableConstraint& schema,
                        std::vector<Issue>& out) {
    if (!schema.baseline_columns) return;
    auto in = [](const std::vector<std::string>& list, const std::string& name) {
        return std::find(list.begin(), list.end(), name) != list.end();
    };
    auto emit = [&](const std::string& column, const std::string& evidence) {
        Issue issue;
        issue.tables = {table.name};
        issue.columns = {column};
        issue.scope = Scope::inter_column;
        issue.attribute = Attribute::conflict;
        issue.constraint = "baseline";
        issue.evidence = evidence;
        issue.id = make_id(issue.tables, issue.constraint, issue.rows, issue.columns);
        out.push_back(std::move(issue));
    };
    for (const auto& col : table.header)
        if (!in(*schema.baseline_columns, col))
            emit(col, "column " + quoted(col) + " is a new feature not in the baseline");
    for (const auto& col : *schema.baseline_columns)
        if (!in(table.header, col))
            emit(col, "baseline column " + quoted(col) + " is missing from the table");
}

}  // namespace

std::vector<Issue> detect_conflicts(const Dataset& dataset, const ConstraintSchema& schema) {
    std::vector<Issue> out;
    for (const auto& table_schema : schema.tables) {
        const Table* table = dataset.find_table(table_schema.name);
        if (!table) continue;
        row_rule_conflicts(*table, table_schema, out);
        inter_row_conflicts(*table, table_schema, out);
        baseline_conflicts(*table, table_schema, out);
    }
    cross_expression_conflicts(dataset, schema, out);
    sort_issues(out);
    return out;
}

}  // namespace dq
