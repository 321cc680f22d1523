#include "dq/report.hpp"

#include <algorithm>
#include <array>

#include "json.hpp"

#include "dq/classify.hpp"

namespace dq {

using json = nlohmann::ordered_json;

std::string issue_jsonl(const Issue& issue) {
    json obj;
    obj["id"] = issue.id;
    obj["tables"] = issue.tables;
    obj["rows"] = issue.rows;
    obj["columns"] = issue.columns;
    obj["scope"] = to_string(issue.scope);
    obj["attribute"] = to_string(issue.attribute);
    if (issue.outcome)
        obj["outcome"] = to_string(*issue.outcome);
    else
        obj["outcome"] = nullptr;
    obj["constraint"] = issue.constraint;
    obj["evidence"] = issue.evidence;
    return obj.dump();
}

std::string smell_jsonl(const SmellFinding& smell) {
    json obj;
    obj["table"] = smell.table;
    obj["column"] = smell.column;
    obj["kind"] = to_string(smell.kind);
    obj["rows"] = smell.rows;
    obj["evidence"] = smell.evidence;
    obj["score"] = smell.score;
    return obj.dump();
}

namespace {

// padded two-column layout shared by the stderr summary and text mode
std::string layout(const std::vector<std::vector<std::string>>& grid,
                   std::size_t left_aligned_cols) {
    std::vector<std::size_t> widths;
    for (const auto& row : grid) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());
    }
    std::string out;
    for (const auto& row : grid) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line += "  ";
            std::string pad(widths[c] - row[c].size(), ' ');
            line += c < left_aligned_cols ? row[c] + pad : pad + row[c];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += csv_escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

const char* category_header(SummaryMode mode) {
    switch (mode) {
        case SummaryMode::attribute_dist:
        case SummaryMode::attribute_stats:
        case SummaryMode::crosstab: return "attribute";
        case SummaryMode::outcome_dist:
        case SummaryMode::outcome_stats: return "outcome";
        case SummaryMode::pair_stats: return "pair";
    }
    return "category";
}

const std::array<const char*, 9> kStatsHeader{
    "count",          "severity_mean", "severity_max",       "priority_mean",
    "priority_max",   "days_to_fix_mean", "days_to_fix_max", "comment_number_mean",
    "comment_number_max"};

std::vector<std::string> stats_cells(const CategoryStats& s) {
    return {std::to_string(s.count),
            format_double(s.severity.mean),
            format_double(s.severity.max),
            format_double(s.priority.mean),
            format_double(s.priority.max),
            format_double(s.days_to_fix.mean),
            format_double(s.days_to_fix.max),
            format_double(s.comment_number.mean),
            format_double(s.comment_number.max)};
}

std::vector<std::vector<std::string>> summary_grid(const Summary& summary) {
    std::vector<std::vector<std::string>> grid;
    switch (summary.mode) {
        case SummaryMode::attribute_dist:
        case SummaryMode::outcome_dist: {
            grid.push_back({category_header(summary.mode), "count"});
            for (const auto& [label, count] : summary.counts)
                grid.push_back({label, std::to_string(count)});
            break;
        }
        case SummaryMode::attribute_stats:
        case SummaryMode::outcome_stats:
        case SummaryMode::pair_stats: {
            std::vector<std::string> header{category_header(summary.mode)};
            header.insert(header.end(), kStatsHeader.begin(), kStatsHeader.end());
            grid.push_back(std::move(header));
            for (const auto& [label, stats] : summary.stats) {
                std::vector<std::string> row{label};
                auto cells = stats_cells(stats);
                row.insert(row.end(), cells.begin(), cells.end());
                grid.push_back(std::move(row));
            }
            break;
        }
        case SummaryMode::crosstab: {
            std::vector<std::string> header{category_header(summary.mode)};
            header.insert(header.end(), summary.col_labels.begin(), summary.col_labels.end());
            grid.push_back(std::move(header));
            for (std::size_t r = 0; r < summary.row_labels.size(); ++r) {
                std::vector<std::string> row{summary.row_labels[r]};
                for (std::size_t count : summary.matrix[r])
                    row.push_back(std::to_string(count));
                grid.push_back(std::move(row));
            }
            break;
        }
    }
    return grid;
}

}  // namespace

std::string render_summary_text(const Summary& summary) {
    return layout(summary_grid(summary), 1);
}

std::string render_summary_csv(const Summary& summary) {
    std::string out;
    for (const auto& row : summary_grid(summary)) out += csv_row(row);
    return out;
}

std::string render_summary_jsonl(const Summary& summary) {
    std::string out;
    switch (summary.mode) {
        case SummaryMode::attribute_dist:
        case SummaryMode::outcome_dist: {
            for (const auto& [label, count] : summary.counts) {
                json obj;
                obj["category"] = label;
                obj["count"] = count;
                out += obj.dump() + "\n";
            }
            break;
        }
        case SummaryMode::attribute_stats:
        case SummaryMode::outcome_stats:
        case SummaryMode::pair_stats: {
            for (const auto& [label, stats] : summary.stats) {
                json obj;
                obj["category"] = label;
                obj["count"] = stats.count;
                auto metric = [](const MetricStats& m) {
                    json v;
                    v["mean"] = m.mean;
                    v["max"] = m.max;
                    return v;
                };
                obj["severity"] = metric(stats.severity);
                obj["priority"] = metric(stats.priority);
                obj["days_to_fix"] = metric(stats.days_to_fix);
                obj["comment_number"] = metric(stats.comment_number);
                out += obj.dump() + "\n";
            }
            break;
        }
        case SummaryMode::crosstab: {
            for (std::size_t r = 0; r < summary.row_labels.size(); ++r) {
                for (std::size_t c = 0; c < summary.col_labels.size(); ++c) {
                    if (!summary.matrix[r][c]) continue;
                    json obj;
                    obj["attribute"] = summary.row_labels[r];
                    obj["outcome"] = summary.col_labels[c];
                    obj["count"] = summary.matrix[r][c];
                    out += obj.dump() + "\n";
                }
            }
            break;
        }
    }
    return out;
}

std::string findings_summary(const std::vector<Issue>& issues,
                             const std::vector<SmellFinding>& smells) {
    constexpr std::array<Attribute, 8> order{
        Attribute::missing,       Attribute::invalid,     Attribute::duplicate,
        Attribute::conflict,      Attribute::believability, Attribute::consistency,
        Attribute::syntactic,     Attribute::encoding,
    };
    std::vector<std::vector<std::string>> grid;
    grid.push_back({"attribute", "count"});
    std::size_t total = 0;
    for (Attribute a : order) {
        std::size_t n = 0;
        for (const auto& issue : issues) n += issue.attribute == a;
        for (const auto& smell : smells) n += smell.kind == a;
        if (!n) continue;
        grid.push_back({std::string(to_string(a)), std::to_string(n)});
        total += n;
    }
    grid.push_back({"total", std::to_string(total)});
    return layout(grid, 1);
}

std::string ticket_csv_header() {
    return "id,attribute,outcome,severity,priority,days_to_fix,comment_number\n";
}

std::string ticket_csv_line(const Ticket& ticket) {
    return csv_row({ticket.id, std::string(to_string(ticket.attribute)),
                    std::string(to_string(ticket.outcome)),
                    std::string(severity_word(ticket.severity)),
                    std::string(priority_word(ticket.priority)),
                    format_double(ticket.days_to_fix), std::to_string(ticket.comment_number)});
}

}  // namespace dq
