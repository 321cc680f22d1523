#include "dq/triage.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "json.hpp"

#include "dq/classify.hpp"
#include "dq/table.hpp"
#include "dq/value.hpp"

namespace dq {

namespace {

constexpr std::array<std::string_view, 4> kSeverityWords{"Low", "Medium", "High", "Critical"};
constexpr std::array<std::string_view, 5> kPriorityWords{"Lowest", "Low", "Medium", "High",
                                                         "Highest"};

constexpr std::array<Attribute, 8> kAttributeOrder{
    Attribute::missing,      Attribute::invalid,   Attribute::duplicate, Attribute::conflict,
    Attribute::believability, Attribute::consistency, Attribute::syntactic, Attribute::encoding,
};

constexpr std::array<Outcome, 5> kOutcomeOrder{Outcome::pattern, Outcome::range, Outcome::rule,
                                               Outcome::knowledge, Outcome::none};

}  // namespace

std::optional<int> severity_from_word(std::string_view word) {
    for (std::size_t i = 0; i < kSeverityWords.size(); ++i)
        if (kSeverityWords[i] == word) return static_cast<int>(i);
    return std::nullopt;
}

std::optional<int> priority_from_word(std::string_view word) {
    for (std::size_t i = 0; i < kPriorityWords.size(); ++i)
        if (kPriorityWords[i] == word) return static_cast<int>(i);
    return std::nullopt;
}

std::string_view severity_word(int level) {
    return kSeverityWords.at(static_cast<std::size_t>(level));
}

std::string_view priority_word(int level) {
    return kPriorityWords.at(static_cast<std::size_t>(level));
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw TicketError(where + ": " + what);
}

Attribute parse_attribute(const std::string& word, const std::string& where) {
    auto a = attribute_from_string(word);
    if (!a) fail(where, "unknown attribute \"" + word + "\"");
    return *a;
}

Outcome parse_outcome(const std::string& word, const std::string& where) {
    auto o = outcome_from_string(word);
    if (!o) fail(where, "unknown outcome \"" + word + "\"");
    return *o;
}

int parse_severity(const std::string& word, const std::string& where) {
    auto s = severity_from_word(word);
    if (!s) fail(where, "unknown severity \"" + word + "\"");
    return *s;
}

int parse_priority(const std::string& word, const std::string& where) {
    auto p = priority_from_word(word);
    if (!p) fail(where, "unknown priority \"" + word + "\"");
    return *p;
}

double parse_days(const std::string& text, const std::string& where) {
    auto v = parse_float(text);
    if (!v) fail(where, "days_to_fix \"" + text + "\" is not a number");
    if (*v < 0) fail(where, "days_to_fix must be non-negative");
    return *v;
}

std::int64_t parse_comments(const std::string& text, const std::string& where) {
    auto v = parse_integer(text);
    if (!v) fail(where, "comment_number \"" + text + "\" is not an integer");
    if (*v < 0) fail(where, "comment_number must be non-negative");
    return *v;
}

const std::vector<std::string> kTicketHeader{
    "id", "attribute", "outcome", "severity", "priority", "days_to_fix", "comment_number"};

std::vector<Ticket> parse_tickets_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    try {
        records = parse_csv(text);
    } catch (const TableLoadError& e) {
        throw TicketError(std::string("tickets: ") + e.what());
    }
    if (records.empty()) throw TicketError("tickets: empty input, header row required");
    if (records.front() != kTicketHeader)
        throw TicketError(
            "tickets: header must be id,attribute,outcome,severity,priority,days_to_fix,"
            "comment_number");
    std::vector<Ticket> tickets;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        const std::string where = "tickets record " + std::to_string(i + 1);
        if (rec.size() != kTicketHeader.size())
            fail(where, "has " + std::to_string(rec.size()) + " fields, expected 7");
        Ticket t;
        t.id = rec[0];
        t.attribute = parse_attribute(rec[1], where);
        t.outcome = parse_outcome(rec[2], where);
        t.severity = parse_severity(rec[3], where);
        t.priority = parse_priority(rec[4], where);
        t.days_to_fix = parse_days(rec[5], where);
        t.comment_number = parse_comments(rec[6], where);
        tickets.push_back(std::move(t));
    }
    return tickets;
}

std::vector<Ticket> parse_tickets_jsonl(const std::string& text) {
    using json = nlohmann::ordered_json;
    std::vector<Ticket> tickets;
    std::size_t line_no = 0;
    std::size_t at = 0;
    while (at <= text.size()) {
        std::size_t end = text.find('\n', at);
        std::string line = end == std::string::npos ? text.substr(at)
                                                    : text.substr(at, end - at);
        at = end == std::string::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        const std::string where = "tickets line " + std::to_string(line_no);
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            fail(where, std::string("invalid JSON: ") + e.what());
        }
        if (!obj.is_object()) fail(where, "expected a JSON object");
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (std::find(kTicketHeader.begin(), kTicketHeader.end(), it.key()) ==
                kTicketHeader.end())
                fail(where, "unknown field \"" + it.key() + "\"");
        }
        auto field = [&](const char* name) -> const json& {
            auto it = obj.find(name);
            if (it == obj.end()) fail(where, std::string("missing field \"") + name + "\"");
            return *it;
        };
        auto word = [&](const char* name) {
            const json& v = field(name);
            if (!v.is_string()) fail(where, std::string("field \"") + name + "\" must be a string");
            return v.get<std::string>();
        };
        Ticket t;
        t.id = word("id");
        t.attribute = parse_attribute(word("attribute"), where);
        t.outcome = parse_outcome(word("outcome"), where);
        t.severity = parse_severity(word("severity"), where);
        t.priority = parse_priority(word("priority"), where);
        const json& days = field("days_to_fix");
        if (!days.is_number()) fail(where, "days_to_fix must be a number");
        t.days_to_fix = days.get<double>();
        if (t.days_to_fix < 0) fail(where, "days_to_fix must be non-negative");
        const json& comments = field("comment_number");
        if (!comments.is_number_integer()) fail(where, "comment_number must be an integer");
        t.comment_number = comments.get<std::int64_t>();
        if (t.comment_number < 0) fail(where, "comment_number must be non-negative");
        tickets.push_back(std::move(t));
    }
    return tickets;
}

}  // namespace

std::vector<Ticket> parse_tickets(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_tickets_jsonl(text);
    return parse_tickets_csv(text);
}

std::optional<SummaryMode> summary_mode_from_string(std::string_view s) {
    if (s == "attribute_dist") return SummaryMode::attribute_dist;
    if (s == "outcome_dist") return SummaryMode::outcome_dist;
    if (s == "attribute_stats") return SummaryMode::attribute_stats;
    if (s == "outcome_stats") return SummaryMode::outcome_stats;
    if (s == "crosstab") return SummaryMode::crosstab;
    if (s == "pair_stats") return SummaryMode::pair_stats;
    return std::nullopt;
}

std::string_view to_string(SummaryMode mode) {
    switch (mode) {
        case SummaryMode::attribute_dist: return "attribute_dist";
        case SummaryMode::outcome_dist: return "outcome_dist";
        case SummaryMode::attribute_stats: return "attribute_stats";
        case SummaryMode::outcome_stats: return "outcome_stats";
        case SummaryMode::crosstab: return "crosstab";
        case SummaryMode::pair_stats: return "pair_stats";
    }
    return "?";
}

namespace {

struct Accumulator {
    std::size_t count = 0;
    double severity_sum = 0, severity_max = 0;
    double priority_sum = 0, priority_max = 0;
    double days_sum = 0, days_max = 0;
    double comments_sum = 0, comments_max = 0;

    void add(const Ticket& t) {
        if (count == 0) {
            severity_max = t.severity;
            priority_max = t.priority;
            days_max = t.days_to_fix;
            comments_max = static_cast<double>(t.comment_number);
        } else {
            severity_max = std::max(severity_max, static_cast<double>(t.severity));
            priority_max = std::max(priority_max, static_cast<double>(t.priority));
            days_max = std::max(days_max, t.days_to_fix);
            comments_max = std::max(comments_max, static_cast<double>(t.comment_number));
        }
        severity_sum += t.severity;
        priority_sum += t.priority;
        days_sum += t.days_to_fix;
        comments_sum += static_cast<double>(t.comment_number);
        ++count;
    }

    CategoryStats finalize() const {
        CategoryStats s;
        s.count = count;
        double n = static_cast<double>(count);
        s.severity = {severity_sum / n, severity_max};
        s.priority = {priority_sum / n, priority_max};
        s.days_to_fix = {days_sum / n, days_max};
        s.comment_number = {comments_sum / n, comments_max};
        return s;
    }
};

}  // namespace

Summary summarize(const std::vector<Ticket>& tickets, SummaryMode mode) {
    bool stats_mode = mode == SummaryMode::attribute_stats ||
                      mode == SummaryMode::outcome_stats || mode == SummaryMode::pair_stats;
    if (stats_mode && tickets.empty())
        throw TicketError("tickets: stats modes need at least one ticket");

    Summary out;
    out.mode = mode;

    switch (mode) {
        case SummaryMode::attribute_dist: {
            for (Attribute a : kAttributeOrder) {
                std::size_t n = std::count_if(tickets.begin(), tickets.end(),
                                              [&](const Ticket& t) { return t.attribute == a; });
                if (n) out.counts.emplace_back(std::string(to_string(a)), n);
            }
            break;
        }
        case SummaryMode::outcome_dist: {
            for (Outcome o : kOutcomeOrder) {
                std::size_t n = std::count_if(tickets.begin(), tickets.end(), [&](const Ticket& t) {
                    return is_integrity(t.attribute) && t.outcome == o;
                });
                if (n) out.counts.emplace_back(std::string(to_string(o)), n);
            }
            break;
        }
        case SummaryMode::attribute_stats: {
            for (Attribute a : kAttributeOrder) {
                Accumulator acc;
                for (const Ticket& t : tickets)
                    if (t.attribute == a) acc.add(t);
                if (acc.count)
                    out.stats.emplace_back(std::string(to_string(a)), acc.finalize());
            }
            break;
        }
        case SummaryMode::outcome_stats: {
            for (Outcome o : kOutcomeOrder) {
                Accumulator acc;
                for (const Ticket& t : tickets)
                    if (is_integrity(t.attribute) && t.outcome == o) acc.add(t);
                if (acc.count)
                    out.stats.emplace_back(std::string(to_string(o)), acc.finalize());
            }
            break;
        }
        case SummaryMode::crosstab: {
            std::array<std::array<std::size_t, 5>, 8> grid{};
            for (const Ticket& t : tickets) {
                if (!is_integrity(t.attribute)) continue;
                std::size_t r = static_cast<std::size_t>(
                    std::find(kAttributeOrder.begin(), kAttributeOrder.end(), t.attribute) -
                    kAttributeOrder.begin());
                std::size_t c = static_cast<std::size_t>(
                    std::find(kOutcomeOrder.begin(), kOutcomeOrder.end(), t.outcome) -
                    kOutcomeOrder.begin());
                ++grid[r][c];
            }
            std::vector<std::size_t> used_rows, used_cols;
            for (std::size_t r = 0; r < grid.size(); ++r)
                for (std::size_t c = 0; c < grid[r].size(); ++c)
                    if (grid[r][c]) {
                        if (std::find(used_rows.begin(), used_rows.end(), r) == used_rows.end())
                            used_rows.push_back(r);
                        if (std::find(used_cols.begin(), used_cols.end(), c) == used_cols.end())
                            used_cols.push_back(c);
                    }
            std::sort(used_rows.begin(), used_rows.end());
            std::sort(used_cols.begin(), used_cols.end());
            for (std::size_t r : used_rows)
                out.row_labels.emplace_back(to_string(kAttributeOrder[r]));
            for (std::size_t c : used_cols)
                out.col_labels.emplace_back(to_string(kOutcomeOrder[c]));
            for (std::size_t r : used_rows) {
                std::vector<std::size_t> row;
                for (std::size_t c : used_cols) row.push_back(grid[r][c]);
                out.matrix.push_back(std::move(row));
            }
            break;
        }
        case SummaryMode::pair_stats: {
            for (Attribute a : kAttributeOrder) {
                for (Outcome o : kOutcomeOrder) {
                    Accumulator acc;
                    for (const Ticket& t : tickets)
                        if (t.attribute == a && t.outcome == o) acc.add(t);
                    if (acc.count)
                        out.stats.emplace_back(std::string(to_string(a)) + "/" +
                                                   std::string(to_string(o)),
                                               acc.finalize());
                }
            }
            break;
        }
    }
    return out;
}

bool ticket_pair_valid(Attribute attribute, Outcome outcome) {
    if (is_smell(attribute)) return outcome == Outcome::none;
    return pair_permitted(attribute, outcome);
}

std::vector<std::string> validate_ticket_alignment(const std::vector<Ticket>& tickets) {
    std::vector<std::string> offenders;
    for (const Ticket& t : tickets)
        if (!ticket_pair_valid(t.attribute, t.outcome)) offenders.push_back(t.id);
    return offenders;
}

}  // namespace dq
