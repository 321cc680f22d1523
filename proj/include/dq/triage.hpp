#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dq/labels.hpp"

namespace dq {

/// One labeled issue ticket with the four difficulty metrics.
struct Ticket {
    std::string id;
    Attribute attribute = Attribute::missing;
    Outcome outcome = Outcome::rule;
    int severity = 0;                 // Low..Critical as 0..3
    int priority = 0;                 // Lowest..Highest as 0..4
    double days_to_fix = 0;           // fractional days allowed
    std::int64_t comment_number = 0;
};

/// Closed ordinal vocabularies; anything else is rejected.
std::optional<int> severity_from_word(std::string_view word);
std::optional<int> priority_from_word(std::string_view word);
std::string_view severity_word(int level);
std::string_view priority_word(int level);

class TicketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads tickets from CSV (header: id,attribute,outcome,severity,
/// priority,days_to_fix,comment_number) or JSON-Lines with the same
/// field names; the format is detected from the first byte. Errors name
/// the offending line. Throws TicketError.
std::vector<Ticket> parse_tickets(const std::string& text);

enum class SummaryMode {
    attribute_dist,
    outcome_dist,
    attribute_stats,
    outcome_stats,
    crosstab,
    pair_stats,
};

std::optional<SummaryMode> summary_mode_from_string(std::string_view s);
std::string_view to_string(SummaryMode mode);

struct MetricStats {
    double mean = 0;
    double max = 0;
};

struct CategoryStats {
    std::size_t count = 0;
    MetricStats severity;
    MetricStats priority;
    MetricStats days_to_fix;
    MetricStats comment_number;
};

/// One summarize result; which fields are filled depends on the mode.
/// Smell tickets are excluded from outcome_dist, outcome_stats, and
/// crosstab (the outcome dimension does not split smells) but appear in
/// attribute modes and in pair_stats under outcome none.
struct Summary {
    SummaryMode mode = SummaryMode::attribute_dist;
    std::vector<std::pair<std::string, std::size_t>> counts;        // *_dist
    std::vector<std::pair<std::string, CategoryStats>> stats;       // *_stats, pair_stats
    std::vector<std::string> row_labels;                            // crosstab
    std::vector<std::string> col_labels;
    std::vector<std::vector<std::size_t>> matrix;
};

/// Aggregates tickets for one mode. Categories appear in label
/// declaration order; empty categories are omitted. Stats modes throw
/// TicketError on an empty ticket list.
Summary summarize(const std::vector<Ticket>& tickets, SummaryMode mode);

/// True when the pair is representable: integrity pairs per the
/// permitted-pair table, smells only with outcome none.
bool ticket_pair_valid(Attribute attribute, Outcome outcome);

/// Ids of tickets whose (attribute, outcome) pair is not representable,
/// in input order.
std::vector<std::string> validate_ticket_alignment(const std::vector<Ticket>& tickets);

}  // namespace dq
