#pragma once

#include <string>
#include <vector>

#include "dq/detectors.hpp"
#include "dq/smells.hpp"
#include "dq/triage.hpp"

namespace dq {

/// One JSON object, no trailing newline. Field order is part of the
/// interface: id, tables, rows, columns, scope, attribute, outcome,
/// constraint, evidence.
std::string issue_jsonl(const Issue& issue);

/// Field order: table, column, kind, rows, evidence, score.
std::string smell_jsonl(const SmellFinding& smell);

/// Per-attribute count table with a total row, for stderr.
std::string findings_summary(const std::vector<Issue>& issues,
                             const std::vector<SmellFinding>& smells);

std::string render_summary_text(const Summary& summary);
std::string render_summary_csv(const Summary& summary);
std::string render_summary_jsonl(const Summary& summary);

std::string ticket_csv_header();
std::string ticket_csv_line(const Ticket& ticket);

}  // namespace dq
