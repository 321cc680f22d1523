#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dq/labels.hpp"
#include "dq/schema.hpp"
#include "dq/table.hpp"

namespace dq {

/// One integrity finding. `outcome` stays empty until classification.
struct Issue {
    std::string id;
    std::vector<std::string> tables;
    std::vector<std::size_t> rows;  // 0-based data rows; empty for whole-table findings
    std::vector<std::string> columns;
    Scope scope = Scope::cell;
    Attribute attribute = Attribute::missing;
    std::optional<Outcome> outcome;
    std::string constraint;  // rule id or built-in tag (required, pattern, type, range, ...)
    std::string evidence;
    std::optional<InvalidKind> invalid_kind;  // set iff attribute == invalid
};

/// Deterministic global order: (tables, first row, columns, constraint,
/// id); row-less findings sort before row 0.
bool issue_less(const Issue& a, const Issue& b);
void sort_issues(std::vector<Issue>& issues);

/// Raw key identity of a row: key cells joined by TAB. Empty when the
/// schema declares no key or any key cell is null; such rows identify
/// nothing and join no key group.
std::optional<std::string> row_key(const Table& table, const TableConstraint& schema,
                                   std::size_t row);

/// Expected-keys baselines by table name.
using KeyBaselines = std::map<std::string, std::vector<std::string>>;

/// Absence at three scopes: null cells in required columns (cell),
/// baseline keys absent from a table (inter_row), reference values with
/// no match in the target key (inter_table).
std::vector<Issue> detect_missing(const Dataset& dataset, const ConstraintSchema& schema,
                                  const KeyBaselines& baselines);

/// Convenience overload: reads each table's expected_keys path as given.
/// Throws std::runtime_error when a baseline file is unreadable.
std::vector<Issue> detect_missing(const Dataset& dataset, const ConstraintSchema& schema);

/// Per-cell constraint breaches on non-null cells; at most one finding
/// per cell, checked pattern, then declared type, then range/enum.
std::vector<Issue> detect_invalid(const Table& table, const TableConstraint& schema);

/// What detect_invalid would report for one non-null cell, if anything.
/// Smell detectors use this to keep integrity findings out of smell
/// evidence.
std::optional<InvalidKind> cell_invalid_kind(const Cell& cell, const ColumnConstraint& col);

/// Full-row raw equality within a key group; key-sharing rows that
/// differ anywhere are conflicts, not duplicates.
std::vector<Issue> detect_duplicates(const Table& table, const TableConstraint& schema);

/// Conflicts at three scopes plus the baseline-feature check: row rules
/// (inter_column), key-sharing rows with differing non-key cells
/// (inter_row), cross-table expression rules (inter_table), and header
/// drift against baseline_columns (inter_column).
std::vector<Issue> detect_conflicts(const Dataset& dataset, const ConstraintSchema& schema);

}  // namespace dq
