#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dq/labels.hpp"
#include "dq/schema.hpp"
#include "dq/table.hpp"

namespace dq {

/// A legal-but-suspicious data pattern. Smells have no outcome label by
/// design; they break no declared constraint.
struct SmellFinding {
    std::string table;
    std::string column;
    Attribute kind = Attribute::believability;  // smell attributes only
    std::vector<std::size_t> rows;
    std::string evidence;
    double score = 0;  // suspiciousness in [0, 1]
};

/// Deterministic order: (table, column, kind, rows, evidence).
bool smell_less(const SmellFinding& a, const SmellFinding& b);
void sort_smells(std::vector<SmellFinding>& smells);

/// Statistical outliers and improbable value concentration in numeric
/// columns with at least min_n usable values. Outlier flags are one
/// finding per cell (IQR fences and z-score); a dominant value at or
/// above freq_threshold yields one finding for the column. Degenerate
/// spread (IQR or stddev zero) suppresses the per-cell checks.
std::vector<SmellFinding> detect_believability(const Table& table, const TableConstraint& schema,
                                               const SmellParams& params);

/// Multiple surface forms of one thing: distinct null-token spellings in
/// one column, or raw values that collapse to one canonical form under
/// trim, case-fold, and whitespace-squeeze. Schema, when given, supplies
/// the integrity-exclusion mask.
std::vector<SmellFinding> detect_consistency(const Table& table, const NullPolicy& nulls,
                                             const TableConstraint* schema = nullptr);

/// One label naming several entities: in label_like columns, an
/// identical raw value whose rows carry distinct key identities.
std::vector<SmellFinding> detect_syntactic(const Table& table, const TableConstraint& schema);

/// Type-affiliation hazards: minority-typed cells in a column with a
/// dominant inferred type, and leading-zero numerals in numeric-majority
/// columns.
std::vector<SmellFinding> detect_encoding(const Table& table, const SmellParams& params,
                                          const TableConstraint* schema = nullptr);

/// All four detectors, merged and sorted.
std::vector<SmellFinding> detect_smells(const Table& table, const TableConstraint& schema,
                                        const NullPolicy& nulls, const SmellParams& params);

}  // namespace dq
