#pragma once

#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dq/rule_expr.hpp"
#include "dq/value.hpp"

namespace dq {

/// Declared column type. id_list cells hold semicolon-separated elements
/// and are only legal as the from-side of a cross-table reference.
enum class ValueType { integer, floating, text, boolean, date, id_list };

std::string_view to_string(ValueType t);
std::optional<ValueType> value_type_from_string(std::string_view s);

/// DSL-level kind a declared column presents to rule expressions.
ExprType expr_type_of(ValueType t);

/// Interval bounds; each endpoint is an int64, double, or Date matching
/// the column's declared type.
struct RangeConstraint {
    std::optional<Value> min;
    std::optional<Value> max;
    bool min_inclusive = true;
    bool max_inclusive = true;
};

struct ColumnConstraint {
    std::string name;
    ValueType declared_type = ValueType::text;
    std::optional<std::string> pattern;  // whole-value match, anchoring implicit
    std::optional<std::regex> pattern_re;
    std::optional<RangeConstraint> range;
    std::optional<std::vector<std::string>> enumeration;  // canonical raw spellings
    bool required = false;
    bool label_like = false;
};

struct RowRule {
    std::string id;
    std::string source;
    ExprPtr expr;
    double tolerance = 0.005;
};

struct TableConstraint {
    std::string name;
    std::vector<ColumnConstraint> columns;  // file order, must match CSV header
    std::vector<std::string> key;
    std::vector<RowRule> row_rules;
    std::optional<std::vector<std::string>> baseline_columns;
    std::optional<std::string> expected_keys;  // path, resolved against the schema file

    const ColumnConstraint* find_column(std::string_view name) const;
    std::optional<std::size_t> column_index(std::string_view name) const;
    bool is_key_column(std::string_view name) const;
};

enum class CrossRuleKind { reference, expression };

/// One side of a reference rule; element_of_list marks "table.column[*]".
struct CrossColumnRef {
    std::string table;
    std::string column;
    bool element_of_list = false;
};

struct CrossTableRule {
    std::string id;
    CrossRuleKind kind = CrossRuleKind::reference;
    // reference kind
    CrossColumnRef from;
    CrossColumnRef to;
    // expression kind
    std::string source;
    ExprPtr expr;
    double tolerance = 0.005;
};

struct NullPolicy {
    std::vector<std::string> tokens;

    bool is_null(std::string_view raw) const;
    static NullPolicy defaults();
};

/// Smell-detector thresholds; every value overridable via schema file or
/// CLI.
struct SmellParams {
    double iqr_k = 1.5;
    double z_max = 3.0;
    double freq_threshold = 0.5;
    int min_n = 8;
    double type_majority = 0.9;
};

struct ConstraintSchema {
    std::vector<TableConstraint> tables;  // file order
    std::vector<CrossTableRule> cross_table;
    NullPolicy null_policy = NullPolicy::defaults();
    SmellParams smell_params;

    const TableConstraint* find_table(std::string_view name) const;
};

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses and fully resolves a schema document (see README for the
/// format). Every rule expression is parsed and type-checked here;
/// detectors assume a valid schema. Throws SchemaError.
ConstraintSchema parse_schema(const std::string& schema_json);

/// Parses a standalone {"iqr_k": ..., ...} object, starting from the
/// defaults. Throws SchemaError.
SmellParams parse_smell_params_json(const std::string& text);

/// Reads an expected-keys baseline: one key per line, composite parts
/// joined by TAB, trailing CR ignored. Throws std::runtime_error when
/// unreadable.
std::vector<std::string> load_key_baseline(const std::string& path);

}  // namespace dq
