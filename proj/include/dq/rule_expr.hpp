#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dq/value.hpp"

namespace dq {

/// Three-valued verdict of a rule: absent or unparsable inputs never fire
/// a violation, they surface as unknown and are left to the missing
/// detector.
enum class TriState { holds, violated, unknown };

enum class BinaryOp { add, sub, mul, div, eq, ne, lt, le, gt, ge, logic_and, logic_or };
enum class UnaryOp { negate, logic_not };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

/// Column reference; `table` is empty inside row rules, mandatory in
/// cross-table expressions ("table.column").
struct ColumnRef {
    std::string table;
    std::string column;

    std::string qualified() const { return table.empty() ? column : table + "." + column; }
    friend bool operator==(const ColumnRef&, const ColumnRef&) = default;
};

struct Literal {
    Value value;  // int64, double, bool, string; Date only after resolve-time coercion
};

struct UnaryExpr {
    UnaryOp op;
    ExprPtr operand;
};

struct BinaryExpr {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

/// sum(table.column) over the rows joined through a declared reference;
/// only legal in cross-table expressions.
struct SumExpr {
    ColumnRef column;
};

struct Expr {
    std::variant<Literal, ColumnRef, UnaryExpr, BinaryExpr, SumExpr> node;
};

/// Lexical, syntax, and resolution failures. `position` is a byte offset
/// into the expression source (npos for resolution errors).
class ExprError : public std::runtime_error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    ExprError(std::string message, std::size_t position = npos)
        : std::runtime_error(std::move(message)), position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Parses an expression source into an AST. Precedence, tightest first:
/// unary not/-, * /, + -, comparisons, and, or; all binary operators are
/// left-associative. Throws ExprError with the offending offset.
ExprPtr parse_rule_expr(std::string_view text);

/// Prints with the fewest parentheses that reparse to the same tree.
std::string to_string(const Expr& expr);

/// Prints with every compound subexpression parenthesized.
std::string to_string_parenthesized(const Expr& expr);

ExprPtr clone(const Expr& expr);
bool structurally_equal(const Expr& a, const Expr& b);

enum class ExprType { number, boolean, text, date };

using ColumnTypeLookup = std::function<std::optional<ExprType>(const ColumnRef&)>;

struct ResolveOptions {
    bool allow_aggregates = false;
    bool qualified_names = false;  // true for cross-table expressions
};

/// Type-checks the tree against column types. Comparisons must compare
/// like kinds; arithmetic and sum() need numbers; and/or/not need
/// booleans; ordering is defined for numbers, dates, and text. A string
/// literal compared against a date column is retyped to a date in place.
/// Throws ExprError on unknown columns and type mismatches.
ExprType resolve(Expr& expr, const ColumnTypeLookup& lookup, const ResolveOptions& opts);

/// Column references appearing in the tree, aggregated and plain kept
/// apart. Duplicates preserved in source order.
void collect_columns(const Expr& expr, std::vector<ColumnRef>& plain,
                     std::vector<ColumnRef>& aggregated);

/// Value sources for evaluation. `column` returns nullopt for an absent
/// or unparsable cell; `aggregate_sum` returns nullopt when the joined
/// rows cannot all be resolved.
struct Binding {
    std::function<std::optional<Value>(const ColumnRef&)> column;
    std::function<std::optional<double>(const ColumnRef&)> aggregate_sum;
};

/// Evaluates a resolved rule. Any absent referenced value makes the whole
/// verdict unknown; numeric equality holds within |lhs-rhs| <= tolerance.
TriState eval_rule(const Expr& expr, const Binding& binding, double tolerance);

}  // namespace dq
