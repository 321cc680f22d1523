#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace dq {

/// Where a finding lives: one cell, several rows of one table, several
/// columns of one row, or more than one table.
enum class Scope { cell, inter_row, inter_column, inter_table };

/// What a finding *is*. The first four are integrity issues, the last
/// four are data smells; detectors only ever emit their own family.
enum class Attribute {
    missing,
    invalid,
    duplicate,
    conflict,
    believability,
    consistency,
    syntactic,
    encoding,
};

/// Which constraint family a finding breaks. Smells break none and are
/// always reported as Outcome::none.
enum class Outcome { pattern, range, rule, knowledge, none };

/// Sub-kind of an invalid-cell finding; decides pattern vs range outcome.
enum class InvalidKind { pattern, type, range };

constexpr bool is_integrity(Attribute a) {
    return a == Attribute::missing || a == Attribute::invalid ||
           a == Attribute::duplicate || a == Attribute::conflict;
}
constexpr bool is_smell(Attribute a) { return !is_integrity(a); }

std::string_view to_string(Scope s);
std::string_view to_string(Attribute a);
std::string_view to_string(Outcome o);
std::string_view to_string(InvalidKind k);

std::optional<Scope> scope_from_string(std::string_view s);
std::optional<Attribute> attribute_from_string(std::string_view s);
std::optional<Outcome> outcome_from_string(std::string_view s);

}  // namespace dq
