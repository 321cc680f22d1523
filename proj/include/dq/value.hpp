#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dq {

/// ISO-8601 calendar date. The only temporal type the engine knows.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;
};

/// Parses "YYYY-MM-DD" with calendar validation (month range, day range
/// per month, leap years). Anything else yields nullopt.
std::optional<Date> parse_date(std::string_view text);

std::string to_string(const Date& d);

/// A typed cell value. id_list cells carry their elements verbatim.
using Value = std::variant<std::int64_t, double, bool, std::string, Date,
                           std::vector<std::string>>;

std::optional<std::int64_t> parse_integer(std::string_view text);

/// Strict finite-double parse; rejects "inf"/"nan" spellings and partial
/// consumption.
std::optional<double> parse_float(std::string_view text);

std::optional<bool> parse_boolean(std::string_view text);

/// Shortest round-trip representation of a double ("7" for 7.0).
std::string format_double(double v);

}  // namespace dq
