#include "dq/labels.hpp"

namespace dq {

std::string_view to_string(Scope s) {
    switch (s) {
        case Scope::cell: return "cell";
        case Scope::inter_row: return "inter_row";
        case Scope::inter_column: return "inter_column";
        case Scope::inter_table: return "inter_table";
    }
    return "?";
}

std::string_view to_string(Attribute a) {
    switch (a) {
        case Attribute::missing: return "missing";
        case Attribute::invalid: return "invalid";
        case Attribute::duplicate: return "duplicate";
        case Attribute::conflict: return "conflict";
        case Attribute::believability: return "believability";
        case Attribute::consistency: return "consistency";
        case Attribute::syntactic: return "syntactic";
        case Attribute::encoding: return "encoding";
    }
    return "?";
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::pattern: return "pattern";
        case Outcome::range: return "range";
        case Outcome::rule: return "rule";
        case Outcome::knowledge: return "knowledge";
        case Outcome::none: return "none";
    }
    return "?";
}

std::string_view to_string(InvalidKind k) {
    switch (k) {
        case InvalidKind::pattern: return "pattern";
        case InvalidKind::type: return "type";
        case InvalidKind::range: return "range";
    }
    return "?";
}

std::optional<Scope> scope_from_string(std::string_view s) {
    if (s == "cell") return Scope::cell;
    if (s == "inter_row") return Scope::inter_row;
    if (s == "inter_column") return Scope::inter_column;
    if (s == "inter_table") return Scope::inter_table;
    return std::nullopt;
}

std::optional<Attribute> attribute_from_string(std::string_view s) {
    if (s == "missing") return Attribute::missing;
    if (s == "invalid") return Attribute::invalid;
    if (s == "duplicate") return Attribute::duplicate;
    if (s == "conflict") return Attribute::conflict;
    if (s == "believability") return Attribute::believability;
    if (s == "consistency") return Attribute::consistency;
    if (s == "syntactic") return Attribute::syntactic;
    if (s == "encoding") return Attribute::encoding;
    return std::nullopt;
}

std::optional<Outcome> outcome_from_string(std::string_view s) {
    if (s == "pattern") return Outcome::pattern;
    if (s == "range") return Outcome::range;
    if (s == "rule") return Outcome::rule;
    if (s == "knowledge") return Outcome::knowledge;
    if (s == "none") return Outcome::none;
    return std::nullopt;
}

}  // namespace dq
