#include "dq/classify.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dq {

bool pair_permitted(Attribute attribute, Outcome outcome) {
    return std::any_of(kPermittedPairs.begin(), kPermittedPairs.end(), [&](const auto& pair) {
        return pair.first == attribute && pair.second == outcome;
    });
}

namespace {

[[noreturn]] void contract_breach(Attribute attribute, Scope scope) {
    throw std::logic_error("illegal attribute/scope combination: " +
                           std::string(to_string(attribute)) + " at " +
                           std::string(to_string(scope)));
}

}  // namespace

Outcome align(Attribute attribute, Scope scope, std::optional<InvalidKind> invalid_kind) {
    if ((attribute == Attribute::invalid) != invalid_kind.has_value())
        throw std::logic_error("invalid_kind must accompany exactly the invalid attribute");
    switch (attribute) {
        case Attribute::invalid:
            if (scope != Scope::cell) contract_breach(attribute, scope);
            return *invalid_kind == InvalidKind::range ? Outcome::range : Outcome::pattern;
        case Attribute::missing:
            switch (scope) {
                case Scope::cell: return Outcome::range;
                case Scope::inter_row: return Outcome::rule;
                case Scope::inter_table: return Outcome::knowledge;
                default: contract_breach(attribute, scope);
            }
        case Attribute::duplicate:
            if (scope != Scope::inter_row) contract_breach(attribute, scope);
            return Outcome::rule;
        case Attribute::conflict:
            switch (scope) {
                case Scope::inter_column:
                case Scope::inter_row: return Outcome::rule;
                case Scope::inter_table: return Outcome::knowledge;
                default: contract_breach(attribute, scope);
            }
        default:
            throw std::logic_error("smells are not aligned: " +
                                   std::string(to_string(attribute)));
    }
}

LabeledFindings label_dataset(const Dataset& dataset, const ConstraintSchema& schema,
                              const KeyBaselines& baselines) {
    LabeledFindings out;

    auto add = [&out](std::vector<Issue> issues) {
        out.issues.insert(out.issues.end(), std::make_move_iterator(issues.begin()),
                          std::make_move_iterator(issues.end()));
    };
    add(detect_missing(dataset, schema, baselines));
    for (const auto& table_schema : schema.tables) {
        const Table* table = dataset.find_table(table_schema.name);
        if (!table) continue;
        add(detect_invalid(*table, table_schema));
        add(detect_duplicates(*table, table_schema));
    }
    add(detect_conflicts(dataset, schema));

    for (auto& issue : out.issues)
        issue.outcome = align(issue.attribute, issue.scope, issue.invalid_kind);
    sort_issues(out.issues);

    for (const auto& table_schema : schema.tables) {
        const Table* table = dataset.find_table(table_schema.name);
        if (!table) continue;
        auto smells =
            detect_smells(*table, table_schema, schema.null_policy, schema.smell_params);
        out.smells.insert(out.smells.end(), std::make_move_iterator(smells.begin()),
                          std::make_move_iterator(smells.end()));
    }
    sort_smells(out.smells);
    return out;
}

}  // namespace dq
