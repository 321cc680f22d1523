#pragma once

#include <array>
#include <optional>
#include <utility>

#include "dq/detectors.hpp"
#include "dq/labels.hpp"
#include "dq/smells.hpp"

namespace dq {

/// The closed set of legal (attribute, outcome) pairs. Everything the
/// pipeline can emit lands in this table; anything else is a bug.
inline constexpr std::array<std::pair<Attribute, Outcome>, 9> kPermittedPairs{{
    {Attribute::invalid, Outcome::pattern},
    {Attribute::invalid, Outcome::range},
    {Attribute::missing, Outcome::range},
    {Attribute::missing, Outcome::rule},
    {Attribute::conflict, Outcome::rule},
    {Attribute::duplicate, Outcome::rule},
    {Attribute::missing, Outcome::knowledge},
    {Attribute::conflict, Outcome::knowledge},
    {Attribute::believability, Outcome::none},
}};

bool pair_permitted(Attribute attribute, Outcome outcome);

/// Maps an integrity finding to the constraint family it breaks, from
/// its attribute and scope alone (plus the invalid sub-kind). Total on
/// the legal domain; throws std::logic_error elsewhere, since an illegal
/// combination can only come from a detector bug, never from user data.
Outcome align(Attribute attribute, Scope scope, std::optional<InvalidKind> invalid_kind);

struct LabeledFindings {
    std::vector<Issue> issues;        // outcome filled, globally sorted
    std::vector<SmellFinding> smells;  // sorted; smells carry no outcome
};

/// Full pipeline: all detectors, then alignment. Baselines supply
/// expected-keys content for tables that declare one.
LabeledFindings label_dataset(const Dataset& dataset, const ConstraintSchema& schema,
                              const KeyBaselines& baselines = {});

}  // namespace dq
