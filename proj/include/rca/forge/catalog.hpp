#pragma once

#include "rca/kg/graph.hpp"
#include "rca/kg/validate.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rca::forge {

enum class SelectorType { Self, Descendants, Ancestors };

// Where a template's alarms land relative to the rule's anchor.
// Descendants(kind, h): nodes of `kind` whose dependOn path ascends to the
// anchor within h hops. Ancestors is symmetric (ascending from the anchor).
struct TargetSelector {
    SelectorType type = SelectorType::Self;
    kg::ResourceKind kind = kg::ResourceKind::BaseStation; // ignored for Self
    int max_hops = 0;                                      // ignored for Self

    bool operator==(const TargetSelector&) const = default;
};

struct AlarmTemplate {
    std::int64_t code = 0;
    std::string title;
    kg::Severity severity = kg::Severity::Warning;
    TargetSelector selector;

    bool operator==(const AlarmTemplate&) const = default;
};

struct CausalRule {
    std::string rule_id;
    std::string cause_description;
    kg::ResourceKind anchor_kind = kg::ResourceKind::BaseStation;
    std::string solution;
    std::vector<AlarmTemplate> templates;

    bool operator==(const CausalRule&) const = default;
};

struct RuleCatalog {
    std::vector<CausalRule> rules;

    const CausalRule* find(const std::string& rule_id) const;
};

// Catalog files: {"rules": [{"rule_id", "cause_description", "anchor_kind",
// "solution", "alarm_templates": [{"code","title","severity","selector"}]}]}.
// Throws kg::ParseError subclasses on malformed input.
RuleCatalog parse_catalog(const std::string& text);
RuleCatalog load_catalog(const std::string& path);

// Canonical serialization, used for the manifest's catalog digest.
std::string serialize_catalog(const RuleCatalog& catalog);

// Catalog-level checks: distinct rule ids, distinct (description, anchor)
// pairs, nonempty template lists, selector kinds consistent with the
// hierarchy, max_hops within the 4-level topology depth, and a consistent
// code -> (title, severity) mapping across all rules.
std::vector<kg::Violation> validate_catalog(const RuleCatalog& catalog);

// Hierarchy level: BaseStation=0 .. RiPort=4.
int hierarchy_level(kg::ResourceKind kind);

} // namespace rca::forge
