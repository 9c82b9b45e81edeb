#pragma once

#include "rca/forge/catalog.hpp"
#include "rca/kg/graph.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace rca::forge {

// Set of (alarm code, equipment ldn) pairs a cause manifests as.
struct AlarmSignature {
    std::set<std::pair<std::int64_t, std::string>> entries;

    bool contains(const AlarmSignature& other) const;
    bool operator==(const AlarmSignature&) const = default;
};

// A (rule, anchor) pair the forward phase considers a plausible cause.
struct CandidateCause {
    std::string rule_id;
    std::string anchor_node;

    bool operator==(const CandidateCause&) const = default;
    auto operator<=>(const CandidateCause&) const = default;
};

struct AnchorKindMismatch : std::runtime_error {
    AnchorKindMismatch(const std::string& anchor, const std::string& rule)
        : std::runtime_error("anchor '" + anchor + "' does not match the anchor kind of rule '" +
                             rule + "'") {}
};

struct CycleClosureViolation : std::runtime_error {
    explicit CycleClosureViolation(const std::string& what) : std::runtime_error(what) {}
};

// Backward phase: expands a cause into the full alarm set it would trigger,
// resolving each template's selector over the dependOn hierarchy.
AlarmSignature backward_propagate(const kg::KnowledgeGraph& graph, const CausalRule& rule,
                                  const std::string& anchor);

// Forward phase: every (rule, anchor) whose backward signature contains all
// observed alarms, i.e. every cause that explains the whole observation.
// Sorted by (rule_id, anchor). An empty result means no rule explains the
// observed set.
std::vector<CandidateCause> forward_infer(const kg::KnowledgeGraph& graph,
                                          const AlarmSignature& observed,
                                          const RuleCatalog& catalog);

// Cycle-consistency grading: Simple iff the forward phase over the true
// cause's own signature yields exactly that cause; otherwise Difficult(m).
// Throws CycleClosureViolation if the true cause does not explain its own
// signature (an internal consistency bug).
kg::Difficulty grade(const kg::KnowledgeGraph& graph, const CandidateCause& true_cause,
                     const RuleCatalog& catalog);

} // namespace rca::forge
