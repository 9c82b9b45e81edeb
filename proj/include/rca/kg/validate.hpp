#pragma once

#include "rca/kg/graph.hpp"

#include <string>
#include <vector>

namespace rca::kg {

// One broken invariant. Violations are data, not failures: callers decide
// whether to throw, print or count.
struct Violation {
    std::string invariant; // stable machine-readable name
    std::string subject;   // node id, edge key or path
    std::string detail;

    bool operator==(const Violation&) const = default;
};

// Returns every violated invariant, ordered by (invariant, subject).
// Empty result == the graph satisfies all structural invariants.
std::vector<Violation> validate_graph(const KnowledgeGraph& graph);

// Cross-checks a label against its graph: scenario ids match, label keys
// are exactly the graph's target alarms, and every equipment_id is the ldn
// of some resource node.
std::vector<Violation> validate_scenario(const KnowledgeGraph& graph, const Label& label);

} // namespace rca::kg
