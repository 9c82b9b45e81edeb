#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rca::kg {

enum class ResourceKind { BaseStation, BBU, Board, RRU, RiPort };
enum class Severity { Critical, Major, Minor, Warning };
enum class EdgeKind { DependOn, Generate, CausedBy };
enum class Direction { Outgoing, Incoming };

const char* to_string(ResourceKind kind);
const char* to_string(Severity severity);
const char* to_string(EdgeKind kind);
std::optional<ResourceKind> resource_kind_from(const std::string& name);
std::optional<Severity> severity_from(const std::string& name);
std::optional<EdgeKind> edge_kind_from(const std::string& name);

// Physical/logical equipment. `ldn` is the operator-facing hierarchical
// identifier and doubles as equipment_id in root-cause triples.
struct ResourceNode {
    std::string id;
    ResourceKind kind{};
    std::string ldn;
    std::optional<std::string> serial;

    bool operator==(const ResourceNode&) const = default;
};

struct AlarmNode {
    std::string id;
    std::string title;
    std::int64_t code = 0;        // nonnegative
    Severity severity{};
    std::int64_t report_time = 0; // epoch seconds, UTC

    bool operator==(const AlarmNode&) const = default;
};

struct CauseNode {
    std::string id;
    std::string cause_description;
    std::string solution;

    bool operator==(const CauseNode&) const = default;
};

using Node = std::variant<ResourceNode, AlarmNode, CauseNode>;

const std::string& node_id(const Node& node);

struct Edge {
    std::string src;
    std::string dst;
    EdgeKind kind{};

    bool operator==(const Edge&) const = default;
};

// Immutable once constructed; `finalize()` builds the lookup indexes and is
// called by every factory path (parser, generator). Structural invariants
// are *not* enforced here -- see validate_graph.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;
    KnowledgeGraph(std::string scenario_id, std::vector<Node> nodes,
                   std::vector<Edge> edges, std::vector<std::string> target_alarms);

    const std::string& scenario_id() const { return scenario_id_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::string>& target_alarms() const { return target_alarms_; }

    bool has_node(const std::string& id) const;
    const Node& node(const std::string& id) const; // throws UnknownNode
    const ResourceNode* as_resource(const std::string& id) const;
    const AlarmNode* as_alarm(const std::string& id) const;
    const CauseNode* as_cause(const std::string& id) const;

    // Value equality, insensitive to node/edge ordering.
    bool operator==(const KnowledgeGraph& other) const;

private:
    void finalize();

    std::string scenario_id_;
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::string> target_alarms_;
    std::map<std::string, std::size_t> index_;
};

struct UnknownNode : std::runtime_error {
    explicit UnknownNode(const std::string& id)
        : std::runtime_error("unknown node: " + id) {}
};

// Neighbor ids over one edge kind, sorted ascending. Outgoing follows
// src->dst; incoming follows dst->src.
std::vector<std::string> neighbors(const KnowledgeGraph& graph, const std::string& node,
                                   EdgeKind kind, Direction direction);

struct RootCause {
    std::string cause_description;
    std::string equipment_id; // ldn of a resource node
    std::string solution;

    bool operator==(const RootCause&) const = default;
    auto operator<=>(const RootCause&) const = default;
};

// Ground truth: one ordered root-cause list per target alarm. Entry order
// follows the document; canonical serialization sorts by alarm id.
struct Label {
    std::string scenario_id;
    std::vector<std::pair<std::string, std::vector<RootCause>>> entries;

    const std::vector<RootCause>* find(const std::string& alarm_id) const;
    bool operator==(const Label& other) const;
};

// Simple == forward-inference set has cardinality 1.
struct Difficulty {
    int ambiguity = 1; // m; >= 2 for difficult scenarios

    static Difficulty simple() { return {1}; }
    static Difficulty difficult(int m) { return {m}; }
    bool is_simple() const { return ambiguity == 1; }
    bool operator==(const Difficulty&) const = default;
};

struct Scenario {
    std::string id;
    KnowledgeGraph graph;
    Label label;
    Difficulty difficulty;
};

} // namespace rca::kg
