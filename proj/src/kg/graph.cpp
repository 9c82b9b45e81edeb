#include "rca/kg/graph.hpp"

#include <algorithm>

namespace rca::kg {

const char* to_string(ResourceKind kind) {
    switch (kind) {
    case ResourceKind::BaseStation: return "BaseStation";
    case ResourceKind::BBU: return "BBU";
    case ResourceKind::Board: return "Board";
    case ResourceKind::RRU: return "RRU";
    case ResourceKind::RiPort: return "RiPort";
    }
    return "BaseStation";
}

const char* to_string(Severity severity) {
    switch (severity) {
    case Severity::Critical: return "critical";
    case Severity::Major: return "major";
    case Severity::Minor: return "minor";
    case Severity::Warning: return "warning";
    }
    return "warning";
}

const char* to_string(EdgeKind kind) {
    switch (kind) {
    case EdgeKind::DependOn: return "dependOn";
    case EdgeKind::Generate: return "generate";
    case EdgeKind::CausedBy: return "causedBy";
    }
    return "dependOn";
}

std::optional<ResourceKind> resource_kind_from(const std::string& name) {
    if (name == "BaseStation") return ResourceKind::BaseStation;
    if (name == "BBU") return ResourceKind::BBU;
    if (name == "Board") return ResourceKind::Board;
    if (name == "RRU") return ResourceKind::RRU;
    if (name == "RiPort") return ResourceKind::RiPort;
    return std::nullopt;
}

std::optional<Severity> severity_from(const std::string& name) {
    if (name == "critical") return Severity::Critical;
    if (name == "major") return Severity::Major;
    if (name == "minor") return Severity::Minor;
    if (name == "warning") return Severity::Warning;
    return std::nullopt;
}

std::optional<EdgeKind> edge_kind_from(const std::string& name) {
    if (name == "dependOn") return EdgeKind::DependOn;
    if (name == "generate") return EdgeKind::Generate;
    if (name == "causedBy") return EdgeKind::CausedBy;
    return std::nullopt;
}

const std::string& node_id(const Node& node) {
    return std::visit([](const auto& n) -> const std::string& { return n.id; }, node);
}

KnowledgeGraph::KnowledgeGraph(std::string scenario_id, std::vector<Node> nodes,
                               std::vector<Edge> edges,
                               std::vector<std::string> target_alarms)
    : scenario_id_(std::move(scenario_id)),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      target_alarms_(std::move(target_alarms)) {
    finalize();
}

void KnowledgeGraph::finalize() {
    index_.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        index_.emplace(node_id(nodes_[i]), i);
}

bool KnowledgeGraph::has_node(const std::string& id) const {
    return index_.contains(id);
}

const Node& KnowledgeGraph::node(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw UnknownNode(id);
    return nodes_[it->second];
}

const ResourceNode* KnowledgeGraph::as_resource(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    return std::get_if<ResourceNode>(&nodes_[it->second]);
}

const AlarmNode* KnowledgeGraph::as_alarm(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    return std::get_if<AlarmNode>(&nodes_[it->second]);
}

const CauseNode* KnowledgeGraph::as_cause(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    return std::get_if<CauseNode>(&nodes_[it->second]);
}

namespace {

bool node_less(const Node& a, const Node& b) {
    return node_id(a) < node_id(b);
}

bool edge_less(const Edge& a, const Edge& b) {
    auto key = [](const Edge& e) {
        return std::tuple<std::string, const std::string&, const std::string&>(
            to_string(e.kind), e.src, e.dst);
    };
    return key(a) < key(b);
}

} // namespace

bool KnowledgeGraph::operator==(const KnowledgeGraph& other) const {
    if (scenario_id_ != other.scenario_id_) return false;
    if (target_alarms_ != other.target_alarms_) return false;
    std::vector<Node> a = nodes_, b = other.nodes_;
    std::sort(a.begin(), a.end(), node_less);
    std::sort(b.begin(), b.end(), node_less);
    if (a != b) return false;
    std::vector<Edge> ea = edges_, eb = other.edges_;
    std::sort(ea.begin(), ea.end(), edge_less);
    std::sort(eb.begin(), eb.end(), edge_less);
    return ea == eb;
}

std::vector<std::string> neighbors(const KnowledgeGraph& graph, const std::string& node,
                                   EdgeKind kind, Direction direction) {
    if (!graph.has_node(node)) throw UnknownNode(node);
    std::vector<std::string> out;
    for (const Edge& e : graph.edges()) {
        if (e.kind != kind) continue;
        if (direction == Direction::Outgoing && e.src == node) out.push_back(e.dst);
        if (direction == Direction::Incoming && e.dst == node) out.push_back(e.src);
    }
    std::sort(out.begin(), out.end());
    return out;
}

const std::vector<RootCause>* Label::find(const std::string& alarm_id) const {
    for (const auto& [id, causes] : entries)
        if (id == alarm_id) return &causes;
    return nullptr;
}

bool Label::operator==(const Label& other) const {
    if (scenario_id != other.scenario_id) return false;
    auto sorted = [](const Label& l) {
        auto copy = l.entries;
        std::sort(copy.begin(), copy.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        return copy;
    };
    return sorted(*this) == sorted(other);
}

} // namespace rca::kg
