#include "rca/kg/validate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace rca::kg {

namespace {

std::string edge_key(const Edge& e) {
    return std::string(to_string(e.kind)) + ":" + e.src + "->" + e.dst;
}

// Collects one violation per nontrivial strongly-connected component of the
// dependOn subgraph (Tarjan). Node order is pinned so output is stable.
void check_depend_on_cycles(const KnowledgeGraph& graph, std::vector<Violation>& out) {
    std::vector<std::string> ids;
    std::map<std::string, std::vector<std::string>> succ;
    std::set<std::string> self_loops;
    for (const Edge& e : graph.edges()) {
        if (e.kind != EdgeKind::DependOn) continue;
        if (!graph.has_node(e.src) || !graph.has_node(e.dst)) continue;
        succ[e.src].push_back(e.dst);
        if (e.src == e.dst) self_loops.insert(e.src);
    }
    for (auto& [id, next] : succ) {
        std::sort(next.begin(), next.end());
        ids.push_back(id);
    }

    std::map<std::string, int> index, low;
    std::set<std::string> on_stack;
    std::vector<std::string> stack;
    int counter = 0;
    std::vector<std::vector<std::string>> cycles;

    // Iterative Tarjan; the recursion depth on pathological inputs would
    // otherwise be unbounded.
    struct Frame {
        std::string node;
        std::size_t child = 0;
    };
    for (const std::string& root : ids) {
        if (index.contains(root)) continue;
        std::vector<Frame> frames{{root}};
        while (!frames.empty()) {
            Frame& f = frames.back();
            const std::string& v = f.node;
            if (f.child == 0) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack.insert(v);
            }
            const auto& next = succ[v];
            bool descended = false;
            while (f.child < next.size()) {
                const std::string& w = next[f.child++];
                if (!index.contains(w)) {
                    frames.push_back({w});
                    descended = true;
                    break;
                }
                if (on_stack.contains(w)) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                std::vector<std::string> scc;
                while (true) {
                    std::string w = stack.back();
                    stack.pop_back();
                    on_stack.erase(w);
                    scc.push_back(w);
                    if (w == v) break;
                }
                if (scc.size() > 1 || self_loops.contains(v)) {
                    std::sort(scc.begin(), scc.end());
                    cycles.push_back(std::move(scc));
                }
            }
            frames.pop_back();
            if (!frames.empty()) {
                Frame& parent = frames.back();
                low[parent.node] = std::min(low[parent.node], low[v]);
            }
        }
    }

    for (const auto& scc : cycles) {
        std::ostringstream detail;
        detail << "dependOn cycle among [";
        for (std::size_t i = 0; i < scc.size(); ++i)
            detail << (i ? ", " : "") << scc[i];
        detail << "]";
        out.push_back({"dependOn-acyclic", scc.front(), detail.str()});
    }
}

} // namespace

std::vector<Violation> validate_graph(const KnowledgeGraph& graph) {
    std::vector<Violation> out;

    std::map<std::string, int> id_count;
    std::map<std::string, int> ldn_count;
    for (const Node& n : graph.nodes()) {
        const std::string& id = node_id(n);
        if (id.empty()) out.push_back({"node-id-nonempty", id, "node id must be nonempty"});
        ++id_count[id];
        if (const auto* res = std::get_if<ResourceNode>(&n)) {
            if (res->ldn.empty())
                out.push_back({"ldn-nonempty", id, "resource ldn must be nonempty"});
            else
                ++ldn_count[res->ldn];
        } else if (const auto* alarm = std::get_if<AlarmNode>(&n)) {
            if (alarm->code < 0)
                out.push_back({"alarm-code-nonnegative", id, "alarm code must be >= 0"});
        } else if (const auto* cause = std::get_if<CauseNode>(&n)) {
            if (cause->cause_description.empty())
                out.push_back({"cause-description-nonempty", id,
                               "cause_description must be nonempty"});
        }
    }
    for (const auto& [id, count] : id_count)
        if (count > 1)
            out.push_back({"node-id-unique", id,
                           "node id appears " + std::to_string(count) + " times"});
    for (const auto& [ldn, count] : ldn_count)
        if (count > 1)
            out.push_back({"ldn-unique", ldn,
                           "ldn appears on " + std::to_string(count) + " resource nodes"});

    for (const Edge& e : graph.edges()) {
        std::string key = edge_key(e);
        bool src_ok = graph.has_node(e.src);
        bool dst_ok = graph.has_node(e.dst);
        if (!src_ok)
            out.push_back({"edge-endpoints-exist", key, "src '" + e.src + "' is not a node"});
        if (!dst_ok)
            out.push_back({"edge-endpoints-exist", key, "dst '" + e.dst + "' is not a node"});
        if (!src_ok || !dst_ok) continue;
        switch (e.kind) {
        case EdgeKind::DependOn:
            if (!graph.as_resource(e.src) || !graph.as_resource(e.dst))
                out.push_back({"dependOn-endpoints", key,
                               "dependOn endpoints must both be resource nodes"});
            break;
        case EdgeKind::Generate:
            if (!graph.as_resource(e.src))
                out.push_back({"generate-endpoints", key, "generate src must be a resource node"});
            else if (!graph.as_alarm(e.dst))
                out.push_back({"generate-endpoints", key, "generate dst must be an alarm node"});
            break;
        case EdgeKind::CausedBy:
            if (!graph.as_alarm(e.src))
                out.push_back({"causedBy-endpoints", key, "causedBy src must be an alarm node"});
            else if (!graph.as_alarm(e.dst) && !graph.as_cause(e.dst))
                out.push_back({"causedBy-endpoints", key,
                               "causedBy dst must be an alarm or cause node"});
            break;
        }
    }

    check_depend_on_cycles(graph, out);

    std::map<std::string, int> generate_in;
    for (const Edge& e : graph.edges())
        if (e.kind == EdgeKind::Generate && graph.as_alarm(e.dst)) ++generate_in[e.dst];
    for (const Node& n : graph.nodes()) {
        if (!std::holds_alternative<AlarmNode>(n)) continue;
        int count = generate_in.contains(node_id(n)) ? generate_in[node_id(n)] : 0;
        if (count != 1)
            out.push_back({"alarm-generate-unique", node_id(n),
                           "alarm has " + std::to_string(count) +
                               " incoming generate edges, expected exactly 1"});
    }

    std::size_t i = 0;
    for (const std::string& target : graph.target_alarms()) {
        if (!graph.has_node(target) || !graph.as_alarm(target))
            out.push_back({"target-alarm-exists", target,
                           "target_alarms[" + std::to_string(i) +
                               "] does not name an alarm node"});
        ++i;
    }

    std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        return std::tie(a.invariant, a.subject, a.detail) <
               std::tie(b.invariant, b.subject, b.detail);
    });
    return out;
}

std::vector<Violation> validate_scenario(const KnowledgeGraph& graph, const Label& label) {
    std::vector<Violation> out;
    if (graph.scenario_id() != label.scenario_id)
        out.push_back({"scenario-id-match", label.scenario_id,
                       "label scenario_id does not match input scenario_id '" +
                           graph.scenario_id() + "'"});

    std::set<std::string> targets(graph.target_alarms().begin(), graph.target_alarms().end());
    std::set<std::string> keys;
    for (const auto& [alarm_id, causes] : label.entries) {
        keys.insert(alarm_id);
        if (!targets.contains(alarm_id))
            out.push_back({"label-keys-are-targets", alarm_id,
                           "label alarm id is not in target_alarms"});
        for (const RootCause& rc : causes) {
            bool found = false;
            for (const Node& n : graph.nodes())
                if (const auto* res = std::get_if<ResourceNode>(&n); res && res->ldn == rc.equipment_id) {
                    found = true;
                    break;
                }
            if (!found)
                out.push_back({"equipment-ldn-exists", rc.equipment_id,
                               "equipment_id is not the ldn of any resource node"});
        }
    }
    for (const std::string& target : targets)
        if (!keys.contains(target))
            out.push_back({"label-covers-targets", target,
                           "target alarm has no label entry"});

    std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        return std::tie(a.invariant, a.subject, a.detail) <
               std::tie(b.invariant, b.subject, b.detail);
    });
    return out;
}

} // namespace rca::kg
