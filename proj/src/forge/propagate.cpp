#include "rca/forge/propagate.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace rca::forge {

bool AlarmSignature::contains(const AlarmSignature& other) const {
    return std::includes(entries.begin(), entries.end(),
                         other.entries.begin(), other.entries.end());
}

namespace {

// BFS over the dependOn relation. Children point at parents, so descendants
// are found by walking edges dst->src and ancestors by walking src->dst.
std::vector<const kg::ResourceNode*> walk(const kg::KnowledgeGraph& graph,
                                          const std::string& start,
                                          kg::ResourceKind want, int max_hops,
                                          bool towards_children) {
    std::map<std::string, std::vector<std::string>> next;
    for (const kg::Edge& e : graph.edges()) {
        if (e.kind != kg::EdgeKind::DependOn) continue;
        if (towards_children)
            next[e.dst].push_back(e.src);
        else
            next[e.src].push_back(e.dst);
    }

    std::vector<const kg::ResourceNode*> out;
    std::map<std::string, int> seen{{start, 0}};
    std::deque<std::pair<std::string, int>> queue{{start, 0}};
    while (!queue.empty()) {
        auto [id, hops] = queue.front();
        queue.pop_front();
        if (hops > 0) {
            if (const auto* res = graph.as_resource(id); res && res->kind == want)
                out.push_back(res);
        }
        if (hops == max_hops) continue;
        auto it = next.find(id);
        if (it == next.end()) continue;
        for (const std::string& n : it->second) {
            if (seen.contains(n)) continue;
            seen[n] = hops + 1;
            queue.emplace_back(n, hops + 1);
        }
    }
    return out;
}

} // namespace

AlarmSignature backward_propagate(const kg::KnowledgeGraph& graph, const CausalRule& rule,
                                  const std::string& anchor) {
    const auto* anchor_node = graph.as_resource(anchor);
    if (!anchor_node || anchor_node->kind != rule.anchor_kind)
        throw AnchorKindMismatch(anchor, rule.rule_id);

    AlarmSignature signature;
    for (const AlarmTemplate& tpl : rule.templates) {
        switch (tpl.selector.type) {
        case SelectorType::Self:
            signature.entries.emplace(tpl.code, anchor_node->ldn);
            break;
        case SelectorType::Descendants:
            for (const auto* res :
                 walk(graph, anchor, tpl.selector.kind, tpl.selector.max_hops, true))
                signature.entries.emplace(tpl.code, res->ldn);
            break;
        case SelectorType::Ancestors:
            for (const auto* res :
                 walk(graph, anchor, tpl.selector.kind, tpl.selector.max_hops, false))
                signature.entries.emplace(tpl.code, res->ldn);
            break;
        }
    }
    return signature;
}

std::vector<CandidateCause> forward_infer(const kg::KnowledgeGraph& graph,
                                          const AlarmSignature& observed,
                                          const RuleCatalog& catalog) {
    if (observed.entries.empty())
        throw std::invalid_argument("forward_infer requires a nonempty observed signature");

    std::vector<CandidateCause> candidates;
    for (const CausalRule& rule : catalog.rules) {
        for (const kg::Node& node : graph.nodes()) {
            const auto* res = std::get_if<kg::ResourceNode>(&node);
            if (!res || res->kind != rule.anchor_kind) continue;
            if (backward_propagate(graph, rule, res->id).contains(observed))
                candidates.push_back({rule.rule_id, res->id});
        }
    }
    std::sort(candidates.begin(), candidates.end());
    return candidates;
}

kg::Difficulty grade(const kg::KnowledgeGraph& graph, const CandidateCause& true_cause,
                     const RuleCatalog& catalog) {
    const CausalRule* rule = catalog.find(true_cause.rule_id);
    if (!rule)
        throw CycleClosureViolation("true cause rule '" + true_cause.rule_id +
                                    "' is not in the catalog");
    AlarmSignature signature = backward_propagate(graph, *rule, true_cause.anchor_node);
    if (signature.entries.empty())
        throw CycleClosureViolation("true cause '" + true_cause.rule_id + "' at '" +
                                    true_cause.anchor_node + "' produces no alarms");
    std::vector<CandidateCause> candidates = forward_infer(graph, signature, catalog);
    if (std::find(candidates.begin(), candidates.end(), true_cause) == candidates.end())
        throw CycleClosureViolation("true cause '" + true_cause.rule_id + "' at '" +
                                    true_cause.anchor_node +
                                    "' is not among its own forward-inference candidates");
    int m = static_cast<int>(candidates.size());
    return m == 1 ? kg::Difficulty::simple() : kg::Difficulty::difficult(m);
}

} // namespace rca::forge
