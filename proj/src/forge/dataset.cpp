#include "rca/forge/dataset.hpp"

#include "rca/kg/serialize.hpp"
#include "rca/util/hash.hpp"
#include "rca/util/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>

namespace rca::forge {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

namespace {

// Alarms are stamped relative to a fixed per-scenario epoch, one second per
// dependOn hop away from the anchor, so the anchor-nearest alarm is always
// the earliest and ordering is deterministic.
constexpr std::int64_t kEpochBase = 1756684800; // 2025-09-01T00:00:00Z
constexpr std::int64_t kEpochStepSeconds = 3600;

int tree_distance(const kg::KnowledgeGraph& graph, const std::string& from,
                  const std::string& to) {
    if (from == to) return 0;
    std::map<std::string, std::vector<std::string>> adj;
    for (const kg::Edge& e : graph.edges()) {
        if (e.kind != kg::EdgeKind::DependOn) continue;
        adj[e.src].push_back(e.dst);
        adj[e.dst].push_back(e.src);
    }
    std::map<std::string, int> dist{{from, 0}};
    std::deque<std::string> queue{from};
    while (!queue.empty()) {
        std::string id = queue.front();
        queue.pop_front();
        for (const std::string& n : adj[id]) {
            if (dist.contains(n)) continue;
            dist[n] = dist[id] + 1;
            if (n == to) return dist[n];
            queue.push_back(n);
        }
    }
    return 0; // disconnected; callers only pass nodes on the anchor's path
}

struct AlarmDraft {
    std::int64_t code;
    std::string equipment_ldn;
    std::string equipment_id;
    std::int64_t time;
    std::string title;
    kg::Severity severity;
};

} // namespace

kg::Scenario assemble_scenario(const kg::KnowledgeGraph& topology,
                               const CandidateCause& true_cause, const RuleCatalog& catalog,
                               const std::string& scenario_id, std::int64_t epoch) {
    const CausalRule* rule = catalog.find(true_cause.rule_id);
    if (!rule)
        throw CycleClosureViolation("true cause rule '" + true_cause.rule_id +
                                    "' is not in the catalog");

    AlarmSignature signature = backward_propagate(topology, *rule, true_cause.anchor_node);
    kg::Difficulty difficulty = grade(topology, true_cause, catalog); // checks cycle closure
    std::vector<CandidateCause> candidates = forward_infer(topology, signature, catalog);

    // Template metadata per code; validate_catalog guarantees consistency.
    std::map<std::int64_t, std::pair<std::string, kg::Severity>> code_meta;
    for (const CausalRule& r : catalog.rules)
        for (const AlarmTemplate& tpl : r.templates)
            code_meta.emplace(tpl.code, std::make_pair(tpl.title, tpl.severity));

    std::map<std::string, std::string> ldn_to_id;
    for (const kg::Node& n : topology.nodes())
        if (const auto* res = std::get_if<kg::ResourceNode>(&n)) ldn_to_id[res->ldn] = res->id;

    std::vector<AlarmDraft> drafts;
    for (const auto& [code, ldn] : signature.entries) {
        AlarmDraft d;
        d.code = code;
        d.equipment_ldn = ldn;
        d.equipment_id = ldn_to_id.at(ldn);
        d.time = epoch + tree_distance(topology, true_cause.anchor_node, d.equipment_id);
        auto meta = code_meta.at(code);
        d.title = meta.first;
        d.severity = meta.second;
        drafts.push_back(std::move(d));
    }
    std::sort(drafts.begin(), drafts.end(), [](const AlarmDraft& a, const AlarmDraft& b) {
        return std::tie(a.time, a.equipment_ldn, a.code) <
               std::tie(b.time, b.equipment_ldn, b.code);
    });

    std::vector<kg::Node> nodes = topology.nodes();
    std::vector<kg::Edge> edges = topology.edges();
    std::vector<std::string> targets;

    int alarm_index = 0;
    for (const AlarmDraft& d : drafts) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "alarm_%03d", ++alarm_index);
        kg::AlarmNode alarm;
        alarm.id = buf;
        alarm.title = d.title;
        alarm.code = d.code;
        alarm.severity = d.severity;
        alarm.report_time = d.time;
        nodes.push_back(alarm);
        edges.push_back({d.equipment_id, alarm.id, kg::EdgeKind::Generate});
        targets.push_back(alarm.id);
    }

    const std::string& earliest_alarm = targets.front();
    int cause_index = 0;
    for (const CandidateCause& candidate : candidates) {
        const CausalRule* candidate_rule = catalog.find(candidate.rule_id);
        char buf[16];
        std::snprintf(buf, sizeof buf, "cause_%02d", ++cause_index);
        kg::CauseNode cause;
        cause.id = buf;
        cause.cause_description = candidate_rule->cause_description;
        cause.solution = candidate_rule->solution;
        nodes.push_back(cause);
        edges.push_back({earliest_alarm, cause.id, kg::EdgeKind::CausedBy});
    }

    kg::Scenario scenario;
    scenario.id = scenario_id;
    scenario.graph = kg::KnowledgeGraph(scenario_id, std::move(nodes), std::move(edges),
                                        std::move(targets));
    scenario.difficulty = difficulty;

    const auto* anchor = topology.as_resource(true_cause.anchor_node);
    kg::RootCause truth{rule->cause_description, anchor->ldn, rule->solution};
    scenario.label.scenario_id = scenario_id;
    for (const std::string& target : scenario.graph.target_alarms())
        scenario.label.entries.emplace_back(target, std::vector<kg::RootCause>{truth});
    return scenario;
}

namespace {

struct DrawResult {
    kg::Scenario scenario;
    CandidateCause true_cause;
};

// One seeded draw for scenario `index`, attempt `attempt`. Returns nothing
// when the drawn rule has no anchor in the drawn topology (e.g. a RiPort
// rule on a port-free tree); callers advance the attempt counter.
std::optional<DrawResult> draw_scenario(const GeneratorConfig& config,
                                        const RuleCatalog& catalog,
                                        const TopologySpec& topo_spec, int index,
                                        std::uint64_t attempt) {
    std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(index), attempt);
    TopologySpec spec = topo_spec;
    spec.seed = seed;
    kg::KnowledgeGraph topology = generate_topology(spec);

    SplitMix64 rng(derive_seed(seed, 0x5eedULL));
    std::vector<double> weights = zipf_weights(catalog.rules.size(), config.zipf_exponent);
    const CausalRule& rule = catalog.rules[sample_discrete(rng, weights)];

    std::vector<std::string> anchors;
    for (const kg::Node& n : topology.nodes())
        if (const auto* res = std::get_if<kg::ResourceNode>(&n); res && res->kind == rule.anchor_kind)
            anchors.push_back(res->id);
    if (anchors.empty()) return std::nullopt;
    std::sort(anchors.begin(), anchors.end());
    CandidateCause true_cause{rule.rule_id, anchors[rng.uniform(0, anchors.size() - 1)]};

    char idbuf[16];
    std::snprintf(idbuf, sizeof idbuf, "%05d", index);
    std::int64_t epoch = kEpochBase + (index - 1) * kEpochStepSeconds;
    kg::Scenario scenario = assemble_scenario(topology, true_cause, catalog, idbuf, epoch);

    if (config.noise_rate > 0.0 && rng.uniform01() < config.noise_rate) {
        // Spurious non-target alarm: visible in the graph, absent from
        // target_alarms and the label, so grading stays noise-free.
        std::set<std::int64_t> codes;
        for (const CausalRule& r : catalog.rules)
            for (const AlarmTemplate& tpl : r.templates) codes.insert(tpl.code);
        std::vector<std::int64_t> code_list(codes.begin(), codes.end());
        std::vector<std::string> resources;
        for (const kg::Node& n : scenario.graph.nodes())
            if (std::holds_alternative<kg::ResourceNode>(n)) resources.push_back(kg::node_id(n));
        std::sort(resources.begin(), resources.end());

        std::map<std::int64_t, std::pair<std::string, kg::Severity>> code_meta;
        for (const CausalRule& r : catalog.rules)
            for (const AlarmTemplate& tpl : r.templates)
                code_meta.emplace(tpl.code, std::make_pair(tpl.title, tpl.severity));

        kg::AlarmNode noise;
        noise.id = "alarm_noise";
        noise.code = code_list[rng.uniform(0, code_list.size() - 1)];
        auto meta = code_meta.at(noise.code);
        noise.title = meta.first;
        noise.severity = meta.second;
        noise.report_time = epoch + 30;
        std::string equipment = resources[rng.uniform(0, resources.size() - 1)];

        std::vector<kg::Node> nodes = scenario.graph.nodes();
        std::vector<kg::Edge> edges = scenario.graph.edges();
        nodes.push_back(noise);
        edges.push_back({equipment, noise.id, kg::EdgeKind::Generate});
        scenario.graph = kg::KnowledgeGraph(scenario.id, std::move(nodes), std::move(edges),
                                            scenario.graph.target_alarms());
    }

    return DrawResult{std::move(scenario), std::move(true_cause)};
}

DrawResult draw_scenario_checked(const GeneratorConfig& config, const RuleCatalog& catalog,
                                 const TopologySpec& topo_spec, int index,
                                 std::uint64_t& attempt) {
    for (int guard = 0; guard < config.max_rejection_rounds + 64; ++guard) {
        auto result = draw_scenario(config, catalog, topo_spec, index, attempt++);
        if (result) return std::move(*result);
    }
    throw InvalidGeneratorConfig(
        "catalog and topology spec are incompatible: no anchor available after repeated draws");
}

} // namespace

Dataset assemble_dataset(const GeneratorConfig& config, const RuleCatalog& catalog,
                         const TopologySpec& topo_spec) {
    if (config.num_scenarios < 1)
        throw InvalidGeneratorConfig("num_scenarios must be >= 1");
    if (config.zipf_exponent <= 0.0)
        throw InvalidGeneratorConfig("zipf_exponent must be positive");
    if (config.target_simple_count &&
        (*config.target_simple_count < 0 || *config.target_simple_count > config.num_scenarios))
        throw InvalidGeneratorConfig("target_simple_count must be in [0, num_scenarios]");
    auto catalog_violations = validate_catalog(catalog);
    if (!catalog_violations.empty())
        throw InvalidGeneratorConfig("catalog invalid: " + catalog_violations.front().invariant +
                                     " (" + catalog_violations.front().subject + ")");

    std::vector<DrawResult> results;
    std::vector<std::uint64_t> attempts(static_cast<std::size_t>(config.num_scenarios), 0);
    results.reserve(static_cast<std::size_t>(config.num_scenarios));
    for (int i = 1; i <= config.num_scenarios; ++i)
        results.push_back(draw_scenario_checked(config, catalog, topo_spec, i,
                                                attempts[static_cast<std::size_t>(i - 1)]));

    auto simple_count = [&] {
        int n = 0;
        for (const DrawResult& r : results)
            if (r.scenario.difficulty.is_simple()) ++n;
        return n;
    };

    if (config.target_simple_count) {
        int target = *config.target_simple_count;
        // Resample individual scenarios until the split is exact. Walking
        // ascending scenario indices keeps the procedure deterministic.
        for (int i = 0; i < config.num_scenarios && simple_count() != target; ++i) {
            int current = simple_count();
            bool want_flip = current > target ? results[static_cast<std::size_t>(i)]
                                                    .scenario.difficulty.is_simple()
                                              : !results[static_cast<std::size_t>(i)]
                                                     .scenario.difficulty.is_simple();
            if (!want_flip) continue;
            bool target_simple = current < target;
            std::uint64_t& attempt = attempts[static_cast<std::size_t>(i)];
            for (int round = 0; round < config.max_rejection_rounds; ++round) {
                DrawResult redraw =
                    draw_scenario_checked(config, catalog, topo_spec, i + 1, attempt);
                if (redraw.scenario.difficulty.is_simple() == target_simple) {
                    results[static_cast<std::size_t>(i)] = std::move(redraw);
                    break;
                }
            }
        }
        if (simple_count() != target)
            throw MixUnreachable(simple_count(), config.num_scenarios - simple_count(), target);
    }

    Dataset dataset;
    dataset.manifest.seed = config.seed;
    dataset.manifest.zipf_exponent = config.zipf_exponent;
    dataset.manifest.catalog_digest = digest_hex(serialize_catalog(catalog));
    for (const CausalRule& rule : catalog.rules)
        dataset.manifest.cause_frequencies.emplace_back(rule.rule_id, 0);

    for (DrawResult& r : results) {
        for (auto& [rule_id, count] : dataset.manifest.cause_frequencies)
            if (rule_id == r.true_cause.rule_id) ++count;
        if (r.scenario.difficulty.is_simple())
            ++dataset.manifest.simple_count;
        else
            ++dataset.manifest.difficult_count;
        const auto* anchor = r.scenario.graph.as_resource(r.true_cause.anchor_node);
        dataset.manifest.scenarios.push_back({r.scenario.id, r.scenario.difficulty,
                                              r.true_cause.rule_id, anchor->ldn});
        dataset.scenarios.push_back(std::move(r.scenario));
    }
    return dataset;
}

std::string serialize_manifest(const DatasetManifest& manifest) {
    ordered_json doc;
    doc["schema_version"] = "1";
    doc["seed"] = manifest.seed;
    doc["zipf_exponent"] = manifest.zipf_exponent;
    doc["catalog_digest"] = manifest.catalog_digest;
    doc["num_scenarios"] = manifest.simple_count + manifest.difficult_count;
    doc["simple_count"] = manifest.simple_count;
    doc["difficult_count"] = manifest.difficult_count;
    doc["cause_frequencies"] = ordered_json::array();
    for (const auto& [rule_id, count] : manifest.cause_frequencies) {
        ordered_json row;
        row["rule_id"] = rule_id;
        row["count"] = count;
        doc["cause_frequencies"].push_back(std::move(row));
    }
    doc["scenarios"] = ordered_json::array();
    for (const ScenarioRecord& rec : manifest.scenarios) {
        ordered_json row;
        row["id"] = rec.id;
        row["difficulty"] = rec.difficulty.is_simple() ? "simple" : "difficult";
        row["ambiguity"] = rec.difficulty.ambiguity;
        row["rule_id"] = rec.rule_id;
        row["anchor"] = rec.anchor_ldn;
        doc["scenarios"].push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

DatasetManifest parse_manifest(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw kg::MalformedDocument("", "manifest is not valid JSON");
    DatasetManifest manifest;
    try {
        manifest.seed = doc.at("seed").get<std::uint64_t>();
        manifest.zipf_exponent = doc.at("zipf_exponent").get<double>();
        manifest.catalog_digest = doc.at("catalog_digest").get<std::string>();
        manifest.simple_count = doc.at("simple_count").get<int>();
        manifest.difficult_count = doc.at("difficult_count").get<int>();
        for (const json& row : doc.at("cause_frequencies"))
            manifest.cause_frequencies.emplace_back(row.at("rule_id").get<std::string>(),
                                                    row.at("count").get<int>());
        for (const json& row : doc.at("scenarios")) {
            ScenarioRecord rec;
            rec.id = row.at("id").get<std::string>();
            int ambiguity = row.at("ambiguity").get<int>();
            rec.difficulty = row.at("difficulty").get<std::string>() == "simple"
                                 ? kg::Difficulty::simple()
                                 : kg::Difficulty::difficult(ambiguity);
            rec.rule_id = row.at("rule_id").get<std::string>();
            rec.anchor_ldn = row.at("anchor").get<std::string>();
            manifest.scenarios.push_back(std::move(rec));
        }
    } catch (const json::exception& e) {
        throw kg::SchemaViolation("", std::string("manifest: ") + e.what());
    }
    return manifest;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    for (const kg::Scenario& scenario : dataset.scenarios) {
        fs::path dir = out_dir / ("scenario_" + scenario.id);
        fs::create_directories(dir);
        std::ofstream input(dir / "input.json", std::ios::binary | std::ios::trunc);
        input << kg::serialize_input(scenario.graph);
        std::ofstream label(dir / "label.json", std::ios::binary | std::ios::trunc);
        label << kg::serialize_label(scenario.label);
    }
    std::ofstream manifest(out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
    manifest << serialize_manifest(dataset.manifest);
}

std::pair<GeneratorConfig, TopologySpec> parse_generator_config(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw kg::MalformedDocument("", "generator config is not valid JSON");

    GeneratorConfig config;
    TopologySpec spec;
    try {
        config.num_scenarios = doc.at("num_scenarios").get<int>();
        config.zipf_exponent = doc.at("zipf_exponent").get<double>();
        config.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("target_simple_count"))
            config.target_simple_count = doc.at("target_simple_count").get<int>();
        if (doc.contains("max_rejection_rounds"))
            config.max_rejection_rounds = doc.at("max_rejection_rounds").get<int>();
        if (doc.contains("noise_rate"))
            config.noise_rate = doc.at("noise_rate").get<double>();

        const json& topo = doc.at("topology");
        spec.base_stations = topo.at("base_stations").get<int>();
        auto range = [&](const char* key) {
            const json& v = topo.at(key);
            return CountRange{v.at(0).get<int>(), v.at(1).get<int>()};
        };
        spec.bbus_per_station = range("bbus_per_station");
        spec.boards_per_bbu = range("boards_per_bbu");
        spec.rrus_per_board = range("rrus_per_board");
        spec.ri_ports_per_rru = range("ri_ports_per_rru");
    } catch (const json::exception& e) {
        throw kg::SchemaViolation("", std::string("generator config: ") + e.what());
    }
    return {config, spec};
}

} // namespace rca::forge
