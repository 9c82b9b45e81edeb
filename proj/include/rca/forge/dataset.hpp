#pragma once

#include "rca/forge/propagate.hpp"
#include "rca/forge/topology.hpp"
#include "rca/kg/graph.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rca::forge {

struct GeneratorConfig {
    int num_scenarios = 0;
    double zipf_exponent = 1.1;
    std::uint64_t seed = 0;
    std::optional<int> target_simple_count;
    int max_rejection_rounds = 256;
    // Spurious non-target alarms, injected after grading. Off by default;
    // intended for stress tests only.
    double noise_rate = 0.0;
};

struct InvalidGeneratorConfig : std::runtime_error {
    explicit InvalidGeneratorConfig(const std::string& what) : std::runtime_error(what) {}
};

// Raised when target_simple_count cannot be met within max_rejection_rounds;
// carries the mix that was achieved.
struct MixUnreachable : std::runtime_error {
    MixUnreachable(int achieved_simple, int achieved_difficult, int target)
        : std::runtime_error("cannot reach " + std::to_string(target) +
                             " simple scenarios; achieved " + std::to_string(achieved_simple) +
                             " simple / " + std::to_string(achieved_difficult) + " difficult"),
          achieved_simple(achieved_simple),
          achieved_difficult(achieved_difficult) {}

    int achieved_simple;
    int achieved_difficult;
};

struct ScenarioRecord {
    std::string id;
    kg::Difficulty difficulty;
    std::string rule_id;
    std::string anchor_ldn;
};

struct DatasetManifest {
    std::uint64_t seed = 0;
    double zipf_exponent = 0.0;
    std::string catalog_digest;
    int simple_count = 0;
    int difficult_count = 0;
    std::vector<std::pair<std::string, int>> cause_frequencies; // catalog order
    std::vector<ScenarioRecord> scenarios;
};

struct Dataset {
    std::vector<kg::Scenario> scenarios;
    DatasetManifest manifest;
};

// Builds one benchmark scenario around a graded true cause: alarms from the
// backward signature (timestamps offset by hop distance from the anchor),
// candidate cause nodes from the forward phase, and a label naming the one
// true cause for every target alarm.
kg::Scenario assemble_scenario(const kg::KnowledgeGraph& topology,
                               const CandidateCause& true_cause, const RuleCatalog& catalog,
                               const std::string& scenario_id, std::int64_t epoch);

// Full dataset: Zipf-sampled causes over fresh per-index topologies, with
// rejection resampling until the Simple count matches target_simple_count
// exactly. Fully determined by (config, catalog, topo_spec).
Dataset assemble_dataset(const GeneratorConfig& config, const RuleCatalog& catalog,
                         const TopologySpec& topo_spec);

// Directory layout: scenario_<id>/{input.json,label.json} + manifest.json.
void write_dataset(const Dataset& dataset, const std::filesystem::path& out_dir);

std::string serialize_manifest(const DatasetManifest& manifest);
DatasetManifest parse_manifest(const std::string& text);

// Reads config + topology spec from the generator config file.
std::pair<GeneratorConfig, TopologySpec> parse_generator_config(const std::string& text);

} // namespace rca::forge
