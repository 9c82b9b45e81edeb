#pragma once

#include "rca/agent/agent.hpp"
#include "rca/eval/harness.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rca::loop {

struct LoopConfig {
    std::filesystem::path dataset_dir;
    std::filesystem::path initial_solver; // path to solver source
    std::string solver_runner;            // command template containing {source}
    std::optional<std::string> validator; // candidate file path is appended
    int rounds = 5;
    int k = 0;
    int jobs = 1;
    double solver_timeout_seconds = 30.0;
    agent::AgentConfig agent;
    std::filesystem::path out_dir;
};

enum class RejectionReason {
    ScoreNotImproved,
    SanitizeFailure,
    ValidationFailure,
    BackendFailure,
};

const char* to_string(RejectionReason reason);

struct RoundRecord {
    int round = 0;
    std::optional<std::string> candidate_hash;
    std::optional<double> candidate_f1; // true score, kept even for rejected rounds
    bool accepted = false;
    std::optional<RejectionReason> rejection_reason; // absent for accepted and idle rounds
    std::optional<analysis::FailureCategory> primary_targeted;
    double best_f1_after = 0.0;
};

struct RunManifest {
    std::string config_digest;
    int k = 0;
    std::vector<RoundRecord> records; // rounds + 1 entries; round 0 is the baseline
    std::string best_source_hash;
    eval::AggregateReport final_report;
};

struct SolverMissing : std::runtime_error {
    explicit SolverMissing(const std::string& what) : std::runtime_error(what) {}
};

struct RoundZero {
    eval::EvalResult eval;
    RoundRecord record;
    std::string source;
    std::string source_hash;
};

// Baseline evaluation of the initial solver over the full dataset.
// Round 0 is accepted by definition.
RoundZero run_round_zero(const LoopConfig& config);

// The full evaluate-analyze-generate-validate loop. Every round either
// accepts a strictly better candidate or records why it was rejected;
// best-so-far never regresses. Writes all round artifacts plus manifest
// and best.src under config.out_dir.
RunManifest run_loop(const LoopConfig& config, const std::string& config_digest);

// Progress table plus the final per-stratum breakdown. Rejected rounds
// render a candidate score of "0.0000" regardless of the recorded value.
std::string render_progress(const RunManifest& manifest);

std::string serialize_run_manifest(const RunManifest& manifest);
RunManifest parse_run_manifest(const std::string& text);

// Loop config file (JSON). Relative paths resolve against the config
// file's directory.
LoopConfig parse_loop_config(const std::string& text,
                             const std::filesystem::path& base_dir);

} // namespace rca::loop
