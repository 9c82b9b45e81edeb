#pragma once

#include "rca/eval/metrics.hpp"
#include "rca/kg/graph.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rca::eval {

struct SolverSpec {
    std::vector<std::string> command; // executable + fixed arguments
    double timeout_seconds = 30.0;
    std::filesystem::path working_dir; // scratch root; each run gets a subdir
};

enum class SolverFailureKind { Crash, Timeout, Empty };

const char* to_string(SolverFailureKind kind);

struct SolverFailure {
    SolverFailureKind kind = SolverFailureKind::Crash;
    int exit_code = 0;

    bool operator==(const SolverFailure&) const = default;
};

struct SolverRun {
    std::string raw_output;
    std::optional<SolverFailure> failure;
};

// Invokes the solver as `<command...> <input path>` and captures standard
// output. Nonzero exit, timeout and empty output are failures recorded as
// data; they never abort an evaluation.
SolverRun run_solver(const SolverSpec& solver, const std::filesystem::path& input_path);

// A scenario the solver got wrong (f1 < 1 or the solver errored).
struct BadCase {
    std::string scenario_id;
    std::string input_path; // relative to the dataset directory
    kg::Label expected;
    Prediction predicted;
    std::string raw_output;
    std::optional<SolverFailure> solver_failure;
    bool malformed_output = false;
    std::vector<std::string> candidate_causes; // cause descriptions offered by the input
    ScenarioMetrics metrics;
    std::vector<std::string> failure_kinds; // filled by the case analyzer
};

// Minimal digest of a correctly solved scenario, for contrastive pairing.
struct PassingCase {
    std::string scenario_id;
    std::vector<std::string> truth_descriptions;
};

struct EvalResult {
    AggregateReport report;
    std::vector<BadCase> bad_cases;
    std::vector<PassingCase> passing_cases;
};

struct DatasetInvalid : std::runtime_error {
    explicit DatasetInvalid(const std::string& what) : std::runtime_error(what) {}
};

// Runs the solver over every scenario in the dataset directory.
// k == 0 scores full ranked lists; k >= 1 truncates per alarm first.
// Scenario evaluations run on `jobs` worker threads; the outcome is
// independent of scheduling.
EvalResult evaluate_dataset(const SolverSpec& solver, const std::filesystem::path& dataset_dir,
                            int k = 0, int jobs = 1);

// Report document with per-stratum aggregates and per-scenario rows.
std::string serialize_report(const AggregateReport& report, int k);

} // namespace rca::eval
