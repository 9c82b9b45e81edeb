#include "rca/eval/harness.hpp"

#include "rca/eval/process.hpp"
#include "rca/forge/dataset.hpp"
#include "rca/kg/serialize.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace rca::eval {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const char* to_string(SolverFailureKind kind) {
    switch (kind) {
    case SolverFailureKind::Crash: return "crash";
    case SolverFailureKind::Timeout: return "timeout";
    case SolverFailureKind::Empty: return "empty";
    }
    return "crash";
}

SolverRun run_solver(const SolverSpec& solver, const fs::path& input_path) {
    std::vector<std::string> argv = solver.command;
    argv.push_back(input_path.string());
    ProcessResult proc = run_process(argv, solver.timeout_seconds, solver.working_dir);

    SolverRun run;
    run.raw_output = proc.stdout_text;
    if (proc.timed_out) {
        run.failure = SolverFailure{SolverFailureKind::Timeout, -1};
    } else if (proc.spawn_failed || proc.exit_code != 0) {
        run.failure = SolverFailure{SolverFailureKind::Crash,
                                    proc.spawn_failed ? 127 : proc.exit_code};
    } else {
        bool blank = run.raw_output.find_first_not_of(" \t\r\n") == std::string::npos;
        if (blank) run.failure = SolverFailure{SolverFailureKind::Empty, 0};
    }
    return run;
}

namespace {

struct LoadedScenario {
    std::string id;
    fs::path input_path;
    kg::Label label;
    kg::Difficulty difficulty;
    std::vector<std::string> candidate_causes;
};

std::vector<LoadedScenario> load_scenarios(const fs::path& dataset_dir) {
    fs::path manifest_path = dataset_dir / "manifest.json";
    if (!fs::exists(manifest_path))
        throw DatasetInvalid("missing manifest: " + manifest_path.string());
    std::ifstream in(manifest_path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();

    forge::DatasetManifest manifest;
    try {
        manifest = forge::parse_manifest(buf.str());
    } catch (const kg::ParseError& e) {
        throw DatasetInvalid(e.what());
    }
    if (manifest.scenarios.empty()) throw DatasetInvalid("manifest lists no scenarios");

    std::vector<LoadedScenario> scenarios;
    for (const forge::ScenarioRecord& rec : manifest.scenarios) {
        LoadedScenario s;
        s.id = rec.id;
        s.difficulty = rec.difficulty;
        fs::path dir = dataset_dir / ("scenario_" + rec.id);
        s.input_path = dir / "input.json";
        fs::path label_path = dir / "label.json";
        if (!fs::exists(s.input_path) || !fs::exists(label_path))
            throw DatasetInvalid("scenario files missing under " + dir.string());
        std::ifstream label_in(label_path, std::ios::binary);
        std::ostringstream label_buf;
        label_buf << label_in.rdbuf();
        try {
            s.label = kg::parse_label(label_buf.str());
        } catch (const kg::ParseError& e) {
            throw DatasetInvalid(std::string("label invalid: ") + e.what());
        }
        // The input is parsed up front both to fail fast on a broken
        // dataset and to extract the candidate causes for bad-case digests.
        std::ifstream input_in(s.input_path, std::ios::binary);
        std::ostringstream input_buf;
        input_buf << input_in.rdbuf();
        try {
            kg::KnowledgeGraph graph = kg::parse_input(input_buf.str());
            std::set<std::string> descs;
            for (const kg::Node& n : graph.nodes())
                if (const auto* cause = std::get_if<kg::CauseNode>(&n))
                    descs.insert(cause->cause_description);
            s.candidate_causes.assign(descs.begin(), descs.end());
        } catch (const kg::ParseError& e) {
            throw DatasetInvalid(std::string("input invalid: ") + e.what());
        }
        scenarios.push_back(std::move(s));
    }
    std::sort(scenarios.begin(), scenarios.end(),
              [](const LoadedScenario& a, const LoadedScenario& b) { return a.id < b.id; });
    return scenarios;
}

} // namespace

EvalResult evaluate_dataset(const SolverSpec& solver, const fs::path& dataset_dir, int k,
                            int jobs) {
    // Children run under per-scenario scratch directories, so every path
    // they receive must be absolute.
    std::vector<LoadedScenario> scenarios = load_scenarios(fs::absolute(dataset_dir));

    SolverSpec base_solver = solver;
    if (!base_solver.command.empty() &&
        base_solver.command.front().find('/') != std::string::npos)
        base_solver.command.front() = fs::absolute(base_solver.command.front()).string();

    struct Outcome {
        SolverRun run;
        Prediction prediction;
        ScenarioMetrics metrics;
    };
    std::vector<Outcome> outcomes(scenarios.size());

    fs::path scratch_root = solver.working_dir;
    bool own_scratch = scratch_root.empty();
    if (own_scratch) {
        scratch_root = fs::temp_directory_path() /
                       ("rca-eval-" + std::to_string(::getpid()) + "-" +
                        std::to_string(reinterpret_cast<std::uintptr_t>(&outcomes)));
    } else {
        scratch_root = fs::absolute(scratch_root);
    }
    fs::create_directories(scratch_root);

    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        while (true) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= scenarios.size()) return;
            const LoadedScenario& scenario = scenarios[i];
            SolverSpec spec = base_solver;
            spec.working_dir = scratch_root / scenario.id;
            fs::create_directories(spec.working_dir);

            Outcome& out = outcomes[i];
            out.run = run_solver(spec, scenario.input_path);
            if (out.run.failure) {
                out.prediction = Prediction{};
                out.prediction.malformed = false;
            } else {
                out.prediction = parse_prediction(out.run.raw_output);
                if (!out.prediction.malformed &&
                    out.prediction.scenario_id != scenario.label.scenario_id) {
                    out.prediction = Prediction{};
                    out.prediction.malformed = true;
                }
            }
            out.metrics = score_scenario(out.prediction, scenario.label, k);
            out.metrics.scenario_id = scenario.id;
            out.metrics.difficulty = scenario.difficulty;
        }
    };

    int n_threads = std::max(1, jobs);
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();

    if (own_scratch) {
        std::error_code ec;
        fs::remove_all(scratch_root, ec);
    }

    EvalResult result;
    std::vector<ScenarioMetrics> metrics;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const LoadedScenario& scenario = scenarios[i];
        Outcome& out = outcomes[i];
        metrics.push_back(out.metrics);
        bool bad = out.metrics.f1 < 1.0 || out.run.failure.has_value();
        if (bad) {
            BadCase bc;
            bc.scenario_id = scenario.id;
            bc.input_path = ("scenario_" + scenario.id) + "/input.json";
            bc.expected = scenario.label;
            bc.predicted = out.prediction;
            bc.raw_output = out.run.raw_output;
            bc.solver_failure = out.run.failure;
            bc.malformed_output = out.prediction.malformed;
            bc.candidate_causes = scenario.candidate_causes;
            bc.metrics = out.metrics;
            result.bad_cases.push_back(std::move(bc));
        } else {
            PassingCase pc;
            pc.scenario_id = scenario.id;
            std::set<std::string> descs;
            for (const auto& [alarm_id, causes] : scenario.label.entries)
                for (const kg::RootCause& rc : causes) descs.insert(rc.cause_description);
            pc.truth_descriptions.assign(descs.begin(), descs.end());
            result.passing_cases.push_back(std::move(pc));
        }
    }
    result.report = aggregate(std::move(metrics));
    return result;
}

std::string serialize_report(const AggregateReport& report, int k) {
    ordered_json doc;
    doc["schema_version"] = "1";
    doc["k"] = k;
    auto stratum = [](const StratumMetrics& s) {
        ordered_json out;
        out["count"] = s.count;
        out["precision"] = s.precision;
        out["recall"] = s.recall;
        out["f1"] = s.f1;
        return out;
    };
    doc["strata"]["simple"] = stratum(report.simple);
    doc["strata"]["difficult"] = stratum(report.difficult);
    doc["strata"]["mixed"] = stratum(report.mixed);
    doc["scenarios"] = ordered_json::array();
    for (const ScenarioMetrics& m : report.scenarios) {
        ordered_json row;
        row["id"] = m.scenario_id;
        row["difficulty"] = m.difficulty.is_simple() ? "simple" : "difficult";
        row["precision"] = m.precision;
        row["recall"] = m.recall;
        row["f1"] = m.f1;
        doc["scenarios"].push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

} // namespace rca::eval
