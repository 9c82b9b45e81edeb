#include "rca/loop/loop.hpp"

#include "rca/agent/sanitize.hpp"
#include "rca/eval/process.hpp"
#include "rca/kg/serialize.hpp"
#include "rca/util/hash.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace rca::loop {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const char* to_string(RejectionReason reason) {
    switch (reason) {
    case RejectionReason::ScoreNotImproved: return "scoreNotImproved";
    case RejectionReason::SanitizeFailure: return "sanitizeFailure";
    case RejectionReason::ValidationFailure: return "validationFailure";
    case RejectionReason::BackendFailure: return "backendFailure";
    }
    return "scoreNotImproved";
}

namespace {

std::optional<RejectionReason> rejection_reason_from(const std::string& name) {
    for (RejectionReason r :
         {RejectionReason::ScoreNotImproved, RejectionReason::SanitizeFailure,
          RejectionReason::ValidationFailure, RejectionReason::BackendFailure})
        if (name == to_string(r)) return r;
    return std::nullopt;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

eval::SolverSpec make_solver_spec(const LoopConfig& config, const fs::path& source_path) {
    std::string command = config.solver_runner;
    const std::string placeholder = "{source}";
    std::size_t pos = command.find(placeholder);
    if (pos != std::string::npos)
        command.replace(pos, placeholder.size(), source_path.string());
    eval::SolverSpec spec;
    spec.command = eval::split_command(command);
    spec.timeout_seconds = config.solver_timeout_seconds;
    return spec;
}

eval::EvalResult evaluate_source(const LoopConfig& config, const fs::path& source_path) {
    return eval::evaluate_dataset(make_solver_spec(config, source_path), config.dataset_dir,
                                  config.k, config.jobs);
}

std::string round_file(int round, const char* suffix) {
    return "round_" + std::to_string(round) + "_" + suffix;
}

} // namespace

RoundZero run_round_zero(const LoopConfig& config) {
    if (!fs::exists(config.initial_solver))
        throw SolverMissing("initial solver source not found: " +
                            config.initial_solver.string());

    RoundZero zero;
    zero.source = read_file(config.initial_solver);
    zero.source_hash = digest_hex(zero.source);
    zero.eval = evaluate_source(config, config.initial_solver);

    zero.record.round = 0;
    zero.record.candidate_hash = zero.source_hash;
    zero.record.candidate_f1 = zero.eval.report.mixed.f1;
    zero.record.accepted = true; // the baseline is accepted by definition
    zero.record.best_f1_after = zero.eval.report.mixed.f1;
    return zero;
}

RunManifest run_loop(const LoopConfig& config, const std::string& config_digest) {
    fs::create_directories(config.out_dir);

    RoundZero zero = run_round_zero(config);
    write_file(config.out_dir / round_file(0, "report.json"),
               eval::serialize_report(zero.eval.report, config.k));

    std::string best_source = zero.source;
    std::string best_hash = zero.source_hash;
    eval::EvalResult best_eval = std::move(zero.eval);

    RunManifest manifest;
    manifest.config_digest = config_digest;
    manifest.k = config.k;
    manifest.records.push_back(zero.record);

    for (int round = 1; round <= config.rounds; ++round) {
        RoundRecord record;
        record.round = round;
        record.best_f1_after = best_eval.report.mixed.f1;

        if (best_eval.bad_cases.empty()) {
            // Nothing left to learn from; idle round.
            manifest.records.push_back(record);
            continue;
        }

        analysis::FailureReport report =
            analysis::build_report(best_eval.bad_cases, best_eval.passing_cases);
        record.primary_targeted = report.primary;
        write_file(config.out_dir / round_file(round, "analysis.json"),
                   analysis::serialize_failure_report(report));

        auto reject = [&](RejectionReason reason) {
            record.accepted = false;
            record.rejection_reason = reason;
            manifest.records.push_back(record);
        };

        std::string response;
        try {
            agent::PromptContext context{round, best_eval.report.mixed.f1,
                                         best_eval.report.mixed.count};
            agent::RepairPrompt prompt =
                agent::build_prompt(report, best_source, config.agent, context);
            write_file(config.out_dir / round_file(round, "prompt.txt"),
                       prompt.system_preamble + "\n\n" + prompt.body);
            response = agent::query_backend(prompt, config.agent, round, report.primary);
            write_file(config.out_dir / round_file(round, "response.txt"), response);
        } catch (const agent::BackendUnavailable&) {
            reject(RejectionReason::BackendFailure);
            continue;
        } catch (const agent::BudgetInfeasible&) {
            reject(RejectionReason::BackendFailure);
            continue;
        }

        agent::CandidateSource candidate;
        try {
            candidate = agent::sanitize(response);
        } catch (const agent::SanitizeFailure&) {
            reject(RejectionReason::SanitizeFailure);
            continue;
        }
        record.candidate_hash = candidate.source_hash;

        fs::path candidate_path = config.out_dir / round_file(round, "candidate.src");
        write_file(candidate_path, candidate.text);

        try {
            agent::validate_candidate(candidate, config.validator);
        } catch (const agent::ValidationFailure&) {
            reject(RejectionReason::ValidationFailure);
            continue;
        }

        eval::EvalResult candidate_eval = evaluate_source(config, candidate_path);
        record.candidate_f1 = candidate_eval.report.mixed.f1;
        write_file(config.out_dir / round_file(round, "report.json"),
                   eval::serialize_report(candidate_eval.report, config.k));

        if (candidate_eval.report.mixed.f1 > best_eval.report.mixed.f1) {
            best_source = candidate.text;
            best_hash = candidate.source_hash;
            best_eval = std::move(candidate_eval);
            record.accepted = true;
            record.best_f1_after = best_eval.report.mixed.f1;
            manifest.records.push_back(record);
        } else {
            reject(RejectionReason::ScoreNotImproved);
        }
    }

    manifest.best_source_hash = best_hash;
    manifest.final_report = best_eval.report;
    write_file(config.out_dir / "best.src", best_source);
    write_file(config.out_dir / "manifest.json", serialize_run_manifest(manifest));
    return manifest;
}

std::string render_progress(const RunManifest& manifest) {
    std::ostringstream out;
    out << "round  candidate_f1  status    reason             best_f1\n";
    for (const RoundRecord& record : manifest.records) {
        char candidate[16] = "-";
        char best[16];
        std::snprintf(best, sizeof best, "%.4f", record.best_f1_after);
        const char* status;
        std::string reason = "-";
        if (record.round == 0) {
            status = "baseline";
            std::snprintf(candidate, sizeof candidate, "%.4f", record.best_f1_after);
        } else if (record.accepted) {
            status = "accepted";
            std::snprintf(candidate, sizeof candidate, "%.4f", *record.candidate_f1);
        } else if (record.rejection_reason) {
            status = "rejected";
            reason = to_string(*record.rejection_reason);
            // Rejected rounds render as 0.0000 whatever the measured score.
            std::snprintf(candidate, sizeof candidate, "0.0000");
        } else {
            status = "idle";
        }
        char line[128];
        std::snprintf(line, sizeof line, "%-6d %-13s %-9s %-18s %s\n", record.round,
                      candidate, status, reason.c_str(), best);
        out << line;
    }

    out << "\nbest solver breakdown by difficulty\n";
    out << "stratum    count  precision  recall   f1\n";
    auto row = [&](const char* name, const eval::StratumMetrics& s) {
        char line[96];
        std::snprintf(line, sizeof line, "%-10s %-6d %.4f     %.4f   %.4f\n", name, s.count,
                      s.precision, s.recall, s.f1);
        out << line;
    };
    row("simple", manifest.final_report.simple);
    row("difficult", manifest.final_report.difficult);
    row("mixed", manifest.final_report.mixed);
    return out.str();
}

std::string serialize_run_manifest(const RunManifest& manifest) {
    ordered_json doc;
    doc["schema_version"] = "1";
    doc["config_digest"] = manifest.config_digest;
    doc["k"] = manifest.k;
    doc["rounds"] = ordered_json::array();
    for (const RoundRecord& record : manifest.records) {
        ordered_json r;
        r["round"] = record.round;
        r["candidate_hash"] =
            record.candidate_hash ? ordered_json(*record.candidate_hash) : ordered_json(nullptr);
        r["candidate_f1"] =
            record.candidate_f1 ? ordered_json(*record.candidate_f1) : ordered_json(nullptr);
        r["accepted"] = record.accepted;
        r["rejection_reason"] = record.rejection_reason
                                    ? ordered_json(to_string(*record.rejection_reason))
                                    : ordered_json(nullptr);
        r["primary_category_targeted"] =
            record.primary_targeted ? ordered_json(analysis::to_string(*record.primary_targeted))
                                    : ordered_json(nullptr);
        r["best_f1_after"] = record.best_f1_after;
        doc["rounds"].push_back(std::move(r));
    }
    doc["best_source_hash"] = manifest.best_source_hash;
    // Inline copy of the final best report, same shape as round reports.
    doc["final_report"] =
        ordered_json::parse(eval::serialize_report(manifest.final_report, manifest.k));
    return doc.dump(2) + "\n";
}

RunManifest parse_run_manifest(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw kg::MalformedDocument("", "run manifest is not valid JSON");
    RunManifest manifest;
    try {
        manifest.config_digest = doc.at("config_digest").get<std::string>();
        manifest.k = doc.at("k").get<int>();
        for (const json& r : doc.at("rounds")) {
            RoundRecord record;
            record.round = r.at("round").get<int>();
            if (!r.at("candidate_hash").is_null())
                record.candidate_hash = r.at("candidate_hash").get<std::string>();
            if (!r.at("candidate_f1").is_null())
                record.candidate_f1 = r.at("candidate_f1").get<double>();
            record.accepted = r.at("accepted").get<bool>();
            if (!r.at("rejection_reason").is_null())
                record.rejection_reason =
                    rejection_reason_from(r.at("rejection_reason").get<std::string>());
            if (!r.at("primary_category_targeted").is_null())
                record.primary_targeted = analysis::failure_category_from(
                    r.at("primary_category_targeted").get<std::string>());
            record.best_f1_after = r.at("best_f1_after").get<double>();
            manifest.records.push_back(std::move(record));
        }
        manifest.best_source_hash = doc.at("best_source_hash").get<std::string>();
        const json& report = doc.at("final_report");
        auto stratum = [&](const char* name) {
            eval::StratumMetrics s;
            const json& j = report.at("strata").at(name);
            s.count = j.at("count").get<int>();
            s.precision = j.at("precision").get<double>();
            s.recall = j.at("recall").get<double>();
            s.f1 = j.at("f1").get<double>();
            return s;
        };
        manifest.final_report.simple = stratum("simple");
        manifest.final_report.difficult = stratum("difficult");
        manifest.final_report.mixed = stratum("mixed");
        for (const json& row : report.at("scenarios")) {
            eval::ScenarioMetrics m;
            m.scenario_id = row.at("id").get<std::string>();
            m.difficulty = row.at("difficulty").get<std::string>() == "simple"
                               ? kg::Difficulty::simple()
                               : kg::Difficulty::difficult(2);
            m.precision = row.at("precision").get<double>();
            m.recall = row.at("recall").get<double>();
            m.f1 = row.at("f1").get<double>();
            manifest.final_report.scenarios.push_back(std::move(m));
        }
    } catch (const json::exception& e) {
        throw kg::SchemaViolation("", std::string("run manifest: ") + e.what());
    }
    return manifest;
}

LoopConfig parse_loop_config(const std::string& text, const fs::path& base_dir) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw kg::MalformedDocument("", "loop config is not valid JSON");

    LoopConfig config;
    try {
        auto resolve = [&](const std::string& p) {
            fs::path path(p);
            return path.is_absolute() ? path : base_dir / path;
        };
        config.dataset_dir = resolve(doc.at("dataset_dir").get<std::string>());
        config.initial_solver = resolve(doc.at("initial_solver").get<std::string>());
        config.solver_runner = doc.at("solver_runner").get<std::string>();
        if (doc.contains("validator") && !doc.at("validator").is_null())
            config.validator = doc.at("validator").get<std::string>();
        if (doc.contains("rounds")) config.rounds = doc.at("rounds").get<int>();
        if (doc.contains("k")) config.k = doc.at("k").get<int>();
        if (doc.contains("jobs")) config.jobs = doc.at("jobs").get<int>();
        if (doc.contains("solver_timeout_seconds"))
            config.solver_timeout_seconds = doc.at("solver_timeout_seconds").get<double>();
        config.out_dir = resolve(doc.at("out_dir").get<std::string>());

        const json& agent = doc.at("agent");
        std::string backend = agent.at("backend").get<std::string>();
        if (backend == "mock") {
            agent::MockBackend mock;
            mock.script_path = resolve(agent.at("script").get<std::string>()).string();
            config.agent.backend = mock;
        } else if (backend == "remote") {
            agent::RemoteBackend remote;
            remote.endpoint_url = agent.at("endpoint_url").get<std::string>();
            remote.model_name = agent.at("model").get<std::string>();
            if (agent.contains("max_tokens"))
                remote.max_tokens = agent.at("max_tokens").get<int>();
            if (agent.contains("temperature"))
                remote.temperature = agent.at("temperature").get<double>();
            if (agent.contains("api_key_env"))
                remote.api_key_env = agent.at("api_key_env").get<std::string>();
            config.agent.backend = remote;
        } else {
            throw kg::SchemaViolation("/agent/backend", "expected 'mock' or 'remote'");
        }
        if (agent.contains("prompt_budget_chars"))
            config.agent.prompt_budget_chars =
                agent.at("prompt_budget_chars").get<std::size_t>();
        if (agent.contains("exploratory_questions"))
            for (const json& q : agent.at("exploratory_questions"))
                config.agent.exploratory_questions.push_back(q.get<std::string>());
    } catch (const json::exception& e) {
        throw kg::SchemaViolation("", std::string("loop config: ") + e.what());
    }
    if (config.rounds < 1)
        throw kg::SchemaViolation("/rounds", "rounds must be >= 1");
    if (config.agent.prompt_budget_chars < 4096)
        throw kg::SchemaViolation("/agent/prompt_budget_chars", "must be >= 4096");
    return config;
}

} // namespace rca::loop
