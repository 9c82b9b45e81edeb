// rca-forge: benchmark generator, solver evaluation harness and
// self-improving repair loop behind one command.

#include "rca/eval/harness.hpp"
#include "rca/eval/process.hpp"
#include "rca/forge/dataset.hpp"
#include "rca/kg/serialize.hpp"
#include "rca/kg/validate.hpp"
#include "rca/loop/loop.hpp"
#include "rca/util/hash.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

// Stable exit codes: 0 success, 1 usage, 2 data/validation, 3 runtime.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool command_exists(const std::string& command) {
    std::vector<std::string> argv = rca::eval::split_command(command);
    if (argv.empty()) return false;
    const std::string& exe = argv[0];
    if (exe.find('/') != std::string::npos) return ::access(exe.c_str(), X_OK) == 0;
    const char* path_env = std::getenv("PATH");
    if (!path_env) return false;
    std::stringstream paths(path_env);
    std::string dir;
    while (std::getline(paths, dir, ':')) {
        if (dir.empty()) continue;
        if (::access((dir + "/" + exe).c_str(), X_OK) == 0) return true;
    }
    return false;
}

int cmd_gen(const std::string& config_path, const std::string& catalog_path,
            const std::string& out_dir, std::optional<std::uint64_t> seed, bool quiet) {
    auto [config, topo_spec] = rca::forge::parse_generator_config(read_file(config_path));
    if (seed) config.seed = *seed;
    rca::forge::RuleCatalog catalog = rca::forge::load_catalog(catalog_path);

    rca::forge::Dataset dataset = rca::forge::assemble_dataset(config, catalog, topo_spec);
    rca::forge::write_dataset(dataset, out_dir);

    if (!quiet) {
        const auto& m = dataset.manifest;
        int total = m.simple_count + m.difficult_count;
        std::cout << "wrote " << total << " scenarios to " << out_dir << "\n"
                  << "  simple:    " << m.simple_count << "\n"
                  << "  difficult: " << m.difficult_count << " ("
                  << (total ? 100.0 * m.difficult_count / total : 0.0) << "%)\n"
                  << "  seed:      " << m.seed << "\n"
                  << "  catalog:   " << m.catalog_digest << "\n";
    }
    return kExitOk;
}

int cmd_validate(const std::string& dataset_dir, bool quiet) {
    fs::path root(dataset_dir);
    std::string manifest_text = read_file(root / "manifest.json");
    rca::forge::DatasetManifest manifest = rca::forge::parse_manifest(manifest_text);

    int violation_count = 0;
    auto complain = [&](const std::string& where, const std::string& what) {
        ++violation_count;
        if (!quiet) std::cout << where << ": " << what << "\n";
    };

    int simple_seen = 0;
    for (const rca::forge::ScenarioRecord& rec : manifest.scenarios) {
        fs::path dir = root / ("scenario_" + rec.id);
        try {
            rca::kg::KnowledgeGraph graph =
                rca::kg::parse_input(read_file(dir / "input.json"));
            rca::kg::Label label = rca::kg::parse_label(read_file(dir / "label.json"));
            for (const rca::kg::Violation& v : rca::kg::validate_graph(graph))
                complain(rec.id, v.invariant + " (" + v.subject + "): " + v.detail);
            for (const rca::kg::Violation& v : rca::kg::validate_scenario(graph, label))
                complain(rec.id, v.invariant + " (" + v.subject + "): " + v.detail);
        } catch (const rca::kg::ParseError& e) {
            complain(rec.id, e.what());
        }
        if (rec.difficulty.is_simple()) ++simple_seen;
    }
    if (simple_seen != manifest.simple_count)
        complain("manifest", "simple_count does not match scenario records");

    if (!quiet)
        std::cout << manifest.scenarios.size() << " scenarios checked, " << violation_count
                  << " violations\n";
    return violation_count == 0 ? kExitOk : kExitData;
}

int cmd_eval(const std::string& dataset_dir, const std::string& solver_command, int k,
             int jobs, double timeout, const std::string& out_path, bool quiet) {
    if (!command_exists(solver_command)) {
        std::cerr << "solver command not found: " << solver_command << "\n";
        return kExitRuntime;
    }
    rca::eval::SolverSpec spec;
    spec.command = rca::eval::split_command(solver_command);
    spec.timeout_seconds = timeout;
    rca::eval::EvalResult result =
        rca::eval::evaluate_dataset(spec, dataset_dir, k, jobs);

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    out << rca::eval::serialize_report(result.report, k);

    if (!quiet) {
        auto line = [&](const char* name, const rca::eval::StratumMetrics& s) {
            std::printf("%-10s count %-5d precision %.4f  recall %.4f  f1 %.4f\n", name,
                        s.count, s.precision, s.recall, s.f1);
        };
        line("simple", result.report.simple);
        line("difficult", result.report.difficult);
        line("mixed", result.report.mixed);
        std::printf("bad cases: %zu\n", result.bad_cases.size());
    }
    return kExitOk;
}

int cmd_loop(const std::string& config_path, bool quiet) {
    std::string config_text = read_file(config_path);
    rca::loop::LoopConfig config = rca::loop::parse_loop_config(
        config_text, fs::absolute(fs::path(config_path)).parent_path());
    rca::loop::RunManifest manifest =
        rca::loop::run_loop(config, rca::digest_hex(config_text));
    if (!quiet) std::cout << rca::loop::render_progress(manifest);
    return kExitOk;
}

int cmd_report(const std::string& manifest_path, const std::string& out_path, bool quiet) {
    rca::loop::RunManifest manifest =
        rca::loop::parse_run_manifest(read_file(manifest_path));
    std::string table = rca::loop::render_progress(manifest);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        out << table;
    }
    if (!quiet) std::cout << table;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic telecom RCA benchmarks, solver evaluation and repair loop"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress the human-readable summary");

    auto* gen = app.add_subcommand("gen", "generate a benchmark dataset");
    std::string gen_config, gen_catalog, gen_out;
    std::uint64_t gen_seed = 0;
    gen->add_option("--config", gen_config, "generator config file")->required();
    gen->add_option("--catalog", gen_catalog, "rule catalog file")->required();
    gen->add_option("--out", gen_out, "output dataset directory")->required();
    auto* seed_opt = gen->add_option("--seed", gen_seed, "override the config seed");

    auto* validate = app.add_subcommand("validate", "check a dataset directory");
    std::string val_dataset;
    validate->add_option("--dataset", val_dataset, "dataset directory")->required();

    auto* eval = app.add_subcommand("eval", "evaluate a solver over a dataset");
    std::string eval_dataset, eval_solver, eval_out;
    int eval_k = 0, eval_jobs = 1;
    double eval_timeout = 30.0;
    eval->add_option("--dataset", eval_dataset, "dataset directory")->required();
    eval->add_option("--solver", eval_solver, "solver command; input path is appended")
        ->required();
    eval->add_option("--k", eval_k, "per-alarm rank cutoff; 0 scores full lists");
    eval->add_option("--jobs", eval_jobs, "parallel solver invocations");
    eval->add_option("--timeout", eval_timeout, "per-scenario solver timeout (seconds)");
    eval->add_option("--out", eval_out, "report output file")->required();

    auto* loop = app.add_subcommand("loop", "run the iterative repair loop");
    std::string loop_config;
    loop->add_option("--config", loop_config, "loop config file")->required();

    auto* report = app.add_subcommand("report", "render a run manifest as a progress table");
    std::string report_manifest, report_out;
    report->add_option("--manifest", report_manifest, "run manifest file")->required();
    report->add_option("--out", report_out, "also write the table to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed())
            return cmd_gen(gen_config, gen_catalog, gen_out,
                           seed_opt->count() ? std::optional<std::uint64_t>(gen_seed)
                                             : std::nullopt,
                           quiet);
        if (validate->parsed()) return cmd_validate(val_dataset, quiet);
        if (eval->parsed())
            return cmd_eval(eval_dataset, eval_solver, eval_k, eval_jobs, eval_timeout,
                            eval_out, quiet);
        if (loop->parsed()) return cmd_loop(loop_config, quiet);
        if (report->parsed()) return cmd_report(report_manifest, report_out, quiet);
    } catch (const rca::kg::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const rca::forge::MixUnreachable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const rca::forge::InvalidGeneratorConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const rca::eval::DatasetInvalid& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
