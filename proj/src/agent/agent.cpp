#include "rca/agent/agent.hpp"

#include "rca/kg/serialize.hpp"

#ifdef RCA_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"
#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace rca::agent {

using json = nlohmann::json;

std::vector<std::string> default_questions(analysis::FailureCategory primary) {
    std::vector<std::string> questions = {
        "Which structural signal in the input graph separates the labeled cause from the "
        "other candidates in the representative cases?",
        "Does the earliest alarm's equipment narrow down which candidate is plausible?",
        "Would the change keep every currently passing scenario passing?",
    };
    switch (primary) {
    case analysis::FailureCategory::ExtraRootCause:
        questions.push_back("Can candidates implying a wider alarm footprint than observed be "
                            "eliminated before emitting?");
        break;
    case analysis::FailureCategory::MissingRootCause:
        questions.push_back("Is a filter discarding the labeled cause along with the "
                            "distractors?");
        break;
    case analysis::FailureCategory::WrongEquipment:
        questions.push_back("Is the equipment id taken from the right node, and is it the "
                            "ldn rather than the node id?");
        break;
    case analysis::FailureCategory::WrongCauseDescription:
        questions.push_back("When several candidates remain tied, what order does the code "
                            "pick, and does it match the representatives?");
        break;
    case analysis::FailureCategory::MalformedOutput:
        questions.push_back("Does the program print exactly one JSON document and nothing "
                            "else on standard output?");
        break;
    case analysis::FailureCategory::SolverError:
        questions.push_back("What input shape makes the program crash or hang in the "
                            "representative cases?");
        break;
    }
    return questions;
}

namespace {

constexpr const char* kPreamble =
    "You are an expert network fault-diagnosis engineer. You maintain a command-line "
    "program that reads a fault-scenario graph document and prints root-cause "
    "predictions as JSON.";

std::string render_representative(const analysis::Representative& rep, bool with_contrast,
                                  bool with_raw_output) {
    std::ostringstream out;
    out << "Scenario " << rep.bad.scenario_id << " (f1 ";
    char f1[16];
    std::snprintf(f1, sizeof f1, "%.4f", rep.bad.f1);
    out << f1 << ")\n";
    out << "  categories:";
    for (const std::string& c : rep.bad.categories) out << " " << c;
    out << "\n  candidate causes offered by the input:\n";
    for (const std::string& c : rep.bad.candidate_causes) out << "    - " << c << "\n";
    out << "  expected:\n";
    for (const std::string& t : rep.bad.expected) out << "    - " << t << "\n";
    out << "  predicted:\n";
    if (rep.bad.predicted.empty()) out << "    (nothing)\n";
    for (const std::string& t : rep.bad.predicted) out << "    - " << t << "\n";
    if (with_raw_output && !rep.bad.raw_output_excerpt.empty())
        out << "  raw output excerpt:\n" << rep.bad.raw_output_excerpt << "\n";
    if (with_contrast && rep.contrast_scenario_id)
        out << "  contrast: scenario " << *rep.contrast_scenario_id
            << " shares the same true cause and passes.\n";
    return out.str();
}

std::string assemble_body(const analysis::FailureReport& report,
                          const std::string& current_source,
                          const std::vector<std::string>& questions,
                          const PromptContext& context, bool with_contrasts,
                          bool with_raw_outputs, std::size_t source_keep) {
    std::ostringstream body;
    body << "Your task: revise the diagnostic program below so that its predictions "
            "improve on the benchmark. Reply with the complete revised program.\n\n";

    char score[16];
    std::snprintf(score, sizeof score, "%.4f", context.best_f1);
    body << "== Current score ==\nRound " << context.round << ". Best mixed F1 so far: "
         << score << " over " << context.scenario_count << " scenarios.\n\n";

    body << "== Failure analysis ==\n" << report.narrative << "\n";

    body << "== Representative failing cases ==\n";
    for (const analysis::Representative& rep : report.representatives) {
        body << render_representative(rep, with_contrasts, with_raw_outputs);
        body << "\n";
        if (!with_raw_outputs && !with_contrasts)
            break; // deepest truncation keeps only the mandatory first digest
    }

    body << "== Current program ==\n```\n";
    if (source_keep >= current_source.size()) {
        body << current_source;
    } else {
        // Middle-out cut: keep the head and tail halves of the allowance.
        std::size_t head = source_keep / 2;
        std::size_t tail = source_keep - head;
        body << current_source.substr(0, head) << "\n/* ... elided ... */\n"
             << current_source.substr(current_source.size() - tail);
    }
    body << "\n```\n\n";

    body << "== Questions to consider ==\n";
    for (const std::string& q : questions) body << "- " << q << "\n";
    body << "\n== Output format ==\nReply with a single fenced code block containing the "
            "complete revised program. No other code blocks.\n";
    return body.str();
}

} // namespace

RepairPrompt build_prompt(const analysis::FailureReport& report,
                          const std::string& current_source, const AgentConfig& config,
                          const PromptContext& context) {
    if (config.prompt_budget_chars < 4096)
        throw BudgetInfeasible("prompt budget must be at least 4096 characters");
    if (report.representatives.empty())
        throw BudgetInfeasible("failure report carries no representative cases");

    std::vector<std::string> questions = config.exploratory_questions.empty()
                                             ? default_questions(report.primary)
                                             : config.exploratory_questions;

    RepairPrompt prompt;
    prompt.system_preamble = kPreamble;
    std::size_t budget = config.prompt_budget_chars;

    // Trim in reverse priority until the prompt fits.
    struct Attempt {
        bool contrasts, raw_outputs;
        bool full_source;
    };
    static const Attempt ladder[] = {
        {true, true, true},
        {false, true, true},
        {false, false, true},
        {false, false, false},
    };
    for (const Attempt& attempt : ladder) {
        std::size_t source_keep = current_source.size();
        if (!attempt.full_source) {
            std::string probe = assemble_body(report, current_source, questions, context,
                                              attempt.contrasts, attempt.raw_outputs, 0);
            std::size_t fixed = prompt.system_preamble.size() + probe.size();
            if (fixed + 64 > budget) continue; // not even a sliver of source fits
            source_keep = budget - fixed - 64;
        }
        prompt.body = assemble_body(report, current_source, questions, context,
                                    attempt.contrasts, attempt.raw_outputs, source_keep);
        if (prompt.total_chars() <= budget) return prompt;
    }
    throw BudgetInfeasible("mandatory prompt sections exceed the budget of " +
                           std::to_string(budget) + " characters");
}

namespace {

struct ParsedUrl {
    bool https = false;
    std::string host_port;
    std::string path;
};

ParsedUrl parse_url(const std::string& url) {
    ParsedUrl out;
    std::string rest;
    if (url.rfind("https://", 0) == 0) {
        out.https = true;
        rest = url.substr(8);
    } else if (url.rfind("http://", 0) == 0) {
        rest = url.substr(7);
    } else {
        throw BackendUnavailable("unsupported endpoint url: " + url);
    }
    std::size_t slash = rest.find('/');
    out.host_port = slash == std::string::npos ? rest : rest.substr(0, slash);
    out.path = slash == std::string::npos ? "/" : rest.substr(slash);
    return out;
}

std::string query_remote(const RepairPrompt& prompt, const RemoteBackend& backend) {
    ParsedUrl url = parse_url(backend.endpoint_url);

    json request;
    request["model"] = backend.model_name;
    request["messages"] = json::array({
        json{{"role", "system"}, {"content", prompt.system_preamble}},
        json{{"role", "user"}, {"content", prompt.body}},
    });
    request["max_tokens"] = backend.max_tokens;
    request["temperature"] = backend.temperature;
    std::string payload = request.dump();

    httplib::Headers headers;
    if (const char* key = std::getenv(backend.api_key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    std::string last_error;
    for (int attempt = 0; attempt < 3; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(backend.retry_base_ms * (1 << (attempt - 1))));

        httplib::Result result;
#ifdef RCA_HAVE_OPENSSL
        if (url.https) {
            httplib::SSLClient client(url.host_port);
            client.set_read_timeout(120, 0);
            result = client.Post(url.path, headers, payload, "application/json");
        } else
#endif
        {
            if (url.https) throw BackendUnavailable("https endpoints need an SSL build");
            httplib::Client client(url.host_port);
            client.set_read_timeout(120, 0);
            result = client.Post(url.path, headers, payload, "application/json");
        }

        if (!result) {
            last_error = "transport error: " + httplib::to_string(result.error());
            continue;
        }
        if (result->status >= 500 || result->status == 429) {
            last_error = "http status " + std::to_string(result->status);
            continue;
        }
        if (result->status != 200)
            throw BackendUnavailable("backend rejected the request with http status " +
                                     std::to_string(result->status));
        json response = json::parse(result->body, nullptr, false);
        if (response.is_discarded())
            throw BackendUnavailable("backend returned a non-JSON body");
        try {
            return response.at("choices").at(0).at("message").at("content")
                .get<std::string>();
        } catch (const json::exception&) {
            throw BackendUnavailable("backend response is missing choices[0].message.content");
        }
    }
    throw BackendUnavailable("backend unreachable after 3 attempts (" + last_error + ")");
}

std::string query_mock(const MockBackend& backend, int round,
                       analysis::FailureCategory primary) {
    namespace fs = std::filesystem;
    std::ifstream in(backend.script_path, std::ios::binary);
    if (!in) throw BackendUnavailable("mock script not found: " + backend.script_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    json doc = json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded() || !doc.is_array())
        throw BackendUnavailable("mock script must be a JSON array");

    for (const json& entry : doc) {
        if (!entry.is_object()) continue;
        if (entry.value("round", -1) != round) continue;
        std::string category = entry.value("primary_category", "");
        if (category != "*" && category != to_string(primary)) continue;
        std::string file = entry.value("response_file", "");
        fs::path path = fs::path(backend.script_path).parent_path() / file;
        std::ifstream response(path, std::ios::binary);
        if (!response)
            throw BackendUnavailable("mock response file not found: " + path.string());
        std::ostringstream rbuf;
        rbuf << response.rdbuf();
        return rbuf.str();
    }
    // Scripted miss: an empty response; the round will be rejected.
    return "";
}

} // namespace

std::string query_backend(const RepairPrompt& prompt, const AgentConfig& config, int round,
                          analysis::FailureCategory primary) {
    if (const auto* mock = std::get_if<MockBackend>(&config.backend))
        return query_mock(*mock, round, primary);
    return query_remote(prompt, std::get<RemoteBackend>(config.backend));
}

} // namespace rca::agent
