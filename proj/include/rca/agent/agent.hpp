#pragma once

#include "rca/analysis/failure.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rca::agent {

struct RemoteBackend {
    std::string endpoint_url; // http(s)://host[:port]/path
    std::string model_name;
    int max_tokens = 8192;
    double temperature = 0.2;
    std::string api_key_env = "RCA_API_KEY";
    int retry_base_ms = 500; // exponential backoff base; injectable for tests
};

struct MockBackend {
    std::string script_path; // JSON table of scripted responses
};

struct AgentConfig {
    std::variant<RemoteBackend, MockBackend> backend = MockBackend{};
    std::size_t prompt_budget_chars = 65536; // must be >= 4096
    std::vector<std::string> exploratory_questions; // empty -> per-category defaults
};

struct RepairPrompt {
    std::string system_preamble;
    std::string body;

    std::size_t total_chars() const { return system_preamble.size() + body.size(); }
};

struct BudgetInfeasible : std::runtime_error {
    explicit BudgetInfeasible(const std::string& what) : std::runtime_error(what) {}
};

struct PromptContext {
    int round = 0;
    double best_f1 = 0.0;
    int scenario_count = 0;
};

// Assembles the repair prompt in fixed section order: task framing, current
// score, failure narrative, representatives with contrasts, current source,
// exploratory questions, output-format instruction. When over budget,
// sections are trimmed in reverse priority (contrasts, then representative
// raw outputs, then the middle of the source); the narrative and questions
// are never cut. Throws BudgetInfeasible when even the mandatory sections
// do not fit.
RepairPrompt build_prompt(const analysis::FailureReport& report,
                          const std::string& current_source, const AgentConfig& config,
                          const PromptContext& context);

struct BackendUnavailable : std::runtime_error {
    explicit BackendUnavailable(const std::string& what) : std::runtime_error(what) {}
};

// Remote: one chat-completion request, up to 3 attempts with exponential
// backoff on transport failures and 5xx/429 responses. Mock: looks up
// (round, primary category) in the script table; a miss yields an empty
// response so the round gets rejected downstream.
std::string query_backend(const RepairPrompt& prompt, const AgentConfig& config, int round,
                          analysis::FailureCategory primary);

// Curated per-category questions used when the config supplies none.
std::vector<std::string> default_questions(analysis::FailureCategory primary);

} // namespace rca::agent
