#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rca::eval {

struct ProcessResult {
    int exit_code = -1;
    bool timed_out = false;
    bool spawn_failed = false;
    std::string stdout_text;
};

// Runs argv[0] with the given arguments, capturing standard output.
// Standard error is discarded. On timeout the process group is killed.
// Thread-safe; each call owns its child.
ProcessResult run_process(const std::vector<std::string>& argv, double timeout_seconds,
                          const std::filesystem::path& working_dir = {});

// Splits a command template on whitespace. No shell quoting; solver
// commands are plain argv lists by contract.
std::vector<std::string> split_command(const std::string& command);

} // namespace rca::eval
