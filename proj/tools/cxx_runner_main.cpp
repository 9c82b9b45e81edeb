// rca-cxx-runner: runs a single-file C++ solver source as if it were a
// script. Sources are compiled once into a content-addressed cache and the
// cached binary is exec'd with the remaining arguments.
//
//   rca-cxx-runner [--cache DIR] [--include DIR]... [--check-only] <source> [args...]
//
// --check-only compiles (populating the cache) without running; compiler
// diagnostics go to stdout so a caller capturing output sees them. Used as
// the repair loop's candidate validator.

#include "rca/util/hash.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fcntl.h>
#include <sys/file.h>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int compile(const fs::path& source, const fs::path& output,
            const std::vector<std::string>& includes, const fs::path& log_path) {
    std::vector<std::string> argv = {"c++", "-std=c++20", "-O1"};
    for (const std::string& dir : includes) argv.push_back("-I" + dir);
    argv.push_back(source.string());
    argv.push_back("-o");
    argv.push_back(output.string());

    pid_t pid = fork();
    if (pid < 0) return 127;
    if (pid == 0) {
        int log_fd = open(log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (log_fd >= 0) {
            dup2(log_fd, STDERR_FILENO);
            dup2(log_fd, STDOUT_FILENO);
            close(log_fd);
        }
        std::vector<char*> cargv;
        for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        _exit(127);
    }
    int status = 0;
    waitpid(pid, &status, 0);
    return WIFEXITED(status) ? WEXITSTATUS(status) : 128;
}

} // namespace

int main(int argc, char** argv) {
    fs::path cache_dir;
    std::vector<std::string> includes;
    bool check_only = false;
    fs::path source;
    std::vector<std::string> run_args;

    int i = 1;
    for (; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--cache" && i + 1 < argc) {
            cache_dir = argv[++i];
        } else if (arg == "--include" && i + 1 < argc) {
            includes.push_back(argv[++i]);
        } else if (arg == "--check-only") {
            check_only = true;
        } else {
            source = arg;
            ++i;
            break;
        }
    }
    for (; i < argc; ++i) run_args.push_back(argv[i]);

    if (source.empty()) {
        std::cerr << "usage: rca-cxx-runner [--cache DIR] [--include DIR]... [--check-only] "
                     "<source> [args...]\n";
        return 64;
    }
    if (!fs::exists(source)) {
        std::cerr << "source not found: " << source << "\n";
        return 66;
    }
    if (cache_dir.empty()) {
        if (const char* env = std::getenv("RCA_CXX_CACHE"))
            cache_dir = env;
        else
            cache_dir = fs::temp_directory_path() /
                        ("rca-cxx-cache-" + std::to_string(::getuid()));
    }
    std::error_code ec;
    fs::create_directories(cache_dir, ec);

    // Cache key covers the source text and the include directories.
    std::string key_material = read_file(source);
    for (const std::string& inc : includes) key_material += "\n-I" + inc;
    std::string key = rca::digest_hex(key_material);
    fs::path exe = cache_dir / ("sol_" + key);
    fs::path log = cache_dir / ("sol_" + key + ".log");

    if (!fs::exists(exe)) {
        // Serialize compiles of the same cache; other processes wait here.
        int lock_fd = open((cache_dir / ".lock").c_str(), O_WRONLY | O_CREAT, 0644);
        if (lock_fd >= 0) flock(lock_fd, LOCK_EX);
        if (!fs::exists(exe)) {
            fs::path tmp = cache_dir / ("sol_" + key + ".tmp." + std::to_string(::getpid()));
            int rc = compile(source, tmp, includes, log);
            if (rc == 0) {
                fs::rename(tmp, exe, ec);
            } else {
                fs::remove(tmp, ec);
                if (lock_fd >= 0) {
                    flock(lock_fd, LOCK_UN);
                    close(lock_fd);
                }
                std::string diagnostics = read_file(log);
                (check_only ? std::cout : std::cerr)
                    << "compilation failed:\n" << diagnostics;
                return 1;
            }
        }
        if (lock_fd >= 0) {
            flock(lock_fd, LOCK_UN);
            close(lock_fd);
        }
    }

    if (check_only) return 0;

    std::vector<char*> cargv;
    std::string exe_str = exe.string();
    cargv.push_back(const_cast<char*>(exe_str.c_str()));
    for (const std::string& a : run_args) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execv(cargv[0], cargv.data());
    std::cerr << "failed to exec " << exe_str << "\n";
    return 126;
}
