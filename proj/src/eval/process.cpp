#include "rca/eval/process.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace rca::eval {

namespace {

constexpr std::size_t kMaxCapturedBytes = 64u << 20;

} // namespace

std::vector<std::string> split_command(const std::string& command) {
    std::vector<std::string> out;
    std::string current;
    for (char c : command) {
        if (c == ' ' || c == '\t' || c == '\n') {
            if (!current.empty()) {
                out.push_back(current);
                current.clear();
            }
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) out.push_back(current);
    return out;
}

ProcessResult run_process(const std::vector<std::string>& argv, double timeout_seconds,
                          const std::filesystem::path& working_dir) {
    ProcessResult result;
    if (argv.empty()) {
        result.spawn_failed = true;
        return result;
    }

    int pipe_fds[2];
    if (pipe(pipe_fds) != 0) {
        result.spawn_failed = true;
        return result;
    }

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, pipe_fds[1], STDOUT_FILENO);
    posix_spawn_file_actions_addclose(&actions, pipe_fds[0]);
    posix_spawn_file_actions_addclose(&actions, pipe_fds[1]);
    posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);
#ifdef __GLIBC__
    if (!working_dir.empty())
        posix_spawn_file_actions_addchdir_np(&actions, working_dir.c_str());
#endif

    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);

    pid_t pid = -1;
    int rc = posix_spawnp(&pid, cargv[0], &actions, nullptr, cargv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    close(pipe_fds[1]);
    if (rc != 0) {
        close(pipe_fds[0]);
        result.spawn_failed = true;
        return result;
    }

    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(timeout_seconds));

    char buf[16384];
    bool open = true;
    while (open) {
        auto remaining = deadline - std::chrono::steady_clock::now();
        auto remaining_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(remaining).count();
        if (remaining_ms <= 0) {
            result.timed_out = true;
            kill(pid, SIGKILL);
            break;
        }
        struct pollfd pfd{pipe_fds[0], POLLIN, 0};
        int pr = poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining_ms, 1000)));
        if (pr < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (pr == 0) continue;
        ssize_t n = read(pipe_fds[0], buf, sizeof buf);
        if (n < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (n == 0) {
            open = false;
        } else if (result.stdout_text.size() < kMaxCapturedBytes) {
            result.stdout_text.append(buf, static_cast<std::size_t>(n));
        }
    }
    close(pipe_fds[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (result.timed_out)
        result.exit_code = -1;
    else if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_code = 128 + WTERMSIG(status);
    return result;
}

} // namespace rca::eval
