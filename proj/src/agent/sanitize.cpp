#include "rca/agent/sanitize.hpp"

#include "rca/eval/process.hpp"
#include "rca/util/hash.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <vector>

#include <unistd.h>

namespace rca::agent {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    lines.push_back(current);
    return lines;
}

bool is_fence_line(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (line.compare(i, 3, "```") != 0) return false;
    // Optional language tag after the fence; a closing fence has nothing.
    return true;
}

std::string strip_trailing_ws(const std::string& text) {
    std::vector<std::string> lines = split_lines(text);
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        out += line;
        if (i + 1 < lines.size()) out += '\n';
    }
    return out;
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Heuristic prose detector for fenceless responses. Code-shaped punctuation
// rescues a line; greeting openers and sentence-final punctuation without
// any code shape condemn it.
bool looks_like_prose(const std::string& first_line) {
    std::string lowered = lowercase(first_line);
    for (const char* greeting :
         {"sure", "here is", "here's", "hi ", "hi,", "hello", "thanks", "thank you",
          "certainly", "of course", "okay", "ok,", "great question", "i have", "i've",
          "below is", "this is the", "the following"})
        if (lowered.rfind(greeting, 0) == 0) return true;

    bool has_code_shape = first_line.find_first_of(";{}=#<>()[]") != std::string::npos ||
                          first_line.rfind("//", 0) == 0 || first_line.rfind("/*", 0) == 0;
    if (has_code_shape) return false;
    if (first_line.empty()) return false;
    char last = first_line.back();
    return last == '.' || last == '!' || last == '?' || last == ':';
}

} // namespace

CandidateSource sanitize(const std::string& response) {
    std::vector<std::string> lines = split_lines(response);

    // Collect fenced blocks; the longest one is taken as the source.
    struct Block {
        std::size_t begin, end; // line range, exclusive of fences
        std::size_t chars;
    };
    std::vector<Block> blocks;
    std::optional<std::size_t> open_at;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!is_fence_line(lines[i])) continue;
        if (!open_at) {
            open_at = i;
        } else {
            std::size_t chars = 0;
            for (std::size_t j = *open_at + 1; j < i; ++j) chars += lines[j].size() + 1;
            blocks.push_back({*open_at + 1, i, chars});
            open_at.reset();
        }
    }

    std::string extracted;
    if (!blocks.empty()) {
        const Block& best = *std::max_element(
            blocks.begin(), blocks.end(),
            [](const Block& a, const Block& b) { return a.chars < b.chars; });
        for (std::size_t j = best.begin; j < best.end; ++j) {
            extracted += lines[j];
            if (j + 1 < best.end) extracted += '\n';
        }
    } else {
        std::string first_non_blank;
        for (const std::string& line : lines) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                first_non_blank = line;
                break;
            }
        }
        if (first_non_blank.empty())
            throw SanitizeFailure("response is empty");
        if (looks_like_prose(first_non_blank))
            throw SanitizeFailure("response has no code block and reads like prose");
        extracted = response;
    }

    std::string cleaned = strip_trailing_ws(extracted);
    if (cleaned.find_first_not_of(" \t\n") == std::string::npos)
        throw SanitizeFailure("extracted source is empty");
    return {cleaned, digest_hex(cleaned)};
}

void validate_candidate(const CandidateSource& candidate,
                        const std::optional<std::string>& validator_command) {
    if (candidate.text.find_first_not_of(" \t\n") == std::string::npos)
        throw ValidationFailure("candidate is empty");

    if (!validator_command) {
        for (const std::string& line : split_lines(candidate.text)) {
            std::size_t i = line.find_first_not_of(" \t");
            if (i != std::string::npos && line.compare(i, 3, "```") == 0)
                throw ValidationFailure("candidate contains a residual fence marker");
        }
        long balance_paren = 0, balance_brace = 0, balance_bracket = 0;
        bool in_string = false, in_char = false, escaped = false;
        for (char c : candidate.text) {
            if (escaped) {
                escaped = false;
                continue;
            }
            if (c == '\\') {
                escaped = true;
                continue;
            }
            if (in_string) {
                if (c == '"') in_string = false;
                continue;
            }
            if (in_char) {
                if (c == '\'') in_char = false;
                continue;
            }
            switch (c) {
            case '"': in_string = true; break;
            case '\'': in_char = true; break;
            case '(': ++balance_paren; break;
            case ')': --balance_paren; break;
            case '{': ++balance_brace; break;
            case '}': --balance_brace; break;
            case '[': ++balance_bracket; break;
            case ']': --balance_bracket; break;
            default: break;
            }
        }
        if (balance_paren != 0 || balance_brace != 0 || balance_bracket != 0)
            throw ValidationFailure("candidate has unbalanced brackets");
        return;
    }

    namespace fs = std::filesystem;
    fs::path scratch = fs::temp_directory_path() /
                       ("rca-candidate-" + std::to_string(::getpid()) + "-" +
                        candidate.source_hash + ".src");
    {
        std::ofstream out(scratch, std::ios::binary | std::ios::trunc);
        out << candidate.text;
    }
    std::vector<std::string> argv = eval::split_command(*validator_command);
    argv.push_back(scratch.string());
    eval::ProcessResult result = eval::run_process(argv, 120.0);
    std::error_code ec;
    fs::remove(scratch, ec);
    if (result.spawn_failed)
        throw ValidationFailure("validator command could not be spawned");
    if (result.timed_out) throw ValidationFailure("validator timed out");
    if (result.exit_code != 0)
        throw ValidationFailure("validator exited " + std::to_string(result.exit_code),
                                result.stdout_text);
}

} // namespace rca::agent
