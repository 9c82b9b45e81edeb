#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace rca::agent {

struct CandidateSource {
    std::string text;
    std::string source_hash;
};

struct SanitizeFailure : std::runtime_error {
    explicit SanitizeFailure(const std::string& what) : std::runtime_error(what) {}
};

// Extracts solver source from a model response: the longest fenced code
// block wins; fenceless responses pass through whole unless the first
// non-blank line reads like prose. Trailing whitespace is stripped per
// line. Idempotent; never grows the text. Throws SanitizeFailure when no
// plausible source remains.
CandidateSource sanitize(const std::string& response);

struct ValidationFailure : std::runtime_error {
    explicit ValidationFailure(const std::string& what, std::string output = {})
        : std::runtime_error(what), validator_output(std::move(output)) {}

    std::string validator_output;
};

// With a validator command the candidate is written to a scratch file and
// the command must exit 0 on it. Without one, structural checks only:
// nonempty, no residual fence markers, balanced brackets.
void validate_candidate(const CandidateSource& candidate,
                        const std::optional<std::string>& validator_command);

} // namespace rca::agent
