#pragma once

#include "rca/eval/harness.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rca::analysis {

enum class FailureCategory {
    MissingRootCause,
    ExtraRootCause,
    WrongEquipment,
    WrongCauseDescription,
    MalformedOutput,
    SolverError,
};

const char* to_string(FailureCategory category);
std::optional<FailureCategory> failure_category_from(const std::string& name);

// Per-alarm set differences between truth and prediction, refined to
// single-field mismatches. A predicted triple matching a missing truth
// triple on cause_description (but not equipment) collapses the pair into
// WrongEquipment; the equipment-matching analogue collapses into
// WrongCauseDescription. Harness-level failures (malformed output, solver
// error) suppress the set-difference categories.
std::set<FailureCategory> categorize(const eval::BadCase& bad_case);

struct FailureHistogram {
    std::map<FailureCategory, int> counts;
    int total_bad_cases = 0;
};

FailureHistogram build_histogram(const std::vector<eval::BadCase>& bad_cases);

struct NoBadCases : std::runtime_error {
    NoBadCases() : std::runtime_error("no bad cases to analyze") {}
};

// Maximal count; ties broken by a fixed priority that puts output-validity
// failures first.
FailureCategory select_primary(const FailureHistogram& histogram);

struct CaseDigest {
    std::string scenario_id;
    double f1 = 0.0;
    std::vector<std::string> categories;
    std::vector<std::string> candidate_causes;
    std::vector<std::string> expected;  // rendered truth triples
    std::vector<std::string> predicted; // rendered predicted triples
    std::string raw_output_excerpt;
};

struct Representative {
    CaseDigest bad;
    std::optional<std::string> contrast_scenario_id; // passing case, same true cause
};

struct FailureReport {
    FailureHistogram histogram;
    FailureCategory primary = FailureCategory::MissingRootCause;
    std::vector<Representative> representatives;
    std::string narrative;
};

struct AnalyzerConfig {
    int max_representatives = 3;
    int raw_output_excerpt_chars = 400;
};

// Builds the contrastive report: the first R bad cases carrying the primary
// category (ordered by ascending f1, then scenario id), each paired with a
// passing case that shares the ground-truth cause when one exists.
FailureReport build_report(std::vector<eval::BadCase> bad_cases,
                           const std::vector<eval::PassingCase>& passing_cases,
                           const AnalyzerConfig& config = {});

std::string serialize_failure_report(const FailureReport& report);

// One-line repair hypothesis per category, embedded in the narrative.
const char* category_hypothesis(FailureCategory category);

} // namespace rca::analysis
