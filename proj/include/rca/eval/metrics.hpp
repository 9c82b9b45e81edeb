#pragma once

#include "rca/kg/graph.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rca::eval {

// A solver's ranked root-cause lists, one per alarm id. Lists may be empty;
// entries keyed by alarm ids outside the scenario's targets never score but
// are retained for error reporting.
struct Prediction {
    std::string scenario_id;
    std::vector<std::pair<std::string, std::vector<kg::RootCause>>> entries;
    bool malformed = false; // set when the raw output failed the strict parse

    const std::vector<kg::RootCause>* find(const std::string& alarm_id) const;
    bool operator==(const Prediction&) const = default;
};

// Strict parse of the prediction document (same shape as a label, empty
// cause lists allowed). Any deviation -- prose wrapping, bad schema,
// unknown fields -- produces an empty Prediction flagged `malformed`.
// Duplicate (cause_description, equipment_id) pairs under one alarm are
// dropped, keeping the first-ranked occurrence.
Prediction parse_prediction(const std::string& raw_output);

// Cuts each alarm's ranked list to its first k entries (k >= 1).
Prediction truncate_at_k(const Prediction& prediction, int k);

struct ScenarioMetrics {
    std::string scenario_id;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    kg::Difficulty difficulty;
};

// Exact tuple matching per the protocol: a predicted cause counts iff
// (alarm id, normalized cause_description, equipment_id) appears in the
// truth set. Normalization trims and collapses whitespace, case-sensitive.
// k >= 1 truncates each alarm's list first; k == 0 scores the full lists.
// Conventions: |P| = 0 with |T| > 0 scores precision 0; both empty scores 1.
ScenarioMetrics score_scenario(const Prediction& prediction, const kg::Label& label, int k);

// Whitespace normalization used by the matcher.
std::string normalize_description(const std::string& text);

struct StratumMetrics {
    int count = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Unweighted per-scenario means (macro average) per difficulty stratum.
struct AggregateReport {
    StratumMetrics simple;
    StratumMetrics difficult;
    StratumMetrics mixed;
    std::vector<ScenarioMetrics> scenarios; // sorted by scenario id
};

AggregateReport aggregate(std::vector<ScenarioMetrics> metrics);

} // namespace rca::eval
