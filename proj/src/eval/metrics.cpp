#include "rca/eval/metrics.hpp"

#include "json.hpp"

#include <algorithm>
#include <set>

namespace rca::eval {

using json = nlohmann::json;

const std::vector<kg::RootCause>* Prediction::find(const std::string& alarm_id) const {
    for (const auto& [id, causes] : entries)
        if (id == alarm_id) return &causes;
    return nullptr;
}

namespace {

Prediction malformed_prediction() {
    Prediction p;
    p.malformed = true;
    return p;
}

bool keys_exactly(const json& obj, std::initializer_list<const char*> keys) {
    if (!obj.is_object() || obj.size() != keys.size()) return false;
    for (const char* key : keys)
        if (!obj.contains(key)) return false;
    return true;
}

} // namespace

Prediction parse_prediction(const std::string& raw_output) {
    json doc = json::parse(raw_output, nullptr, false);
    if (doc.is_discarded()) return malformed_prediction();
    if (!keys_exactly(doc, {"schema_version", "scenario_id", "alarms"}))
        return malformed_prediction();
    if (!doc["schema_version"].is_string() || doc["schema_version"] != "1")
        return malformed_prediction();
    if (!doc["scenario_id"].is_string() || !doc["alarms"].is_array())
        return malformed_prediction();

    Prediction prediction;
    prediction.scenario_id = doc["scenario_id"].get<std::string>();
    for (const json& entry : doc["alarms"]) {
        if (!keys_exactly(entry, {"alarm_id", "root_causes"})) return malformed_prediction();
        if (!entry["alarm_id"].is_string() || !entry["root_causes"].is_array())
            return malformed_prediction();
        std::string alarm_id = entry["alarm_id"].get<std::string>();
        std::vector<kg::RootCause> causes;
        std::set<std::pair<std::string, std::string>> seen;
        for (const json& rc : entry["root_causes"]) {
            if (!keys_exactly(rc, {"cause_description", "equipment_id", "solution"}))
                return malformed_prediction();
            if (!rc["cause_description"].is_string() || !rc["equipment_id"].is_string() ||
                !rc["solution"].is_string())
                return malformed_prediction();
            kg::RootCause cause{rc["cause_description"].get<std::string>(),
                                rc["equipment_id"].get<std::string>(),
                                rc["solution"].get<std::string>()};
            if (!seen.emplace(cause.cause_description, cause.equipment_id).second)
                continue; // duplicate pair; first rank wins
            causes.push_back(std::move(cause));
        }
        prediction.entries.emplace_back(std::move(alarm_id), std::move(causes));
    }
    return prediction;
}

Prediction truncate_at_k(const Prediction& prediction, int k) {
    Prediction out = prediction;
    for (auto& [alarm_id, causes] : out.entries)
        if (static_cast<int>(causes.size()) > k)
            causes.resize(static_cast<std::size_t>(k));
    return out;
}

std::string normalize_description(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            if (!out.empty()) pending_space = true;
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(c);
        }
    }
    return out;
}

ScenarioMetrics score_scenario(const Prediction& prediction, const kg::Label& label, int k) {
    const Prediction& scored = k >= 1 ? truncate_at_k(prediction, k) : prediction;

    using Triple = std::tuple<std::string, std::string, std::string>;
    std::set<Triple> predicted, truth;
    for (const auto& [alarm_id, causes] : label.entries)
        for (const kg::RootCause& rc : causes)
            truth.emplace(alarm_id, normalize_description(rc.cause_description),
                          rc.equipment_id);
    // Only predictions for the labeled target alarms enter P; entries for
    // unknown alarm ids surface in bad-case reports instead.
    for (const auto& [alarm_id, causes] : scored.entries) {
        if (!label.find(alarm_id)) continue;
        for (const kg::RootCause& rc : causes)
            predicted.emplace(alarm_id, normalize_description(rc.cause_description),
                              rc.equipment_id);
    }

    std::size_t hits = 0;
    for (const Triple& t : predicted)
        if (truth.contains(t)) ++hits;

    ScenarioMetrics metrics;
    metrics.scenario_id = label.scenario_id;
    if (predicted.empty() && truth.empty()) {
        metrics.precision = metrics.recall = metrics.f1 = 1.0;
        return metrics;
    }
    metrics.precision = predicted.empty()
                            ? 0.0
                            : static_cast<double>(hits) / static_cast<double>(predicted.size());
    metrics.recall =
        truth.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(truth.size());
    double denom = metrics.precision + metrics.recall;
    metrics.f1 = denom == 0.0 ? 0.0 : 2.0 * metrics.precision * metrics.recall / denom;
    return metrics;
}

AggregateReport aggregate(std::vector<ScenarioMetrics> metrics) {
    std::sort(metrics.begin(), metrics.end(),
              [](const ScenarioMetrics& a, const ScenarioMetrics& b) {
                  return a.scenario_id < b.scenario_id;
              });

    AggregateReport report;
    auto fold = [](StratumMetrics& stratum, const ScenarioMetrics& m) {
        ++stratum.count;
        stratum.precision += m.precision;
        stratum.recall += m.recall;
        stratum.f1 += m.f1;
    };
    for (const ScenarioMetrics& m : metrics) {
        fold(report.mixed, m);
        fold(m.difficulty.is_simple() ? report.simple : report.difficult, m);
    }
    auto finish = [](StratumMetrics& stratum) {
        if (stratum.count == 0) return;
        stratum.precision /= stratum.count;
        stratum.recall /= stratum.count;
        stratum.f1 /= stratum.count;
    };
    finish(report.simple);
    finish(report.difficult);
    finish(report.mixed);
    report.scenarios = std::move(metrics);
    return report;
}

} // namespace rca::eval
