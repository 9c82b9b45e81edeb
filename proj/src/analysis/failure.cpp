#include "rca/analysis/failure.hpp"

#include "json.hpp"

#include <algorithm>
#include <sstream>

namespace rca::analysis {

using ordered_json = nlohmann::ordered_json;

const char* to_string(FailureCategory category) {
    switch (category) {
    case FailureCategory::MissingRootCause: return "MissingRootCause";
    case FailureCategory::ExtraRootCause: return "ExtraRootCause";
    case FailureCategory::WrongEquipment: return "WrongEquipment";
    case FailureCategory::WrongCauseDescription: return "WrongCauseDescription";
    case FailureCategory::MalformedOutput: return "MalformedOutput";
    case FailureCategory::SolverError: return "SolverError";
    }
    return "MissingRootCause";
}

std::optional<FailureCategory> failure_category_from(const std::string& name) {
    for (FailureCategory c :
         {FailureCategory::MissingRootCause, FailureCategory::ExtraRootCause,
          FailureCategory::WrongEquipment, FailureCategory::WrongCauseDescription,
          FailureCategory::MalformedOutput, FailureCategory::SolverError})
        if (name == to_string(c)) return c;
    return std::nullopt;
}

const char* category_hypothesis(FailureCategory category) {
    switch (category) {
    case FailureCategory::MissingRootCause:
        return "the solver drops true causes while filtering candidates";
    case FailureCategory::ExtraRootCause:
        return "the solver fails to eliminate distractor candidates";
    case FailureCategory::WrongEquipment:
        return "the solver misattributes the originating equipment";
    case FailureCategory::WrongCauseDescription:
        return "the solver picks a plausible but wrong cause among the candidates";
    case FailureCategory::MalformedOutput:
        return "the solver's output does not parse as a prediction document";
    case FailureCategory::SolverError:
        return "the solver crashes, times out or emits nothing";
    }
    return "";
}

std::set<FailureCategory> categorize(const eval::BadCase& bad_case) {
    std::set<FailureCategory> out;
    if (bad_case.malformed_output) out.insert(FailureCategory::MalformedOutput);
    if (bad_case.solver_failure) out.insert(FailureCategory::SolverError);
    if (!out.empty()) return out; // output-validity failures preempt set analysis

    using Triple = std::tuple<std::string, std::string, std::string>;
    std::set<Triple> truth, predicted;
    for (const auto& [alarm_id, causes] : bad_case.expected.entries)
        for (const kg::RootCause& rc : causes)
            truth.emplace(alarm_id, eval::normalize_description(rc.cause_description),
                          rc.equipment_id);
    for (const auto& [alarm_id, causes] : bad_case.predicted.entries) {
        if (!bad_case.expected.find(alarm_id)) continue;
        for (const kg::RootCause& rc : causes)
            predicted.emplace(alarm_id, eval::normalize_description(rc.cause_description),
                              rc.equipment_id);
    }

    std::set<Triple> missing, extra;
    for (const Triple& t : truth)
        if (!predicted.contains(t)) missing.insert(t);
    for (const Triple& p : predicted)
        if (!truth.contains(p)) extra.insert(p);

    // Refinement: a missing/extra pair differing in exactly one field is a
    // sharper signal than the raw set difference.
    std::set<Triple> consumed_extra;
    for (auto it = missing.begin(); it != missing.end();) {
        const auto& [alarm, desc, equip] = *it;
        bool refined = false;
        for (const Triple& p : extra) {
            if (consumed_extra.contains(p)) continue;
            const auto& [palarm, pdesc, pequip] = p;
            if (palarm != alarm) continue;
            if (pdesc == desc && pequip != equip) {
                out.insert(FailureCategory::WrongEquipment);
                consumed_extra.insert(p);
                refined = true;
                break;
            }
            if (pequip == equip && pdesc != desc) {
                out.insert(FailureCategory::WrongCauseDescription);
                consumed_extra.insert(p);
                refined = true;
                break;
            }
        }
        if (refined)
            it = missing.erase(it);
        else
            ++it;
    }
    for (const Triple& p : consumed_extra) extra.erase(p);

    if (!missing.empty()) out.insert(FailureCategory::MissingRootCause);
    if (!extra.empty()) out.insert(FailureCategory::ExtraRootCause);
    return out;
}

FailureHistogram build_histogram(const std::vector<eval::BadCase>& bad_cases) {
    FailureHistogram histogram;
    histogram.total_bad_cases = static_cast<int>(bad_cases.size());
    for (const eval::BadCase& bc : bad_cases)
        for (FailureCategory c : categorize(bc)) ++histogram.counts[c];
    return histogram;
}

FailureCategory select_primary(const FailureHistogram& histogram) {
    if (histogram.total_bad_cases < 1) throw NoBadCases();
    // Tie-break order: output-validity failures are unfixable-around, so
    // they win ties.
    static const FailureCategory priority[] = {
        FailureCategory::MalformedOutput,       FailureCategory::SolverError,
        FailureCategory::ExtraRootCause,        FailureCategory::MissingRootCause,
        FailureCategory::WrongEquipment,        FailureCategory::WrongCauseDescription,
    };
    FailureCategory best = FailureCategory::MissingRootCause;
    int best_count = -1;
    for (FailureCategory c : priority) {
        auto it = histogram.counts.find(c);
        int count = it == histogram.counts.end() ? 0 : it->second;
        if (count > best_count) {
            best = c;
            best_count = count;
        }
    }
    if (best_count <= 0) throw NoBadCases();
    return best;
}

namespace {

std::string render_triple(const std::string& alarm, const kg::RootCause& rc) {
    return alarm + ": (" + rc.cause_description + ", " + rc.equipment_id + ")";
}

CaseDigest make_digest(const eval::BadCase& bc, const std::set<FailureCategory>& categories,
                       int excerpt_chars) {
    CaseDigest digest;
    digest.scenario_id = bc.scenario_id;
    digest.f1 = bc.metrics.f1;
    for (FailureCategory c : categories) digest.categories.push_back(to_string(c));
    digest.candidate_causes = bc.candidate_causes;
    for (const auto& [alarm_id, causes] : bc.expected.entries)
        for (const kg::RootCause& rc : causes)
            digest.expected.push_back(render_triple(alarm_id, rc));
    for (const auto& [alarm_id, causes] : bc.predicted.entries)
        for (const kg::RootCause& rc : causes)
            digest.predicted.push_back(render_triple(alarm_id, rc));
    std::sort(digest.expected.begin(), digest.expected.end());
    std::sort(digest.predicted.begin(), digest.predicted.end());
    digest.raw_output_excerpt = bc.raw_output.substr(
        0, static_cast<std::size_t>(std::max(0, excerpt_chars)));
    return digest;
}

} // namespace

FailureReport build_report(std::vector<eval::BadCase> bad_cases,
                           const std::vector<eval::PassingCase>& passing_cases,
                           const AnalyzerConfig& config) {
    if (bad_cases.empty()) throw NoBadCases();

    FailureReport report;
    std::vector<std::set<FailureCategory>> categories(bad_cases.size());
    for (std::size_t i = 0; i < bad_cases.size(); ++i) {
        categories[i] = categorize(bad_cases[i]);
        bad_cases[i].failure_kinds.clear();
        for (FailureCategory c : categories[i])
            bad_cases[i].failure_kinds.push_back(to_string(c));
    }
    report.histogram = build_histogram(bad_cases);
    report.primary = select_primary(report.histogram);

    std::vector<std::size_t> order(bad_cases.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(bad_cases[a].metrics.f1, bad_cases[a].scenario_id) <
               std::tie(bad_cases[b].metrics.f1, bad_cases[b].scenario_id);
    });

    for (std::size_t i : order) {
        if (static_cast<int>(report.representatives.size()) >= config.max_representatives)
            break;
        if (!categories[i].contains(report.primary)) continue;
        Representative rep;
        rep.bad = make_digest(bad_cases[i], categories[i], config.raw_output_excerpt_chars);

        // Contrast key: a passing case whose ground-truth cause matches.
        std::set<std::string> truth_descs;
        for (const auto& [alarm_id, causes] : bad_cases[i].expected.entries)
            for (const kg::RootCause& rc : causes) truth_descs.insert(rc.cause_description);
        for (const eval::PassingCase& pc : passing_cases) {
            bool shares = std::any_of(pc.truth_descriptions.begin(),
                                      pc.truth_descriptions.end(),
                                      [&](const std::string& d) { return truth_descs.contains(d); });
            if (shares) {
                rep.contrast_scenario_id = pc.scenario_id;
                break;
            }
        }
        report.representatives.push_back(std::move(rep));
    }

    std::ostringstream narrative;
    narrative << "Bad cases: " << report.histogram.total_bad_cases << "\n";
    narrative << "Failure histogram:\n";
    for (const auto& [category, count] : report.histogram.counts)
        narrative << "  " << to_string(category) << ": " << count << "\n";
    narrative << "Primary failure mode: " << to_string(report.primary) << "\n";
    narrative << "Hypothesis: " << category_hypothesis(report.primary) << "\n";
    report.narrative = narrative.str();
    return report;
}

std::string serialize_failure_report(const FailureReport& report) {
    ordered_json doc;
    doc["schema_version"] = "1";
    doc["total_bad_cases"] = report.histogram.total_bad_cases;
    doc["histogram"] = ordered_json::object();
    for (const auto& [category, count] : report.histogram.counts)
        doc["histogram"][to_string(category)] = count;
    doc["primary_category"] = to_string(report.primary);
    doc["representatives"] = ordered_json::array();
    for (const Representative& rep : report.representatives) {
        ordered_json r;
        r["scenario_id"] = rep.bad.scenario_id;
        r["f1"] = rep.bad.f1;
        r["categories"] = rep.bad.categories;
        r["candidate_causes"] = rep.bad.candidate_causes;
        r["expected"] = rep.bad.expected;
        r["predicted"] = rep.bad.predicted;
        r["raw_output_excerpt"] = rep.bad.raw_output_excerpt;
        if (rep.contrast_scenario_id)
            r["contrast_scenario_id"] = *rep.contrast_scenario_id;
        doc["representatives"].push_back(std::move(r));
    }
    doc["narrative"] = report.narrative;
    return doc.dump(2) + "\n";
}

} // namespace rca::analysis
