// Root-cause solver, second cut.
//
// Reads a fault-scenario graph document (path in argv[1]) and prints a
// prediction document on stdout. Improvement over the first cut: instead
// of emitting every candidate cause, keep only the most specific ones.
// A cause whose description points at equipment further up the hierarchy
// than the earliest alarm's equipment would have produced a wider alarm
// footprint than what was observed, so it is dropped.

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct Resource {
    std::string ldn;
    std::string type;
};

struct Alarm {
    std::string id;
    std::string equipment; // resource node id (via its generate edge)
    std::string time;      // ISO-8601 UTC; lexicographic order == time order
    long long code = 0;
};

struct Candidate {
    std::string id;
    std::string description;
    std::string solution;
};

// Equipment kind a cause description talks about, judged from its wording.
// Whole-word matching: substrings inside other words (e.g. "interrupted")
// must not count.
static std::string kind_of_description(const std::string& description) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : description) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(current);

    auto has = [&](const char* word) {
        for (const std::string& t : tokens)
            if (t == word) return true;
        return false;
    };
    for (size_t i = 0; i + 1 < tokens.size(); ++i)
        if (tokens[i] == "base" && tokens[i + 1] == "station") return "BaseStation";
    if (has("port") || has("riport")) return "RiPort";
    if (has("rru")) return "RRU";
    if (has("board")) return "Board";
    if (has("bbu")) return "BBU";
    return "";
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: solver <input.json>\n";
        return 2;
    }
    std::ifstream in(argv[1], std::ios::binary);
    if (!in) {
        std::cerr << "cannot open " << argv[1] << "\n";
        return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    json doc = json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        std::cerr << "input is not valid JSON\n";
        return 2;
    }

    std::map<std::string, Resource> resources;
    std::map<std::string, Alarm> alarms;
    std::vector<Candidate> candidates;
    try {
        for (const json& n : doc.at("nodes")) {
            std::string type = n.at("type").get<std::string>();
            std::string id = n.at("id").get<std::string>();
            const json& props = n.at("properties");
            if (type == "AlarmDetail") {
                Alarm alarm;
                alarm.id = id;
                alarm.time = props.at("reportAlarmTime").get<std::string>();
                alarm.code = props.at("code").get<long long>();
                alarms[id] = alarm;
            } else if (type == "AlarmCause") {
                candidates.push_back({id, props.at("cause_description").get<std::string>(),
                                      props.at("solution").get<std::string>()});
            } else {
                resources[id] = {props.at("ldn").get<std::string>(), type};
            }
        }
        std::set<std::string> linked; // causes referenced by a causedBy edge
        for (const json& e : doc.at("edges")) {
            std::string type = e.at("type").get<std::string>();
            if (type == "generate") {
                auto it = alarms.find(e.at("dst").get<std::string>());
                if (it != alarms.end()) it->second.equipment = e.at("src").get<std::string>();
            } else if (type == "causedBy") {
                linked.insert(e.at("dst").get<std::string>());
            }
        }
        std::sort(candidates.begin(), candidates.end(),
                  [&](const Candidate& a, const Candidate& b) {
                      bool la = linked.count(a.id) > 0, lb = linked.count(b.id) > 0;
                      if (la != lb) return la;
                      return a.id < b.id;
                  });

        std::vector<std::string> targets;
        for (const json& t : doc.at("target_alarms")) targets.push_back(t.get<std::string>());

        // The earliest alarm pinpoints where the fault started; its
        // equipment is the best guess for every candidate's location.
        const Alarm* earliest = nullptr;
        for (const std::string& id : targets) {
            auto it = alarms.find(id);
            if (it == alarms.end()) continue;
            const Alarm& alarm = it->second;
            if (!earliest ||
                std::tie(alarm.time, resources[alarm.equipment].ldn, alarm.code) <
                    std::tie(earliest->time, resources[earliest->equipment].ldn,
                             earliest->code))
                earliest = &alarm;
        }
        std::string equipment_ldn, equipment_kind;
        if (earliest && resources.count(earliest->equipment)) {
            equipment_ldn = resources[earliest->equipment].ldn;
            equipment_kind = resources[earliest->equipment].type;
        }

        // Specificity filter: keep the candidates whose implied equipment
        // kind matches the fault origin. A broader cause (higher kind)
        // implies alarms we did not observe. Fall back to the full list
        // when the wording gives no signal.
        std::vector<Candidate> kept;
        for (const Candidate& c : candidates)
            if (kind_of_description(c.description) == equipment_kind) kept.push_back(c);
        if (kept.empty()) kept = candidates;

        ordered_json out;
        out["schema_version"] = "1";
        out["scenario_id"] = doc.at("scenario_id").get<std::string>();
        out["alarms"] = ordered_json::array();
        for (const std::string& id : targets) {
            ordered_json entry;
            entry["alarm_id"] = id;
            entry["root_causes"] = ordered_json::array();
            for (const Candidate& c : kept) {
                ordered_json rc;
                rc["cause_description"] = c.description;
                rc["equipment_id"] = equipment_ldn;
                rc["solution"] = c.solution;
                entry["root_causes"].push_back(std::move(rc));
            }
            out["alarms"].push_back(std::move(entry));
        }
        std::cout << out.dump(2) << "\n";
    } catch (const json::exception& e) {
        std::cerr << "input document malformed: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
