// Root-cause solver, first cut.
//
// Reads a fault-scenario graph document (path in argv[1]) and prints a
// prediction document on stdout. Strategy: every candidate cause offered
// by the input is emitted for every target alarm, attributed to the
// equipment that reported the earliest alarm.

#include "json.hpp"

#include <algorithm>
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
        // Causes referenced from the alarm graph come first, then the rest,
        // each group in id order.
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
        std::string equipment_ldn;
        if (earliest && resources.count(earliest->equipment))
            equipment_ldn = resources[earliest->equipment].ldn;

        ordered_json out;
        out["schema_version"] = "1";
        out["scenario_id"] = doc.at("scenario_id").get<std::string>();
        out["alarms"] = ordered_json::array();
        for (const std::string& id : targets) {
            ordered_json entry;
            entry["alarm_id"] = id;
            entry["root_causes"] = ordered_json::array();
            for (const Candidate& c : candidates) {
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
