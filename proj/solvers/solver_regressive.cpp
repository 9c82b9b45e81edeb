// Root-cause solver, overcautious cut.
//
// Reads a fault-scenario graph document (path in argv[1]) and prints a
// prediction document on stdout. This revision tightens the candidate
// filter so far that it only emits causes it can prove from a causedBy
// chain of length two or more -- which the inputs never contain, so it
// emits nothing. Kept as a regression payload for the repair loop.

#include "json.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

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

    try {
        // Chains of causedBy edges ending in a cause node.
        std::map<std::string, std::vector<std::string>> caused_by;
        for (const json& e : doc.at("edges"))
            if (e.at("type").get<std::string>() == "causedBy")
                caused_by[e.at("src").get<std::string>()].push_back(
                    e.at("dst").get<std::string>());

        ordered_json out;
        out["schema_version"] = "1";
        out["scenario_id"] = doc.at("scenario_id").get<std::string>();
        out["alarms"] = ordered_json::array();
        for (const json& t : doc.at("target_alarms")) {
            ordered_json entry;
            entry["alarm_id"] = t.get<std::string>();
            entry["root_causes"] = ordered_json::array();
            // Require a two-hop causal chain before naming a cause.
            for (const auto& [src, dsts] : caused_by)
                for (const std::string& mid : dsts)
                    if (caused_by.count(mid))
                        for (const std::string& leaf : caused_by.at(mid)) {
                            ordered_json rc;
                            rc["cause_description"] = leaf;
                            rc["equipment_id"] = "";
                            rc["solution"] = "";
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
