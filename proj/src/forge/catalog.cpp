#include "rca/forge/catalog.hpp"

#include "rca/kg/serialize.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rca::forge {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
using kg::SchemaViolation;

int hierarchy_level(kg::ResourceKind kind) {
    switch (kind) {
    case kg::ResourceKind::BaseStation: return 0;
    case kg::ResourceKind::BBU: return 1;
    case kg::ResourceKind::Board: return 2;
    case kg::ResourceKind::RRU: return 3;
    case kg::ResourceKind::RiPort: return 4;
    }
    return 0;
}

const CausalRule* RuleCatalog::find(const std::string& rule_id) const {
    for (const CausalRule& rule : rules)
        if (rule.rule_id == rule_id) return &rule;
    return nullptr;
}

namespace {

kg::ResourceKind parse_kind(const json& v, const std::string& path) {
    if (!v.is_string()) throw SchemaViolation(path, "expected a string");
    auto kind = kg::resource_kind_from(v.get<std::string>());
    if (!kind) throw SchemaViolation(path, "unknown resource kind");
    return *kind;
}

TargetSelector parse_selector(const json& sel, const std::string& path) {
    if (!sel.is_object() || !sel.contains("type"))
        throw SchemaViolation(path, "expected a selector object with 'type'");
    std::string type = sel.at("type").is_string() ? sel.at("type").get<std::string>() : "";
    TargetSelector out;
    if (type == "self") {
        for (auto it = sel.begin(); it != sel.end(); ++it)
            if (it.key() != "type")
                throw SchemaViolation(path + "/" + it.key(), "unexpected field");
        out.type = SelectorType::Self;
        return out;
    }
    if (type == "descendants" || type == "ancestors") {
        out.type = type == "descendants" ? SelectorType::Descendants : SelectorType::Ancestors;
        if (!sel.contains("kind") || !sel.contains("max_hops"))
            throw SchemaViolation(path, "descendants/ancestors selectors need 'kind' and 'max_hops'");
        for (auto it = sel.begin(); it != sel.end(); ++it)
            if (it.key() != "type" && it.key() != "kind" && it.key() != "max_hops")
                throw SchemaViolation(path + "/" + it.key(), "unexpected field");
        out.kind = parse_kind(sel.at("kind"), path + "/kind");
        if (!sel.at("max_hops").is_number_integer() || sel.at("max_hops").get<int>() < 1)
            throw SchemaViolation(path + "/max_hops", "expected an integer >= 1");
        out.max_hops = sel.at("max_hops").get<int>();
        return out;
    }
    throw SchemaViolation(path + "/type", "unknown selector type '" + type + "'");
}

} // namespace

RuleCatalog parse_catalog(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw kg::MalformedDocument("", "catalog is not valid JSON");
    if (!doc.is_object() || !doc.contains("rules") || !doc.at("rules").is_array())
        throw SchemaViolation("/rules", "expected a top-level 'rules' array");

    RuleCatalog catalog;
    std::size_t i = 0;
    for (const json& r : doc.at("rules")) {
        std::string path = "/rules/" + std::to_string(i++);
        if (!r.is_object()) throw SchemaViolation(path, "expected an object");
        for (const char* key : {"rule_id", "cause_description", "anchor_kind", "solution",
                                "alarm_templates"})
            if (!r.contains(key))
                throw SchemaViolation(path + "/" + key, "missing required field");

        CausalRule rule;
        rule.rule_id = r.at("rule_id").get<std::string>();
        rule.cause_description = r.at("cause_description").get<std::string>();
        rule.anchor_kind = parse_kind(r.at("anchor_kind"), path + "/anchor_kind");
        rule.solution = r.at("solution").get<std::string>();
        if (!r.at("alarm_templates").is_array() || r.at("alarm_templates").empty())
            throw SchemaViolation(path + "/alarm_templates", "expected a nonempty array");

        std::size_t j = 0;
        for (const json& t : r.at("alarm_templates")) {
            std::string tpath = path + "/alarm_templates/" + std::to_string(j++);
            for (const char* key : {"code", "title", "severity", "selector"})
                if (!t.contains(key))
                    throw SchemaViolation(tpath + "/" + key, "missing required field");
            AlarmTemplate tpl;
            if (!t.at("code").is_number_integer() || t.at("code").get<std::int64_t>() < 0)
                throw SchemaViolation(tpath + "/code", "expected a nonnegative integer");
            tpl.code = t.at("code").get<std::int64_t>();
            tpl.title = t.at("title").get<std::string>();
            auto sev = kg::severity_from(t.at("severity").get<std::string>());
            if (!sev) throw SchemaViolation(tpath + "/severity", "unknown severity");
            tpl.severity = *sev;
            tpl.selector = parse_selector(t.at("selector"), tpath + "/selector");
            rule.templates.push_back(std::move(tpl));
        }
        catalog.rules.push_back(std::move(rule));
    }
    return catalog;
}

RuleCatalog load_catalog(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw kg::MalformedDocument("", "cannot open catalog file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_catalog(buf.str());
}

std::string serialize_catalog(const RuleCatalog& catalog) {
    ordered_json doc;
    doc["rules"] = ordered_json::array();
    for (const CausalRule& rule : catalog.rules) {
        ordered_json r;
        r["rule_id"] = rule.rule_id;
        r["cause_description"] = rule.cause_description;
        r["anchor_kind"] = kg::to_string(rule.anchor_kind);
        r["solution"] = rule.solution;
        r["alarm_templates"] = ordered_json::array();
        for (const AlarmTemplate& tpl : rule.templates) {
            ordered_json t;
            t["code"] = tpl.code;
            t["title"] = tpl.title;
            t["severity"] = kg::to_string(tpl.severity);
            ordered_json sel;
            switch (tpl.selector.type) {
            case SelectorType::Self:
                sel["type"] = "self";
                break;
            case SelectorType::Descendants:
                sel["type"] = "descendants";
                sel["kind"] = kg::to_string(tpl.selector.kind);
                sel["max_hops"] = tpl.selector.max_hops;
                break;
            case SelectorType::Ancestors:
                sel["type"] = "ancestors";
                sel["kind"] = kg::to_string(tpl.selector.kind);
                sel["max_hops"] = tpl.selector.max_hops;
                break;
            }
            t["selector"] = std::move(sel);
            r["alarm_templates"].push_back(std::move(t));
        }
        doc["rules"].push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

std::vector<kg::Violation> validate_catalog(const RuleCatalog& catalog) {
    std::vector<kg::Violation> out;
    if (catalog.rules.empty())
        out.push_back({"catalog-nonempty", "", "catalog has no rules"});

    std::map<std::string, int> id_count;
    std::map<std::pair<std::string, std::string>, int> desc_anchor_count;
    std::map<std::int64_t, std::pair<std::string, std::string>> code_registry;

    for (const CausalRule& rule : catalog.rules) {
        ++id_count[rule.rule_id];
        ++desc_anchor_count[{rule.cause_description, kg::to_string(rule.anchor_kind)}];

        bool anchored = false;
        for (std::size_t j = 0; j < rule.templates.size(); ++j) {
            const AlarmTemplate& tpl = rule.templates[j];
            std::string subject = rule.rule_id + "/alarm_templates/" + std::to_string(j);
            int anchor_level = hierarchy_level(rule.anchor_kind);
            switch (tpl.selector.type) {
            case SelectorType::Self:
                anchored = true;
                break;
            case SelectorType::Descendants: {
                int target_level = hierarchy_level(tpl.selector.kind);
                if (target_level <= anchor_level)
                    out.push_back({"selector-kind-reachable", subject,
                                   "descendants selector kind must be below the anchor kind"});
                else if (tpl.selector.max_hops >= target_level - anchor_level)
                    anchored = true;
                if (tpl.selector.max_hops > 4)
                    out.push_back({"selector-max-hops", subject,
                                   "max_hops exceeds the topology depth (4)"});
                break;
            }
            case SelectorType::Ancestors: {
                int target_level = hierarchy_level(tpl.selector.kind);
                if (target_level >= anchor_level)
                    out.push_back({"selector-kind-reachable", subject,
                                   "ancestors selector kind must be above the anchor kind"});
                else if (tpl.selector.max_hops >= anchor_level - target_level)
                    anchored = true;
                if (tpl.selector.max_hops > 4)
                    out.push_back({"selector-max-hops", subject,
                                   "max_hops exceeds the topology depth (4)"});
                break;
            }
            }
            auto it = code_registry.find(tpl.code);
            std::pair<std::string, std::string> meta{tpl.title, kg::to_string(tpl.severity)};
            if (it == code_registry.end())
                code_registry.emplace(tpl.code, meta);
            else if (it->second != meta)
                out.push_back({"code-metadata-consistent", subject,
                               "code " + std::to_string(tpl.code) +
                                   " maps to conflicting title/severity elsewhere in the catalog"});
        }
        if (!anchored)
            out.push_back({"rule-anchored", rule.rule_id,
                           "no template targets the anchor or a reachable kind"});
    }

    for (const auto& [id, count] : id_count)
        if (count > 1)
            out.push_back({"rule-id-unique", id,
                           "rule id appears " + std::to_string(count) + " times"});
    for (const auto& [key, count] : desc_anchor_count)
        if (count > 1)
            out.push_back({"cause-anchor-unique", key.first,
                           "(cause_description, anchor_kind) pair appears " +
                               std::to_string(count) + " times"});

    std::sort(out.begin(), out.end(), [](const kg::Violation& a, const kg::Violation& b) {
        return std::tie(a.invariant, a.subject, a.detail) <
               std::tie(b.invariant, b.subject, b.detail);
    });
    return out;
}

} // namespace rca::forge
