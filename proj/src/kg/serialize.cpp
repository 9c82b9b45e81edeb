#include "rca/kg/serialize.hpp"

#include "rca/kg/validate.hpp"
#include "rca/util/timefmt.hpp"

#include "json.hpp"

#include <algorithm>

namespace rca::kg {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

json parse_document(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw MalformedDocument("", "document is not valid JSON");
    return doc;
}

void require_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {}) {
    if (!obj.is_object()) throw SchemaViolation(path, "expected an object");
    for (const char* key : required)
        if (!obj.contains(key))
            throw SchemaViolation(path + "/" + key, "missing required field");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = std::any_of(required.begin(), required.end(),
                                 [&](const char* k) { return it.key() == k; }) ||
                     std::any_of(optional.begin(), optional.end(),
                                 [&](const char* k) { return it.key() == k; });
        if (!known)
            throw SchemaViolation(path + "/" + it.key(), "unexpected field");
    }
}

std::string get_string(const json& obj, const std::string& path, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_string())
        throw SchemaViolation(path + "/" + key, "expected a string");
    return v.get<std::string>();
}

std::string get_nonempty_string(const json& obj, const std::string& path, const char* key) {
    std::string s = get_string(obj, path, key);
    if (s.empty())
        throw SchemaViolation(path + "/" + key, "must be nonempty");
    return s;
}

std::int64_t get_nonneg_int(const json& obj, const std::string& path, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        throw SchemaViolation(path + "/" + key, "expected a nonnegative integer");
    return v.get<std::int64_t>();
}

void check_schema_version(const json& doc, const std::string& root) {
    std::string version = get_string(doc, root, "schema_version");
    if (version != "1")
        throw SchemaViolation(root + "/schema_version", "unsupported version '" + version + "'");
}

Node parse_node(const json& n, const std::string& path) {
    require_keys(n, path, {"id", "type", "properties"});
    std::string id = get_nonempty_string(n, path, "id");
    std::string type = get_string(n, path, "type");
    const json& props = n.at("properties");
    std::string ppath = path + "/properties";

    if (type == "AlarmDetail") {
        require_keys(props, ppath, {"title", "code", "severity", "reportAlarmTime"});
        AlarmNode alarm;
        alarm.id = id;
        alarm.title = get_string(props, ppath, "title");
        alarm.code = get_nonneg_int(props, ppath, "code");
        auto sev = severity_from(get_string(props, ppath, "severity"));
        if (!sev) throw SchemaViolation(ppath + "/severity", "unknown severity");
        alarm.severity = *sev;
        auto ts = parse_utc(get_string(props, ppath, "reportAlarmTime"));
        if (!ts)
            throw SchemaViolation(ppath + "/reportAlarmTime",
                                  "expected YYYY-MM-DDThh:mm:ssZ");
        alarm.report_time = *ts;
        return alarm;
    }
    if (type == "AlarmCause") {
        require_keys(props, ppath, {"cause_description", "solution"});
        CauseNode cause;
        cause.id = id;
        cause.cause_description = get_nonempty_string(props, ppath, "cause_description");
        cause.solution = get_string(props, ppath, "solution");
        return cause;
    }
    auto kind = resource_kind_from(type);
    if (!kind) throw SchemaViolation(path + "/type", "unknown node type '" + type + "'");
    require_keys(props, ppath, {"ldn"}, {"serial"});
    ResourceNode res;
    res.id = id;
    res.kind = *kind;
    res.ldn = get_nonempty_string(props, ppath, "ldn");
    if (props.contains("serial"))
        res.serial = get_string(props, ppath, "serial");
    return res;
}

Edge parse_edge(const json& e, const std::string& path) {
    require_keys(e, path, {"src", "dst", "type"});
    Edge edge;
    edge.src = get_nonempty_string(e, path, "src");
    edge.dst = get_nonempty_string(e, path, "dst");
    auto kind = edge_kind_from(get_string(e, path, "type"));
    if (!kind) throw SchemaViolation(path + "/type", "unknown edge type");
    edge.kind = *kind;
    return edge;
}

ordered_json node_to_json(const Node& node) {
    ordered_json out;
    out["id"] = node_id(node);
    if (const auto* res = std::get_if<ResourceNode>(&node)) {
        out["type"] = to_string(res->kind);
        ordered_json props;
        props["ldn"] = res->ldn;
        if (res->serial) props["serial"] = *res->serial;
        out["properties"] = std::move(props);
    } else if (const auto* alarm = std::get_if<AlarmNode>(&node)) {
        out["type"] = "AlarmDetail";
        ordered_json props;
        props["title"] = alarm->title;
        props["code"] = alarm->code;
        props["severity"] = to_string(alarm->severity);
        props["reportAlarmTime"] = format_utc(alarm->report_time);
        out["properties"] = std::move(props);
    } else {
        const auto& cause = std::get<CauseNode>(node);
        out["type"] = "AlarmCause";
        ordered_json props;
        props["cause_description"] = cause.cause_description;
        props["solution"] = cause.solution;
        out["properties"] = std::move(props);
    }
    return out;
}

} // namespace

KnowledgeGraph parse_input(const std::string& text) {
    json doc = parse_document(text);
    require_keys(doc, "", {"schema_version", "scenario_id", "nodes", "edges", "target_alarms"});
    check_schema_version(doc, "");
    std::string scenario_id = get_nonempty_string(doc, "", "scenario_id");

    if (!doc.at("nodes").is_array()) throw SchemaViolation("/nodes", "expected an array");
    if (!doc.at("edges").is_array()) throw SchemaViolation("/edges", "expected an array");
    if (!doc.at("target_alarms").is_array())
        throw SchemaViolation("/target_alarms", "expected an array");

    std::vector<Node> nodes;
    std::size_t i = 0;
    for (const json& n : doc.at("nodes"))
        nodes.push_back(parse_node(n, "/nodes/" + std::to_string(i++)));

    std::vector<Edge> edges;
    i = 0;
    for (const json& e : doc.at("edges"))
        edges.push_back(parse_edge(e, "/edges/" + std::to_string(i++)));

    std::vector<std::string> targets;
    i = 0;
    for (const json& t : doc.at("target_alarms")) {
        if (!t.is_string())
            throw SchemaViolation("/target_alarms/" + std::to_string(i), "expected a string");
        targets.push_back(t.get<std::string>());
        ++i;
    }

    KnowledgeGraph graph(std::move(scenario_id), std::move(nodes), std::move(edges),
                         std::move(targets));
    auto violations = validate_graph(graph);
    if (!violations.empty()) {
        const Violation& v = violations.front();
        throw InvariantViolation(v.subject, v.invariant + ": " + v.detail);
    }
    return graph;
}

std::string serialize_input(const KnowledgeGraph& graph) {
    std::vector<Node> nodes = graph.nodes();
    std::sort(nodes.begin(), nodes.end(),
              [](const Node& a, const Node& b) { return node_id(a) < node_id(b); });
    std::vector<Edge> edges = graph.edges();
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        auto key = [](const Edge& e) {
            return std::tuple<std::string, const std::string&, const std::string&>(
                to_string(e.kind), e.src, e.dst);
        };
        return key(a) < key(b);
    });

    ordered_json doc;
    doc["schema_version"] = "1";
    doc["scenario_id"] = graph.scenario_id();
    doc["nodes"] = ordered_json::array();
    for (const Node& n : nodes) doc["nodes"].push_back(node_to_json(n));
    doc["edges"] = ordered_json::array();
    for (const Edge& e : edges) {
        ordered_json edge;
        edge["src"] = e.src;
        edge["dst"] = e.dst;
        edge["type"] = to_string(e.kind);
        doc["edges"].push_back(std::move(edge));
    }
    doc["target_alarms"] = graph.target_alarms();
    return doc.dump(2) + "\n";
}

Label parse_label(const std::string& text) {
    json doc = parse_document(text);
    require_keys(doc, "", {"schema_version", "scenario_id", "alarms"});
    check_schema_version(doc, "");

    Label label;
    label.scenario_id = get_nonempty_string(doc, "", "scenario_id");
    if (!doc.at("alarms").is_array()) throw SchemaViolation("/alarms", "expected an array");

    std::size_t i = 0;
    for (const json& entry : doc.at("alarms")) {
        std::string path = "/alarms/" + std::to_string(i++);
        require_keys(entry, path, {"alarm_id", "root_causes"});
        std::string alarm_id = get_nonempty_string(entry, path, "alarm_id");
        if (!entry.at("root_causes").is_array())
            throw SchemaViolation(path + "/root_causes", "expected an array");
        if (entry.at("root_causes").empty())
            throw SchemaViolation(path + "/root_causes", "must be nonempty");
        std::vector<RootCause> causes;
        std::size_t j = 0;
        for (const json& rc : entry.at("root_causes")) {
            std::string cpath = path + "/root_causes/" + std::to_string(j++);
            require_keys(rc, cpath, {"cause_description", "equipment_id", "solution"});
            causes.push_back({get_string(rc, cpath, "cause_description"),
                              get_string(rc, cpath, "equipment_id"),
                              get_string(rc, cpath, "solution")});
        }
        for (const auto& [seen, _] : label.entries)
            if (seen == alarm_id)
                throw InvariantViolation(path + "/alarm_id",
                                         "duplicate alarm id '" + alarm_id + "'");
        label.entries.emplace_back(std::move(alarm_id), std::move(causes));
    }
    return label;
}

std::string serialize_label(const Label& label) {
    auto entries = label.entries;
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    ordered_json doc;
    doc["schema_version"] = "1";
    doc["scenario_id"] = label.scenario_id;
    doc["alarms"] = ordered_json::array();
    for (const auto& [alarm_id, causes] : entries) {
        ordered_json entry;
        entry["alarm_id"] = alarm_id;
        entry["root_causes"] = ordered_json::array();
        for (const RootCause& rc : causes) {
            ordered_json c;
            c["cause_description"] = rc.cause_description;
            c["equipment_id"] = rc.equipment_id;
            c["solution"] = rc.solution;
            entry["root_causes"].push_back(std::move(c));
        }
        doc["alarms"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

} // namespace rca::kg
