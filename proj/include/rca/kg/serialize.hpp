#pragma once

#include "rca/kg/graph.hpp"

#include <stdexcept>
#include <string>

namespace rca::kg {

// Parse errors carry the path of the offending element in JSON-pointer
// style ("/nodes/3/properties/ldn").
class ParseError : public std::runtime_error {
public:
    ParseError(std::string kind, std::string path, const std::string& detail)
        : std::runtime_error(kind + " at " + (path.empty() ? "/" : path) + ": " + detail),
          kind_(std::move(kind)),
          path_(std::move(path)) {}

    const std::string& kind() const { return kind_; }
    const std::string& path() const { return path_; }

private:
    std::string kind_;
    std::string path_;
};

struct MalformedDocument : ParseError {
    MalformedDocument(std::string path, const std::string& detail)
        : ParseError("MalformedDocument", std::move(path), detail) {}
};

struct SchemaViolation : ParseError {
    SchemaViolation(std::string path, const std::string& detail)
        : ParseError("SchemaViolation", std::move(path), detail) {}
};

struct InvariantViolation : ParseError {
    InvariantViolation(std::string path, const std::string& detail)
        : ParseError("InvariantViolation", std::move(path), detail) {}
};

// Input document <-> KnowledgeGraph. Parsing is strict: unknown keys,
// missing keys, wrong types and out-of-range values are all rejected.
// The returned graph satisfies every structural invariant.
KnowledgeGraph parse_input(const std::string& text);

// Canonical form: fixed key order, nodes sorted by id, edges sorted by
// (type, src, dst). Equal graphs serialize to byte-identical text.
std::string serialize_input(const KnowledgeGraph& graph);

Label parse_label(const std::string& text);

// Canonical form: alarm entries sorted by alarm id; per-alarm cause lists
// keep their (rank-significant) order.
std::string serialize_label(const Label& label);

} // namespace rca::kg
