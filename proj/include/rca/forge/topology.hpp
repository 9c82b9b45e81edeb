#pragma once

#include "rca/kg/graph.hpp"

#include <cstdint>
#include <utility>

namespace rca::forge {

struct CountRange {
    int min = 1;
    int max = 1;

    bool operator==(const CountRange&) const = default;
};

// Shape of the generated equipment tree. Every range minimum must be >= 1
// except riPortsPerRru, which may be 0 (ports are optional leaves).
struct TopologySpec {
    int base_stations = 1;
    CountRange bbus_per_station{1, 1};
    CountRange boards_per_bbu{1, 1};
    CountRange rrus_per_board{1, 1};
    CountRange ri_ports_per_rru{0, 0};
    std::uint64_t seed = 0;
};

struct InvalidTopologySpec : std::runtime_error {
    explicit InvalidTopologySpec(const std::string& what) : std::runtime_error(what) {}
};

// Resource nodes + dependOn edges only (child dependOn parent). Ldns encode
// the path, e.g. "BS1/BBU1/Board2/RRU1"; node ids equal ldns. Deterministic
// for a fixed spec.
kg::KnowledgeGraph generate_topology(const TopologySpec& spec);

} // namespace rca::forge
