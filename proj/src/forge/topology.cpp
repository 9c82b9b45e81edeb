#include "rca/forge/topology.hpp"

#include "rca/util/rng.hpp"

namespace rca::forge {

namespace {

void check_range(const CountRange& range, int floor, const char* name) {
    if (range.min < floor || range.max < range.min)
        throw InvalidTopologySpec(std::string(name) + " range is invalid");
}

} // namespace

kg::KnowledgeGraph generate_topology(const TopologySpec& spec) {
    if (spec.base_stations < 1)
        throw InvalidTopologySpec("base_stations must be >= 1");
    check_range(spec.bbus_per_station, 1, "bbus_per_station");
    check_range(spec.boards_per_bbu, 1, "boards_per_bbu");
    check_range(spec.rrus_per_board, 1, "rrus_per_board");
    check_range(spec.ri_ports_per_rru, 0, "ri_ports_per_rru");

    SplitMix64 rng(spec.seed);
    auto draw = [&](const CountRange& r) {
        return static_cast<int>(rng.uniform(static_cast<std::uint64_t>(r.min),
                                            static_cast<std::uint64_t>(r.max)));
    };

    std::vector<kg::Node> nodes;
    std::vector<kg::Edge> edges;
    auto add = [&](kg::ResourceKind kind, const std::string& ldn,
                   const std::string& parent_ldn) {
        kg::ResourceNode node;
        node.id = ldn;
        node.kind = kind;
        node.ldn = ldn;
        // Every third unit carries a serial number; purely cosmetic metadata.
        if (rng.uniform(0, 2) == 0) {
            char buf[24];
            std::snprintf(buf, sizeof buf, "SN%08llu",
                          static_cast<unsigned long long>(rng.uniform(0, 99999999)));
            node.serial = buf;
        }
        nodes.push_back(std::move(node));
        if (!parent_ldn.empty())
            edges.push_back({ldn, parent_ldn, kg::EdgeKind::DependOn});
    };

    for (int bs = 1; bs <= spec.base_stations; ++bs) {
        std::string bs_ldn = "BS" + std::to_string(bs);
        add(kg::ResourceKind::BaseStation, bs_ldn, "");
        int bbus = draw(spec.bbus_per_station);
        for (int bbu = 1; bbu <= bbus; ++bbu) {
            std::string bbu_ldn = bs_ldn + "/BBU" + std::to_string(bbu);
            add(kg::ResourceKind::BBU, bbu_ldn, bs_ldn);
            int boards = draw(spec.boards_per_bbu);
            for (int board = 1; board <= boards; ++board) {
                std::string board_ldn = bbu_ldn + "/Board" + std::to_string(board);
                add(kg::ResourceKind::Board, board_ldn, bbu_ldn);
                int rrus = draw(spec.rrus_per_board);
                for (int rru = 1; rru <= rrus; ++rru) {
                    std::string rru_ldn = board_ldn + "/RRU" + std::to_string(rru);
                    add(kg::ResourceKind::RRU, rru_ldn, board_ldn);
                    int ports = draw(spec.ri_ports_per_rru);
                    for (int port = 1; port <= ports; ++port) {
                        std::string port_ldn = rru_ldn + "/RiPort" + std::to_string(port);
                        add(kg::ResourceKind::RiPort, port_ldn, rru_ldn);
                    }
                }
            }
        }
    }

    return kg::KnowledgeGraph("", std::move(nodes), std::move(edges), {});
}

} // namespace rca::forge
