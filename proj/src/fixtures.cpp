#include "ttsched/fixtures.hpp"

#include "ttsched/errors.hpp"

#include <string>

namespace ttsched {

Tseg Fixture::make_tseg() const {
    Tseg tseg(topo, cfg, weights);
    for (const auto& a : background) {
        tseg.occupy(a);
    }
    return tseg;
}

std::vector<FlowRequest> Fixture::all_flows() const {
    std::vector<FlowRequest> out;
    for (const auto& a : background) {
        out.push_back(a.flow);
    }
    out.insert(out.end(), trace.begin(), trace.end());
    return out;
}

Fixture conflict4() {
    Topology topo;
    const auto s = topo.add_node("s", NodeKind::EndSystem);
    const auto a = topo.add_node("a", NodeKind::Switch);
    const auto b = topo.add_node("b", NodeKind::Switch);
    const auto d = topo.add_node("d", NodeKind::EndSystem);
    const auto sa = topo.add_link(s, a);
    const auto ad = topo.add_link(a, d);
    topo.add_link(s, b);
    topo.add_link(b, d);

    Fixture fx{topo, SlotConfig::from_slots({2, 4}), WeightConfig{2}, {}, {}};

    // Single-hop background flows, one frame per hyper-period each.
    auto pin = [&](NodeId from, NodeId to, LinkId link, Slot q) {
        const auto& fn = topo.node(from).name;
        const auto& tn = topo.node(to).name;
        FlowRequest bg{"bg_" + fn + tn + std::to_string(q), 1, fn, tn, 4, 1};
        fx.background.push_back(make_assignment(
            bg, q, {PathEdge{EdgeKind::Transmission, from, to, q, link}}, fx.topo, fx.cfg));
    };
    for (const Slot q : {1, 3, 4}) {
        pin(s, a, sa, q);
    }
    for (const Slot q : {1, 2, 3}) {
        pin(a, d, ad, q);
    }

    fx.trace = {
        FlowRequest{"f1", 1, "s", "d", 2, 4},
        FlowRequest{"f2", 2, "s", "d", 4, 8},
        FlowRequest{"f3", 3, "s", "d", 2, 4},
    };
    return fx;
}

Fixture fixture_by_name(std::string_view name) {
    if (name == "conflict4") {
        return conflict4();
    }
    throw ConfigError("unknown fixture '" + std::string(name) + "'");
}

} // namespace ttsched
