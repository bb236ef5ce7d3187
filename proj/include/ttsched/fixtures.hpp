#pragma once

#include "ttsched/tseg.hpp"

#include <string_view>
#include <vector>

namespace ttsched {

/// A named regression instance: network, slot setup, pre-admitted
/// background flows and the online trace to schedule on top of them.
struct Fixture {
    Topology topo;
    SlotConfig cfg;
    WeightConfig weights;
    std::vector<Assignment> background;
    std::vector<FlowRequest> trace;

    /// Expanded graph with the background already occupied.
    Tseg make_tseg() const;
    /// Background flow requests followed by the trace.
    std::vector<FlowRequest> all_flows() const;
};

/// Four nodes s, a, b, d with links s->a, a->d, s->b, b->d; N = 4, periods
/// {2, 4}, alpha 2. Background traffic leaves s->a free only in slot 2 and
/// a->d free only in slot 4. Trace: f1 (p 2, m 4), f2 (p 4, m 8),
/// f3 (p 2, m 4), all s -> d.
Fixture conflict4();

/// Looks up a fixture by name; throws ConfigError for unknown names.
Fixture fixture_by_name(std::string_view name);

} // namespace ttsched
