#pragma once

#include "ttsched/tseg.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ttsched {

/// One violated constraint. `family` is 1..7; `indices` identify the row
/// (node/link endpoints, slot, flow position as applicable).
struct Violation {
    int family = 0;
    std::vector<std::int64_t> indices;
    std::string message;

    bool operator==(const Violation&) const = default;
};

/// "EQ<k>: <i,j,...>: <message>"
std::string render(const Violation& v);

/// Variable values of one flow over a hyper-period.
struct FlowUsage {
    FlowRequest flow;
    std::map<Copy, int> tx;                   // transmission copies used (count)
    std::map<std::pair<NodeId, Slot>, int> wait; // frames waiting across the edge leaving (node, slot)
    std::optional<int> frame_delay;          // per-frame delay when a path is known
};

/// Expands an assignment into per-copy transmission counts and per-vertex
/// waiting counts for all N/p frames of the hyper-period.
FlowUsage usage_of(const Assignment& a, const SlotConfig& cfg);

/// Checks every flow against all constraint families. `background` copies
/// are unavailable to every flow. Each flow is treated as scheduled (Z = 1).
std::vector<Violation> verify_usage(const Topology& topo, const SlotConfig& cfg,
                                    std::span<const FlowUsage> flows,
                                    const Occupancy* background = nullptr);

std::vector<Violation> verify_schedule(const Topology& topo, const SlotConfig& cfg,
                                       std::span<const Assignment> assignments,
                                       const Occupancy* background = nullptr);

/// Rebuilds each flow's frame chain from its gate-table rows (following the
/// earliest next transmission from the source) and verifies the result.
/// Rows naming unknown flows or links are reported as capacity violations.
std::vector<Violation> verify_gate_table(const Topology& topo, const SlotConfig& cfg,
                                         std::span<const GateRow> rows,
                                         std::span<const FlowRequest> flows);

} // namespace ttsched
