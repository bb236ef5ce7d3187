#pragma once

#include "ttsched/slot_config.hpp"
#include "ttsched/topology.hpp"
#include "ttsched/traffic.hpp"

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace ttsched {

/// One (link, slot) copy of a transmission edge.
struct Copy {
    LinkId link{};
    Slot slot = 1;

    auto operator<=>(const Copy&) const = default;
};

enum class EdgeKind { Transmission, Caching, InterHyperPeriod };

/// Edge of a frame path through the expanded graph. `slot` is the slot of the
/// tail vertex: a transmission edge (u_q, v_q) has slot q, the caching edge
/// (u_q, u_{q+1}) has slot q and the inter-hyper-period edge (u_N, u_1) has slot N.
/// `link` is meaningful for transmission edges only.
struct PathEdge {
    EdgeKind kind = EdgeKind::Caching;
    NodeId from{};
    NodeId to{};
    Slot slot = 1;
    LinkId link{};

    bool operator==(const PathEdge&) const = default;
};

/// Frame delay in slots: caching plus inter-hyper-period edges, plus one.
int path_delay(std::span<const PathEdge> path);
int transmission_count(std::span<const PathEdge> path);

/// { q' in [1, N] : q' = q (mod p) }, ascending.
std::vector<Slot> replica_slots(Slot q, int p, int n);

/// One admitted flow: its frame path, start slot and the periodic replicas of
/// every transmission edge on the path within the hyper-period.
struct Assignment {
    FlowRequest flow;
    Slot start_slot = 1;
    std::vector<PathEdge> path;
    std::vector<Copy> replicas; // sorted, (N/p) * transmission_count(path) entries

    int delay() const { return path_delay(path); }
    bool operator==(const Assignment&) const = default;
};

/// Builds an Assignment and checks its shape: the path starts at the flow's
/// source in `start_slot` in [1, p], every edge continues from the previous
/// vertex, transmissions never follow each other directly, the path ends at
/// the destination, and no two replicas coincide. Throws ConfigError otherwise.
Assignment make_assignment(const FlowRequest& flow, Slot start_slot, std::vector<PathEdge> path,
                           const Topology& topo, const SlotConfig& cfg);

/// Human-readable path, e.g. "s@2 -tx-> a@2 -c-> a@3 -tx-> d@3".
std::string describe_path(std::span<const PathEdge> path, const Topology& topo);

} // namespace ttsched
