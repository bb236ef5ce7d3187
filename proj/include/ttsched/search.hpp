#pragma once

#include "ttsched/path.hpp"
#include "ttsched/tseg.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ttsched {

/// What the path search minimizes.
///   Weight: total transmission-edge weight, then delay.
///   DelayThenHops: delay, then number of transmissions; weights ignored.
enum class SearchObjective { Weight, DelayThenHops };

/// TwoLabel keeps one label per (vertex, entered by transmission?) pair over
/// the elapsed-time window and is exact. SingleLabel keeps one label per
/// expanded-graph vertex, as in the original heap formulation.
enum class LabelMode { TwoLabel, SingleLabel };

struct SearchOptions {
    SearchObjective objective = SearchObjective::Weight;
    LabelMode mode = LabelMode::TwoLabel;
    /// Optional spatial restriction: entry n holds the only link node n may
    /// transmit on. Empty means unrestricted.
    std::span<const std::optional<LinkId>> route{};
};

/// Work counters, summed over calls.
struct SearchStats {
    std::uint64_t labels = 0;      // labels created or improved
    std::uint64_t relaxations = 0; // edges examined
    std::uint64_t searches = 0;
};

struct PathResult {
    Slot start_slot = 1;
    std::vector<PathEdge> path;
    std::uint64_t weight = 0; // sum of transmission-copy weights at search time
    int delay = 0;
    int hops = 0;
};

/// Cheapest feasible frame path from src@i to dst: every transmission copy
/// is free and supports `p`, transmissions alternate with waiting, and the
/// delay is at most `m`. Ties go to the smaller delay, then to the
/// lexicographically smaller sequence of visited node names.
std::optional<PathResult> min_weight_path(const Tseg& tseg, NodeId src, NodeId dst, Slot i, int p,
                                          int m, const SearchOptions& options = {},
                                          SearchStats* stats = nullptr);

/// Sum of the current weights of the path's transmission copies.
std::uint64_t path_weight(const Tseg& tseg, std::span<const PathEdge> path);

} // namespace ttsched
