#pragma once

#include "ttsched/tseg.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ttsched {

/// Instance size limits for the exact solver; larger instances are refused.
struct OracleLimits {
    std::size_t max_nodes = 6;
    int max_hyper_period = 8;
    std::size_t max_flows = 6;
    std::size_t max_placements_per_flow = 250000;
    std::uint64_t max_search_nodes = 50'000'000;

    static OracleLimits small() { return {}; }
    static OracleLimits ring_scale() { return {8, 20, 10, 250000, 50'000'000}; }
};

struct OracleResult {
    int optimum = 0;
    std::vector<Assignment> witness; // one optimal set of admitted flows
    std::uint64_t search_nodes = 0;
};

/// Every distinct placement (frame path and start slot, up to identical
/// replica sets) of one flow on the free copies of `tseg`.
struct Placement {
    Slot start_slot = 1;
    std::vector<PathEdge> path;
    std::vector<std::uint64_t> copies; // bitset over link * N + slot - 1
    int size = 0;                      // number of copies taken
};

std::vector<Placement> enumerate_placements(const Tseg& tseg, const FlowRequest& flow,
                                            std::size_t cap);

/// Maximum number of flows that can be admitted together on top of the
/// current occupancy of `tseg`, by exhaustive branch and bound. Throws
/// LimitError when the instance exceeds `limits`.
OracleResult oracle_solve(const Tseg& tseg, std::span<const FlowRequest> flows,
                          const OracleLimits& limits = OracleLimits::small());

} // namespace ttsched
