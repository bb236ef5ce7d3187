#pragma once

#include "ttsched/scheduler.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace ttsched {

/// Spatial path as a node sequence, source first.
using NodePath = std::vector<NodeId>;

struct BaselineOptions {
    int srs_paths = 8;               // k for the k-shortest spatial candidates
    std::size_t iras_path_cap = 1000; // simple-path enumeration cap
    double iras_gamma = 1.0;          // hop penalty in the load score
};

/// Load score of a spatial path: occupied slots over its links plus
/// gamma times its hop count.
struct PathLoad {
    NodePath nodes;
    int hops = 0;
    int occupied_total = 0;
    double score = 0.0;
};

/// Up to k loopless paths in increasing hop count; equal lengths in
/// lexicographic node-name order.
std::vector<NodePath> k_shortest_paths(const Topology& topo, NodeId src, NodeId dst, int k);

struct SimplePaths {
    std::vector<NodePath> paths; // lexicographic order
    bool capped = false;
};

/// All simple paths src -> dst, stopping after `cap` paths.
SimplePaths simple_paths(const Topology& topo, NodeId src, NodeId dst, std::size_t cap);

PathLoad path_load(const Tseg& tseg, const NodePath& path, double gamma);

/// Per-node allowed out-link for a spatial path, usable as SearchOptions::route.
std::vector<std::optional<LinkId>> route_of(const Topology& topo, const NodePath& path);

/// Lexicographic comparison by node-name rank.
bool lex_less(const Topology& topo, const NodePath& a, const NodePath& b);

/// Weight-blind variant: minimal delay, then fewest hops.
Decision schedule_wop(Tseg& tseg, const FlowRequest& flow, SearchStats* stats = nullptr);

/// Route first (k shortest spatial paths), then the cheapest slot assignment
/// on the first path that admits one.
Decision schedule_srs(Tseg& tseg, const FlowRequest& flow, const BaselineOptions& options = {},
                      SearchStats* stats = nullptr);

/// Simple paths ordered by load score, each checked for a feasible slot
/// assignment; the first feasible one is admitted.
Decision schedule_iras(Tseg& tseg, const FlowRequest& flow, const BaselineOptions& options = {},
                       SearchStats* stats = nullptr);

} // namespace ttsched
