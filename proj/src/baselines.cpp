#include "ttsched/baselines.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>

namespace ttsched {

namespace {

// Lexicographically smallest shortest path under removed nodes and links.
// BFS visits heads in name order, so first discovery is the smallest prefix.
std::optional<NodePath> bfs_path(const Topology& topo, NodeId src, NodeId dst,
                                 const std::vector<bool>& node_gone,
                                 const std::vector<bool>& link_gone) {
    std::vector<std::int64_t> parent(topo.node_count(), -1);
    std::vector<bool> seen(topo.node_count(), false);
    std::deque<NodeId> queue{src};
    seen[index(src)] = true;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        if (u == dst) {
            break;
        }
        for (const LinkId l : topo.out_links(u)) {
            const NodeId v = topo.link(l).dst;
            if (link_gone[index(l)] || node_gone[index(v)] || seen[index(v)]) {
                continue;
            }
            seen[index(v)] = true;
            parent[index(v)] = static_cast<std::int64_t>(index(u));
            queue.push_back(v);
        }
    }
    if (!seen[index(dst)]) {
        return std::nullopt;
    }
    NodePath path;
    for (auto v = static_cast<std::int64_t>(index(dst)); v >= 0; v = parent[static_cast<std::size_t>(v)]) {
        path.push_back(static_cast<NodeId>(v));
    }
    std::reverse(path.begin(), path.end());
    return path;
}

Decision on_fixed_paths(Tseg& tseg, const FlowRequest& flow, const std::vector<NodePath>& paths,
                        SearchObjective objective, SearchStats* stats) {
    for (const auto& path : paths) {
        const auto route = route_of(tseg.topology(), path);
        SearchOptions opt;
        opt.objective = objective;
        opt.route = route;
        const auto candidates = candidate_paths(tseg, flow, opt, stats);
        if (const auto best = best_candidate(candidates, objective)) {
            return admit(tseg, flow, *best);
        }
    }
    Decision d;
    d.reason = paths.empty() ? "No spatial path" : "No slot assignment on any candidate path";
    return d;
}

} // namespace

bool lex_less(const Topology& topo, const NodePath& a, const NodePath& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [&topo](NodeId x, NodeId y) {
                                            return topo.name_rank(x) < topo.name_rank(y);
                                        });
}

std::vector<NodePath> k_shortest_paths(const Topology& topo, NodeId src, NodeId dst, int k) {
    std::vector<NodePath> found;
    if (k < 1 || src == dst) {
        return found;
    }
    const std::vector<bool> none_nodes(topo.node_count(), false);
    const std::vector<bool> none_links(topo.link_count(), false);
    auto first = bfs_path(topo, src, dst, none_nodes, none_links);
    if (!first) {
        return found;
    }
    found.push_back(std::move(*first));

    auto order = [&topo](const NodePath& a, const NodePath& b) {
        if (a.size() != b.size()) {
            return a.size() < b.size();
        }
        return lex_less(topo, a, b);
    };
    std::set<NodePath, decltype(order)> pending(order);

    while (static_cast<int>(found.size()) < k) {
        const NodePath prev = found.back();
        for (std::size_t j = 0; j + 1 < prev.size(); ++j) {
            const NodeId spur = prev[j];
            std::vector<bool> node_gone(topo.node_count(), false);
            std::vector<bool> link_gone(topo.link_count(), false);
            for (std::size_t r = 0; r < j; ++r) {
                node_gone[index(prev[r])] = true;
            }
            for (const auto& p : found) {
                if (p.size() > j + 1 && std::equal(prev.begin(), prev.begin() + static_cast<std::ptrdiff_t>(j + 1), p.begin())) {
                    if (const auto l = topo.link_between(p[j], p[j + 1])) {
                        link_gone[index(*l)] = true;
                    }
                }
            }
            const auto tail = bfs_path(topo, spur, dst, node_gone, link_gone);
            if (!tail) {
                continue;
            }
            NodePath total(prev.begin(), prev.begin() + static_cast<std::ptrdiff_t>(j));
            total.insert(total.end(), tail->begin(), tail->end());
            if (std::find(found.begin(), found.end(), total) == found.end()) {
                pending.insert(std::move(total));
            }
        }
        if (pending.empty()) {
            break;
        }
        found.push_back(*pending.begin());
        pending.erase(pending.begin());
    }
    return found;
}

SimplePaths simple_paths(const Topology& topo, NodeId src, NodeId dst, std::size_t cap) {
    SimplePaths out;
    if (src == dst) {
        return out;
    }
    std::vector<bool> on_path(topo.node_count(), false);
    NodePath stack{src};
    on_path[index(src)] = true;

    auto dfs = [&](auto&& self, NodeId u) -> void {
        for (const LinkId l : topo.out_links(u)) {
            if (out.capped) {
                return;
            }
            const NodeId v = topo.link(l).dst;
            if (on_path[index(v)]) {
                continue;
            }
            stack.push_back(v);
            if (v == dst) {
                if (out.paths.size() == cap) {
                    out.capped = true;
                } else {
                    out.paths.push_back(stack);
                }
            } else {
                on_path[index(v)] = true;
                self(self, v);
                on_path[index(v)] = false;
            }
            stack.pop_back();
        }
    };
    dfs(dfs, src);
    return out;
}

PathLoad path_load(const Tseg& tseg, const NodePath& path, double gamma) {
    const auto& topo = tseg.topology();
    PathLoad load;
    load.nodes = path;
    load.hops = static_cast<int>(path.size()) - 1;
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
        const auto l = topo.link_between(path[j], path[j + 1]);
        if (!l) {
            continue;
        }
        for (Slot q = 1; q <= tseg.hyper_period(); ++q) {
            if (!tseg.is_free(Copy{*l, q})) {
                ++load.occupied_total;
            }
        }
    }
    load.score = load.occupied_total + gamma * load.hops;
    return load;
}

std::vector<std::optional<LinkId>> route_of(const Topology& topo, const NodePath& path) {
    std::vector<std::optional<LinkId>> route(topo.node_count());
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
        route[index(path[j])] = topo.link_between(path[j], path[j + 1]);
    }
    return route;
}

Decision schedule_wop(Tseg& tseg, const FlowRequest& flow, SearchStats* stats) {
    SearchOptions opt;
    opt.objective = SearchObjective::DelayThenHops;
    return schedule(tseg, flow, opt, stats);
}

Decision schedule_srs(Tseg& tseg, const FlowRequest& flow, const BaselineOptions& options,
                      SearchStats* stats) {
    const auto& topo = tseg.topology();
    validate(flow, tseg.config(), topo);
    const auto paths = k_shortest_paths(topo, topo.at(flow.src), topo.at(flow.dst), options.srs_paths);
    return on_fixed_paths(tseg, flow, paths, SearchObjective::Weight, stats);
}

Decision schedule_iras(Tseg& tseg, const FlowRequest& flow, const BaselineOptions& options,
                       SearchStats* stats) {
    const auto& topo = tseg.topology();
    validate(flow, tseg.config(), topo);
    const auto all = simple_paths(topo, topo.at(flow.src), topo.at(flow.dst), options.iras_path_cap);

    std::vector<PathLoad> loads;
    loads.reserve(all.paths.size());
    for (const auto& p : all.paths) {
        loads.push_back(path_load(tseg, p, options.iras_gamma));
    }
    std::stable_sort(loads.begin(), loads.end(), [&topo](const PathLoad& a, const PathLoad& b) {
        if (a.score != b.score) {
            return a.score < b.score;
        }
        if (a.hops != b.hops) {
            return a.hops < b.hops;
        }
        return lex_less(topo, a.nodes, b.nodes);
    });
    std::vector<NodePath> ordered;
    ordered.reserve(loads.size());
    for (auto& l : loads) {
        ordered.push_back(std::move(l.nodes));
    }
    auto d = on_fixed_paths(tseg, flow, ordered, SearchObjective::DelayThenHops, stats);
    if (all.capped) {
        d.warning = "simple-path enumeration capped at " + std::to_string(options.iras_path_cap) + " paths";
    }
    return d;
}

} // namespace ttsched
