#include "ttsched/search.hpp"

#include "ttsched/errors.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>

namespace ttsched {

namespace {

constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

bool route_allows(const SearchOptions& opt, NodeId from, LinkId link) {
    if (opt.route.empty()) {
        return true;
    }
    const auto& allowed = opt.route[index(from)];
    return allowed && *allowed == link;
}

// Labels of the time-unrolled search. State (v, t, f): node v, t slots
// elapsed since the start slot, f = 1 when entered by a transmission.
struct Workspace {
    std::vector<std::uint64_t> cost;
    std::vector<std::int32_t> parent;
    std::vector<std::uint32_t> depth;
    std::vector<LinkId> via;
};

thread_local Workspace tls_workspace;

class TwoLabel {
public:
    TwoLabel(const Tseg& tseg, NodeId src, NodeId dst, Slot i, int p, int horizon,
             const SearchOptions& opt, SearchStats* stats)
        : tseg_(tseg), topo_(tseg.topology()), src_(src), dst_(dst), start_(i), p_(p),
          horizon_(horizon), opt_(opt), stats_(stats), v_(topo_.node_count()),
          ws_(tls_workspace) {
        const auto n = v_ * static_cast<std::size_t>(horizon_) * 2;
        ws_.cost.assign(n, kInf);
        ws_.parent.assign(n, -1);
        ws_.depth.assign(n, 0);
        ws_.via.assign(n, LinkId{});
    }

    std::optional<PathResult> run() {
        const bool by_weight = opt_.objective == SearchObjective::Weight;
        ws_.cost[id(src_, 0, 0)] = 0;
        count_label();
        std::int64_t best = -1;

        for (int t = 0; t < horizon_; ++t) {
            const std::uint64_t bound = best >= 0 ? ws_.cost[best] : kInf;
            if (t > 0) {
                for (std::size_t v = 0; v < v_; ++v) {
                    const auto node = static_cast<NodeId>(v);
                    if (node == dst_) {
                        continue;
                    }
                    for (int f = 0; f < 2; ++f) {
                        const auto from = id(node, t - 1, f);
                        if (ws_.cost[from] == kInf || ws_.cost[from] >= bound) {
                            continue;
                        }
                        count_relax();
                        relax(id(node, t, 0), from, ws_.cost[from], LinkId{});
                    }
                }
            }
            const Copy probe{LinkId{}, tseg_.config().wrap(static_cast<std::int64_t>(start_) + t)};
            for (std::size_t v = 0; v < v_; ++v) {
                const auto node = static_cast<NodeId>(v);
                const auto from = id(node, t, 0);
                if (node == dst_ || ws_.cost[from] == kInf || ws_.cost[from] >= bound) {
                    continue;
                }
                for (const LinkId link : topo_.out_links(node)) {
                    if (!route_allows(opt_, node, link)) {
                        continue;
                    }
                    count_relax();
                    const Copy c{link, probe.slot};
                    if (!tseg_.is_free(c) || !tseg_.supports(c, p_)) {
                        continue;
                    }
                    const auto step = by_weight ? tseg_.weight(c) : 1;
                    relax(id(topo_.link(link).dst, t, 1), from, ws_.cost[from] + step, link);
                }
            }
            const auto arrived = id(dst_, t, 1);
            if (ws_.cost[arrived] != kInf && (best < 0 || ws_.cost[arrived] < ws_.cost[best])) {
                best = static_cast<std::int64_t>(arrived);
                if (!by_weight) {
                    break; // later layers only add delay
                }
            }
        }
        if (best < 0) {
            return std::nullopt;
        }
        return extract(static_cast<std::size_t>(best));
    }

private:
    std::size_t id(NodeId v, int t, int f) const {
        return ((static_cast<std::size_t>(t) * v_) + index(v)) * 2 + static_cast<std::size_t>(f);
    }
    NodeId node_of(std::size_t s) const { return static_cast<NodeId>((s / 2) % v_); }
    int time_of(std::size_t s) const { return static_cast<int>(s / (2 * v_)); }

    void count_label() {
        if (stats_) {
            ++stats_->labels;
        }
    }
    void count_relax() {
        if (stats_) {
            ++stats_->relaxations;
        }
    }

    // Lexicographic comparison of the node-name sequences leading to a and b.
    bool seq_less(std::size_t a, std::size_t b) const {
        if (a == b) {
            return false;
        }
        auto x = a;
        auto y = b;
        while (ws_.depth[x] > ws_.depth[y]) {
            x = static_cast<std::size_t>(ws_.parent[x]);
        }
        while (ws_.depth[y] > ws_.depth[x]) {
            y = static_cast<std::size_t>(ws_.parent[y]);
        }
        if (x == y) {
            return ws_.depth[a] < ws_.depth[b]; // prefix sorts first
        }
        while (ws_.parent[x] != ws_.parent[y]) {
            x = static_cast<std::size_t>(ws_.parent[x]);
            y = static_cast<std::size_t>(ws_.parent[y]);
        }
        // Distinct children of one state always sit on distinct nodes.
        return topo_.name_rank(node_of(x)) < topo_.name_rank(node_of(y));
    }

    void relax(std::size_t to, std::size_t from, std::uint64_t cost, LinkId link) {
        auto& cur = ws_.cost[to];
        if (cur != kInf &&
            (cost > cur || (cost == cur && !seq_less(from, static_cast<std::size_t>(ws_.parent[to]))))) {
            return;
        }
        cur = cost;
        ws_.parent[to] = static_cast<std::int32_t>(from);
        ws_.depth[to] = ws_.depth[from] + 1;
        ws_.via[to] = link;
        count_label();
    }

    PathResult extract(std::size_t best) const {
        const auto& cfg = tseg_.config();
        PathResult r;
        r.start_slot = start_;
        for (auto s = best; ws_.parent[s] >= 0; s = static_cast<std::size_t>(ws_.parent[s])) {
            const auto prev = static_cast<std::size_t>(ws_.parent[s]);
            const int t = time_of(s);
            if (s % 2 == 1) {
                r.path.push_back(PathEdge{EdgeKind::Transmission, node_of(prev), node_of(s),
                                          cfg.wrap(static_cast<std::int64_t>(start_) + t),
                                          ws_.via[s]});
            } else {
                const Slot tail = cfg.wrap(static_cast<std::int64_t>(start_) + t - 1);
                const auto kind =
                    tail == cfg.hyper_period() ? EdgeKind::InterHyperPeriod : EdgeKind::Caching;
                r.path.push_back(PathEdge{kind, node_of(s), node_of(s), tail, LinkId{}});
            }
        }
        std::reverse(r.path.begin(), r.path.end());
        r.weight = path_weight(tseg_, r.path);
        r.delay = path_delay(r.path);
        r.hops = transmission_count(r.path);
        return r;
    }

    const Tseg& tseg_;
    const Topology& topo_;
    NodeId src_;
    NodeId dst_;
    Slot start_;
    int p_;
    int horizon_;
    const SearchOptions& opt_;
    SearchStats* stats_;
    std::size_t v_;
    Workspace& ws_;
};

// One label per expanded-graph vertex, heap order, parent-slot rule for
// alternation. Can miss feasible or cheaper paths; results are validated.
std::optional<PathResult> single_label(const Tseg& tseg, NodeId src, NodeId dst, Slot i, int p,
                                       int m, const SearchOptions& opt, SearchStats* stats) {
    const auto& topo = tseg.topology();
    const auto& cfg = tseg.config();
    const int n = cfg.hyper_period();
    const bool by_weight = opt.objective == SearchObjective::Weight;
    const auto count = topo.node_count() * static_cast<std::size_t>(n);
    auto vid = [n](NodeId v, Slot q) {
        return index(v) * static_cast<std::size_t>(n) + static_cast<std::size_t>(q - 1);
    };

    using Key = std::pair<std::uint64_t, std::uint64_t>;
    constexpr Key kNone{kInf, kInf};
    std::vector<Key> h(count, kNone);
    std::vector<std::int64_t> parent(count, -1);
    std::vector<Slot> parent_slot(count, 0);
    std::vector<int> elapsed(count, 0);
    std::vector<LinkId> via(count, LinkId{});
    std::vector<bool> done(count, false);

    // (key, name rank, slot, vertex)
    using Entry = std::tuple<Key, std::uint32_t, Slot, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    const auto root = vid(src, i);
    h[root] = {0, 0};
    parent_slot[root] = i - 1; // virtual parent s_{i-1}
    heap.emplace(h[root], topo.name_rank(src), i, root);
    if (stats) {
        ++stats->labels;
    }

    auto relax = [&](std::size_t to, std::size_t from, Key key, int el, LinkId link, Slot from_slot) {
        if (stats) {
            ++stats->relaxations;
        }
        if (done[to] || key > h[to]) {
            return;
        }
        h[to] = key;
        parent[to] = static_cast<std::int64_t>(from);
        parent_slot[to] = from_slot;
        elapsed[to] = el;
        via[to] = link;
        heap.emplace(key, topo.name_rank(static_cast<NodeId>(to / static_cast<std::size_t>(n))),
                     static_cast<Slot>(to % static_cast<std::size_t>(n)) + 1, to);
        if (stats) {
            ++stats->labels;
        }
    };

    std::int64_t found = -1;
    while (!heap.empty()) {
        const auto [key, rank, q, u] = heap.top();
        heap.pop();
        if (done[u] || key != h[u]) {
            continue;
        }
        done[u] = true;
        const auto node = static_cast<NodeId>(u / static_cast<std::size_t>(n));
        if (node == dst) {
            found = static_cast<std::int64_t>(u);
            break;
        }
        if (elapsed[u] + 1 <= m - 1) {
            const Slot next = q == n ? 1 : q + 1;
            const Key k = by_weight ? Key{key.first, key.second + 1} : Key{key.first + 1, key.second};
            relax(vid(node, next), u, k, elapsed[u] + 1, LinkId{}, q);
        }
        if (parent_slot[u] == q) {
            continue; // entered by a transmission in this slot
        }
        for (const LinkId link : topo.out_links(node)) {
            if (!route_allows(opt, node, link)) {
                continue;
            }
            const Copy c{link, q};
            if (!tseg.is_free(c) || !tseg.supports(c, p)) {
                continue;
            }
            const Key k = by_weight ? Key{key.first + tseg.weight(c), key.second}
                                    : Key{key.first, key.second + 1};
            relax(vid(topo.link(link).dst, q), u, k, elapsed[u], link, q);
        }
    }
    if (found < 0) {
        return std::nullopt;
    }

    PathResult r;
    r.start_slot = i;
    for (auto u = static_cast<std::size_t>(found); parent[u] >= 0;
         u = static_cast<std::size_t>(parent[u])) {
        const auto from = static_cast<std::size_t>(parent[u]);
        const auto a = static_cast<NodeId>(from / static_cast<std::size_t>(n));
        const auto b = static_cast<NodeId>(u / static_cast<std::size_t>(n));
        const Slot tail = static_cast<Slot>(from % static_cast<std::size_t>(n)) + 1;
        if (a != b) {
            r.path.push_back(PathEdge{EdgeKind::Transmission, a, b, tail, via[u]});
        } else {
            const auto kind = tail == n ? EdgeKind::InterHyperPeriod : EdgeKind::Caching;
            r.path.push_back(PathEdge{kind, a, b, tail, LinkId{}});
        }
    }
    std::reverse(r.path.begin(), r.path.end());

    // The per-vertex label cannot see self-collisions among periodic replicas.
    const FlowRequest probe{"probe", 1, topo.node(src).name, topo.node(dst).name, p, m};
    try {
        (void)make_assignment(probe, i, r.path, topo, cfg);
    } catch (const ConfigError&) {
        return std::nullopt;
    }
    r.weight = path_weight(tseg, r.path);
    r.delay = path_delay(r.path);
    r.hops = transmission_count(r.path);
    return r;
}

} // namespace

std::uint64_t path_weight(const Tseg& tseg, std::span<const PathEdge> path) {
    std::uint64_t w = 0;
    for (const auto& e : path) {
        if (e.kind == EdgeKind::Transmission) {
            w += tseg.weight(Copy{e.link, e.slot});
        }
    }
    return w;
}

std::optional<PathResult> min_weight_path(const Tseg& tseg, NodeId src, NodeId dst, Slot i, int p,
                                          int m, const SearchOptions& options, SearchStats* stats) {
    const auto& cfg = tseg.config();
    if (!cfg.supports(p) || i < 1 || i > p || m < 1 || src == dst) {
        return std::nullopt;
    }
    if (stats) {
        ++stats->searches;
    }
    if (options.mode == LabelMode::SingleLabel) {
        return single_label(tseg, src, dst, i, p, m, options, stats);
    }
    // Waiting a whole hyper-period at one node never helps, so a simple path
    // never needs more than |V| * N elapsed slots.
    const auto cap = static_cast<std::int64_t>(tseg.topology().node_count()) * cfg.hyper_period();
    const int horizon = static_cast<int>(std::min<std::int64_t>(m, cap));
    return TwoLabel(tseg, src, dst, i, p, horizon, options, stats).run();
}

} // namespace ttsched
