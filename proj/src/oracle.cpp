#include "ttsched/oracle.hpp"

#include "ttsched/errors.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

namespace ttsched {

namespace {

using Bits = std::vector<std::uint64_t>;

bool overlaps(const Bits& a, const Bits& b) {
    for (std::size_t w = 0; w < a.size(); ++w) {
        if (a[w] & b[w]) {
            return true;
        }
    }
    return false;
}

struct Hop {
    LinkId link;
    std::int64_t time; // unwrapped slot
};

class Enumerator {
public:
    Enumerator(const Tseg& tseg, const FlowRequest& flow, std::size_t cap)
        : tseg_(tseg), topo_(tseg.topology()), cfg_(tseg.config()), n_(cfg_.hyper_period()),
          p_(flow.period_slots), m_(flow.max_delay_slots), cap_(cap), src_(topo_.at(flow.src)),
          dst_(topo_.at(flow.dst)),
          words_((topo_.link_count() * static_cast<std::size_t>(n_) + 63) / 64),
          on_path_(topo_.node_count(), false), bits_(words_, 0) {}

    std::vector<Placement> run() {
        on_path_[index(src_)] = true;
        for (Slot i = 1; i <= p_; ++i) {
            start_ = i;
            for (const LinkId l : topo_.out_links(src_)) {
                step(l, i);
            }
        }
        return std::move(out_);
    }

private:
    // Takes every replica of (link, time) or returns false without change.
    bool take(LinkId link, std::int64_t time, std::vector<std::size_t>& taken) {
        for (const Slot r : replica_slots(cfg_.wrap(time), p_, n_)) {
            const Copy c{link, r};
            const auto bit = index(link) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(r - 1);
            if (!tseg_.is_free(c) || (bits_[bit / 64] >> (bit % 64)) & 1U) {
                for (const auto b : taken) {
                    bits_[b / 64] &= ~(std::uint64_t{1} << (b % 64));
                }
                taken.clear();
                return false;
            }
            bits_[bit / 64] |= std::uint64_t{1} << (bit % 64);
            taken.push_back(bit);
        }
        return true;
    }

    void step(LinkId link, std::int64_t time) {
        const NodeId to = topo_.link(link).dst;
        if (on_path_[index(to)]) {
            return;
        }
        std::vector<std::size_t> taken;
        if (!take(link, time, taken)) {
            return;
        }
        hops_.push_back(Hop{link, time});
        if (to == dst_) {
            record();
        } else {
            on_path_[index(to)] = true;
            for (int g = 1; g <= p_ && time + g - start_ + 1 <= m_; ++g) {
                for (const LinkId l : topo_.out_links(to)) {
                    step(l, time + g);
                }
            }
            on_path_[index(to)] = false;
        }
        hops_.pop_back();
        for (const auto b : taken) {
            bits_[b / 64] &= ~(std::uint64_t{1} << (b % 64));
        }
    }

    void record() {
        if (!seen_.insert(bits_).second) {
            return;
        }
        if (out_.size() == cap_) {
            throw LimitError("flow has more than " + std::to_string(cap_) + " placements");
        }
        Placement pl;
        pl.start_slot = start_;
        pl.copies = bits_;
        for (const auto w : bits_) {
            pl.size += std::popcount(w);
        }
        for (std::size_t h = 0; h < hops_.size(); ++h) {
            const auto& hop = hops_[h];
            const auto& link = topo_.link(hop.link);
            if (h > 0) {
                for (auto t = hops_[h - 1].time; t < hop.time; ++t) {
                    const Slot tail = cfg_.wrap(t);
                    pl.path.push_back(PathEdge{tail == n_ ? EdgeKind::InterHyperPeriod : EdgeKind::Caching,
                                               link.src, link.src, tail, LinkId{}});
                }
            }
            pl.path.push_back(PathEdge{EdgeKind::Transmission, link.src, link.dst, cfg_.wrap(hop.time), hop.link});
        }
        out_.push_back(std::move(pl));
    }

    const Tseg& tseg_;
    const Topology& topo_;
    const SlotConfig& cfg_;
    int n_;
    int p_;
    int m_;
    std::size_t cap_;
    NodeId src_;
    NodeId dst_;
    std::size_t words_;
    std::vector<bool> on_path_;
    Bits bits_;
    std::vector<Hop> hops_;
    Slot start_ = 1;
    std::set<Bits> seen_;
    std::vector<Placement> out_;
};

class BranchAndBound {
public:
    BranchAndBound(std::vector<std::vector<Placement>> placements, std::size_t words,
                   std::uint64_t node_limit)
        : pl_(std::move(placements)), used_(words, 0), node_limit_(node_limit),
          chosen_(pl_.size(), nullptr), best_choice_(pl_.size(), nullptr) {}

    void run() { solve(0, 0); }
    int best() const { return best_; }
    std::uint64_t nodes() const { return nodes_; }
    const std::vector<const Placement*>& choice() const { return best_choice_; }

private:
    bool fits(const Placement& p) const { return !overlaps(p.copies, used_); }

    void apply(const Placement& p, bool on) {
        for (std::size_t w = 0; w < used_.size(); ++w) {
            used_[w] = on ? (used_[w] | p.copies[w]) : (used_[w] & ~p.copies[w]);
        }
    }

    void solve(std::size_t idx, int count) {
        if (++nodes_ > node_limit_) {
            throw LimitError("exact search exceeded " + std::to_string(node_limit_) + " nodes");
        }
        if (idx == pl_.size()) {
            if (count > best_) {
                best_ = count;
                best_choice_ = chosen_;
            }
            return;
        }
        int room = 0;
        for (std::size_t j = idx; j < pl_.size(); ++j) {
            if (std::any_of(pl_[j].begin(), pl_[j].end(), [this](const Placement& p) { return fits(p); })) {
                ++room;
            }
        }
        const int bound = count + room;
        if (bound <= best_) {
            return;
        }
        for (const auto& p : pl_[idx]) {
            if (!fits(p)) {
                continue;
            }
            apply(p, true);
            chosen_[idx] = &p;
            solve(idx + 1, count + 1);
            chosen_[idx] = nullptr;
            apply(p, false);
            if (best_ >= bound) {
                return;
            }
        }
        solve(idx + 1, count);
    }

    std::vector<std::vector<Placement>> pl_;
    Bits used_;
    std::uint64_t node_limit_;
    std::uint64_t nodes_ = 0;
    int best_ = 0;
    std::vector<const Placement*> chosen_;
    std::vector<const Placement*> best_choice_;
};

} // namespace

std::vector<Placement> enumerate_placements(const Tseg& tseg, const FlowRequest& flow,
                                            std::size_t cap) {
    validate(flow, tseg.config(), tseg.topology());
    return Enumerator(tseg, flow, cap).run();
}

OracleResult oracle_solve(const Tseg& tseg, std::span<const FlowRequest> flows,
                          const OracleLimits& limits) {
    const auto& topo = tseg.topology();
    const auto& cfg = tseg.config();
    if (topo.node_count() > limits.max_nodes || cfg.hyper_period() > limits.max_hyper_period ||
        flows.size() > limits.max_flows) {
        throw LimitError("instance exceeds exact-solver limits (|V|=" + std::to_string(topo.node_count()) +
                         ", N=" + std::to_string(cfg.hyper_period()) + ", |F|=" +
                         std::to_string(flows.size()) + ")");
    }

    // Scarce (short-period) flows first.
    std::vector<std::size_t> order(flows.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return flows[a].period_slots < flows[b].period_slots;
    });

    std::vector<std::vector<Placement>> placements;
    for (const auto k : order) {
        auto pl = enumerate_placements(tseg, flows[k], limits.max_placements_per_flow);
        std::stable_sort(pl.begin(), pl.end(),
                         [](const Placement& a, const Placement& b) { return a.size < b.size; });
        placements.push_back(std::move(pl));
    }
    const std::size_t words = (topo.link_count() * static_cast<std::size_t>(cfg.hyper_period()) + 63) / 64;
    BranchAndBound bb(std::move(placements), words, limits.max_search_nodes);
    bb.run();

    OracleResult r;
    r.optimum = bb.best();
    r.search_nodes = bb.nodes();
    for (std::size_t j = 0; j < order.size(); ++j) {
        if (const auto* p = bb.choice()[j]) {
            r.witness.push_back(make_assignment(flows[order[j]], p->start_slot, p->path, topo, cfg));
        }
    }
    return r;
}

} // namespace ttsched
