#include "ttsched/verifier.hpp"

#include <algorithm>
#include <sstream>

namespace ttsched {

std::string render(const Violation& v) {
    std::ostringstream out;
    out << "EQ" << v.family << ": ";
    for (std::size_t i = 0; i < v.indices.size(); ++i) {
        out << (i ? "," : "") << v.indices[i];
    }
    out << ": " << v.message;
    return out.str();
}

FlowUsage usage_of(const Assignment& a, const SlotConfig& cfg) {
    FlowUsage u;
    u.flow = a.flow;
    const int p = a.flow.period_slots;
    for (int shift = 0; shift < cfg.hyper_period(); shift += p) {
        for (const auto& e : a.path) {
            const Slot q = cfg.wrap(static_cast<std::int64_t>(e.slot) + shift);
            if (e.kind == EdgeKind::Transmission) {
                ++u.tx[Copy{e.link, q}];
            } else {
                ++u.wait[{e.from, q}];
            }
        }
    }
    u.frame_delay = a.delay();
    return u;
}

std::vector<Violation> verify_usage(const Topology& topo, const SlotConfig& cfg,
                                    std::span<const FlowUsage> flows, const Occupancy* background) {
    std::vector<Violation> out;
    const int n = cfg.hyper_period();
    const std::size_t nodes = topo.node_count();
    auto cell = [n](std::size_t v, Slot q) {
        return v * static_cast<std::size_t>(n) + static_cast<std::size_t>(q - 1);
    };
    std::map<Copy, int> total;
    if (background) {
        for (std::size_t l = 0; l < topo.link_count(); ++l) {
            for (Slot q = 1; q <= n; ++q) {
                const Copy c{static_cast<LinkId>(l), q};
                if (background->busy(c)) {
                    total[c] += 1;
                }
            }
        }
    }

    for (std::size_t k = 0; k < flows.size(); ++k) {
        const auto& u = flows[k];
        const auto& f = u.flow;
        const auto fk = static_cast<std::int64_t>(k + 1);
        const auto src = topo.at(f.src);
        const auto dst = topo.at(f.dst);
        const int p = f.period_slots;

        std::vector<int> in(nodes * n, 0), outgoing(nodes * n, 0), wait(nodes * n, 0);
        for (const auto& [c, x] : u.tx) {
            const auto& link = topo.link(c.link);
            in[cell(index(link.dst), c.slot)] += x;
            outgoing[cell(index(link.src), c.slot)] += x;
            total[c] += x;
        }
        long long waiting_total = 0;
        for (const auto& [vq, x] : u.wait) {
            wait[cell(index(vq.first), vq.second)] += x;
            waiting_total += x;
        }

        for (std::size_t v = 0; v < nodes; ++v) {
            if (static_cast<NodeId>(v) == src || static_cast<NodeId>(v) == dst) {
                continue;
            }
            for (Slot q = 1; q <= n; ++q) {
                const std::vector<std::int64_t> idx{static_cast<std::int64_t>(v), q, fk};
                const int prev = wait[cell(v, cfg.wrap(q - 1))];
                if (in[cell(v, q)] > wait[cell(v, q)]) {
                    out.push_back(Violation{1, idx, "frame arriving at " + topo.node(static_cast<NodeId>(v)).name +
                                                        " is not held for the next slot"});
                }
                if (outgoing[cell(v, q)] > prev) {
                    out.push_back(Violation{2, idx, "frame leaving " + topo.node(static_cast<NodeId>(v)).name +
                                                        " was not held in the previous slot"});
                }
                if (prev + in[cell(v, q)] != wait[cell(v, q)] + outgoing[cell(v, q)]) {
                    out.push_back(Violation{2, idx, "frames not conserved at " +
                                                        topo.node(static_cast<NodeId>(v)).name});
                }
            }
        }

        int sent = 0;
        for (Slot q = 1; q <= n; ++q) {
            sent += outgoing[cell(index(src), q)];
        }
        if (sent > n / p) {
            out.push_back(Violation{3, {fk}, "source sends " + std::to_string(sent) +
                                                 " frames per hyper-period, limit " + std::to_string(n / p)});
        }

        if (p < n) {
            for (const auto& [c, x] : u.tx) {
                const Copy next{c.link, cfg.wrap(c.slot + p)};
                const auto it = u.tx.find(next);
                if (x != (it == u.tx.end() ? 0 : it->second)) {
                    const auto& link = topo.link(c.link);
                    out.push_back(Violation{5,
                                            {static_cast<std::int64_t>(index(link.src)),
                                             static_cast<std::int64_t>(index(link.dst)), c.slot, fk},
                                            "transmission not repeated one period later"});
                }
                // An absent predecessor never shows up in the map; look back too.
                const Copy before{c.link, cfg.wrap(c.slot - p)};
                if (!u.tx.contains(before)) {
                    const auto& link = topo.link(c.link);
                    out.push_back(Violation{5,
                                            {static_cast<std::int64_t>(index(link.src)),
                                             static_cast<std::int64_t>(index(link.dst)), before.slot, fk},
                                            "transmission not repeated one period earlier"});
                }
            }
        }

        const long long budget = static_cast<long long>(n / p) * (f.max_delay_slots - 1);
        const bool aggregate_ok = waiting_total <= budget;
        const bool frame_ok = !u.frame_delay || *u.frame_delay <= f.max_delay_slots;
        if (!aggregate_ok) {
            out.push_back(Violation{6, {fk}, "waiting total " + std::to_string(waiting_total) +
                                                 " exceeds budget " + std::to_string(budget) +
                                                 (frame_ok && u.frame_delay ? " (per-frame delay holds)" : "")});
        }
        if (!frame_ok) {
            out.push_back(Violation{6, {fk}, "frame delay " + std::to_string(*u.frame_delay) +
                                                 " exceeds " + std::to_string(f.max_delay_slots) +
                                                 (aggregate_ok ? " (aggregate budget holds)" : "")});
        }

        if (static_cast<long long>(n) - static_cast<long long>(p) * sent > 0) {
            out.push_back(Violation{7, {fk}, "only " + std::to_string(sent) + " of " +
                                                 std::to_string(n / p) + " frames leave the source"});
        }
    }

    for (const auto& [c, x] : total) {
        if (x > 1) {
            const auto& link = topo.link(c.link);
            out.push_back(Violation{4,
                                    {static_cast<std::int64_t>(index(link.src)),
                                     static_cast<std::int64_t>(index(link.dst)), c.slot},
                                    std::to_string(x) + " frames on " + topo.node(link.src).name + "->" +
                                        topo.node(link.dst).name + " in slot " + std::to_string(c.slot)});
        }
    }
    return out;
}

std::vector<Violation> verify_schedule(const Topology& topo, const SlotConfig& cfg,
                                       std::span<const Assignment> assignments,
                                       const Occupancy* background) {
    std::vector<FlowUsage> usage;
    usage.reserve(assignments.size());
    for (const auto& a : assignments) {
        usage.push_back(usage_of(a, cfg));
    }
    return verify_usage(topo, cfg, usage, background);
}

std::vector<Violation> verify_gate_table(const Topology& topo, const SlotConfig& cfg,
                                         std::span<const GateRow> rows,
                                         std::span<const FlowRequest> flows) {
    std::vector<Violation> out;
    const int n = cfg.hyper_period();
    std::map<std::string, std::map<Copy, int>, std::less<>> by_flow;
    for (const auto& r : rows) {
        const auto a = topo.find(r.link_src);
        const auto b = topo.find(r.link_dst);
        const auto l = a && b ? topo.link_between(*a, *b) : std::nullopt;
        if (!l || r.slot < 1 || r.slot > n) {
            out.push_back(Violation{4, {r.slot}, "row names no copy of the expanded graph: " +
                                                     r.link_src + "->" + r.link_dst});
            continue;
        }
        if (std::none_of(flows.begin(), flows.end(), [&](const FlowRequest& f) { return f.id == r.flow_id; })) {
            out.push_back(Violation{4, {r.slot}, "row for unknown flow " + r.flow_id});
            continue;
        }
        ++by_flow[r.flow_id][Copy{*l, r.slot}];
    }

    std::vector<FlowUsage> usage;
    for (const auto& f : flows) {
        const auto it = by_flow.find(f.id);
        if (it == by_flow.end()) {
            continue; // not scheduled
        }
        FlowUsage u;
        u.flow = f;
        u.tx = it->second;
        const auto src = topo.at(f.src);
        const auto dst = topo.at(f.dst);

        // First frame: the earliest transmission out of the source.
        std::optional<Copy> first;
        for (const auto& [c, x] : u.tx) {
            if (topo.link(c.link).src == src && (!first || c.slot < first->slot)) {
                first = c;
            }
        }
        std::vector<std::pair<NodeId, Slot>> waits;
        int delay = 1;
        bool complete = false;
        if (first) {
            NodeId at = topo.link(first->link).dst;
            Slot q = first->slot;
            for (std::size_t hop = 0; hop < topo.node_count() && at != dst; ++hop) {
                std::optional<std::pair<int, Copy>> next;
                for (const LinkId l : topo.out_links(at)) {
                    for (const auto& [c, x] : u.tx) {
                        if (c.link != l) {
                            continue;
                        }
                        const int gap = ((c.slot - q - 1) % n + n) % n + 1;
                        if (!next || gap < next->first) {
                            next = {gap, c};
                        }
                    }
                }
                if (!next) {
                    break;
                }
                for (int g = 0; g < next->first; ++g) {
                    waits.emplace_back(at, cfg.wrap(q + g));
                }
                delay += next->first;
                q = next->second.slot;
                at = topo.link(next->second.link).dst;
            }
            complete = at == dst;
        }
        for (int shift = 0; shift < n; shift += f.period_slots) {
            for (const auto& [v, s] : waits) {
                ++u.wait[{v, cfg.wrap(s + shift)}];
            }
        }
        if (complete) {
            u.frame_delay = delay;
        }
        usage.push_back(std::move(u));
    }
    auto rest = verify_usage(topo, cfg, usage);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

} // namespace ttsched
