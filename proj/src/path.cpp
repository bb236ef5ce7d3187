#include "ttsched/path.hpp"

#include "ttsched/errors.hpp"

#include <algorithm>
#include <sstream>

namespace ttsched {

int path_delay(std::span<const PathEdge> path) {
    int waits = 0;
    for (const auto& e : path) {
        if (e.kind != EdgeKind::Transmission) {
            ++waits;
        }
    }
    return waits + 1;
}

int transmission_count(std::span<const PathEdge> path) {
    return static_cast<int>(std::count_if(path.begin(), path.end(), [](const PathEdge& e) {
        return e.kind == EdgeKind::Transmission;
    }));
}

std::vector<Slot> replica_slots(Slot q, int p, int n) {
    std::vector<Slot> out;
    const int first = ((q - 1) % p) + 1;
    for (int s = first; s <= n; s += p) {
        out.push_back(s);
    }
    return out;
}

Assignment make_assignment(const FlowRequest& flow, Slot start_slot, std::vector<PathEdge> path,
                           const Topology& topo, const SlotConfig& cfg) {
    const int n = cfg.hyper_period();
    const int p = flow.period_slots;
    auto fail = [&](const std::string& why) {
        throw ConfigError("flow " + flow.id + ": " + why);
    };
    if (!cfg.supports(p)) {
        fail("period not in the configured set");
    }
    if (start_slot < 1 || start_slot > p) {
        fail("start slot " + std::to_string(start_slot) + " outside [1, period]");
    }
    if (path.empty()) {
        fail("empty path");
    }
    const NodeId src = topo.at(flow.src);
    const NodeId dst = topo.at(flow.dst);

    NodeId at = src;
    Slot slot = start_slot;
    bool entered_by_tx = false;
    std::vector<Copy> replicas;
    for (const auto& e : path) {
        if (e.from != at || e.slot != slot) {
            fail("path is not contiguous");
        }
        switch (e.kind) {
        case EdgeKind::Transmission: {
            if (entered_by_tx) {
                fail("two consecutive transmission edges");
            }
            if (index(e.link) >= topo.link_count() || topo.link(e.link).src != e.from ||
                topo.link(e.link).dst != e.to) {
                fail("transmission edge does not match its link");
            }
            for (const Slot r : replica_slots(e.slot, p, n)) {
                replicas.push_back(Copy{e.link, r});
            }
            entered_by_tx = true;
            break;
        }
        case EdgeKind::Caching:
            if (e.to != e.from || e.slot >= n) {
                fail("malformed caching edge");
            }
            entered_by_tx = false;
            slot = e.slot + 1;
            break;
        case EdgeKind::InterHyperPeriod:
            if (e.to != e.from || e.slot != n) {
                fail("malformed inter-hyper-period edge");
            }
            entered_by_tx = false;
            slot = 1;
            break;
        }
        at = e.to;
    }
    if (at != dst || path.back().kind != EdgeKind::Transmission) {
        fail("path does not end with a transmission into the destination");
    }
    std::sort(replicas.begin(), replicas.end());
    if (std::adjacent_find(replicas.begin(), replicas.end()) != replicas.end()) {
        fail("path collides with its own periodic replicas");
    }
    return Assignment{flow, start_slot, std::move(path), std::move(replicas)};
}

std::string describe_path(std::span<const PathEdge> path, const Topology& topo) {
    std::ostringstream out;
    if (path.empty()) {
        return "";
    }
    out << topo.node(path.front().from).name << '@' << path.front().slot;
    for (const auto& e : path) {
        Slot head = e.slot;
        const char* arrow = " -tx-> ";
        if (e.kind == EdgeKind::Caching) {
            head = e.slot + 1;
            arrow = " -c-> ";
        } else if (e.kind == EdgeKind::InterHyperPeriod) {
            head = 1;
            arrow = " -w-> ";
        }
        out << arrow << topo.node(e.to).name << '@' << head;
    }
    return out.str();
}

} // namespace ttsched
