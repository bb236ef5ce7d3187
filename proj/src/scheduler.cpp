#include "ttsched/scheduler.hpp"

#include "ttsched/errors.hpp"

#include <stdexcept>
#include <tuple>

namespace ttsched {

std::vector<std::optional<PathResult>> candidate_paths(const Tseg& tseg, const FlowRequest& flow,
                                                       const SearchOptions& options,
                                                       SearchStats* stats) {
    const auto& topo = tseg.topology();
    validate(flow, tseg.config(), topo);
    const NodeId src = topo.at(flow.src);
    const NodeId dst = topo.at(flow.dst);
    std::vector<std::optional<PathResult>> out;
    out.reserve(static_cast<std::size_t>(flow.period_slots));
    for (Slot i = 1; i <= flow.period_slots; ++i) {
        out.push_back(min_weight_path(tseg, src, dst, i, flow.period_slots, flow.max_delay_slots,
                                      options, stats));
    }
    return out;
}

std::optional<PathResult> best_candidate(std::span<const std::optional<PathResult>> candidates,
                                         SearchObjective objective) {
    const PathResult* best = nullptr;
    auto key = [objective](const PathResult& r) {
        return objective == SearchObjective::Weight
                   ? std::tuple<std::uint64_t, std::uint64_t, Slot>{r.weight, 0, r.start_slot}
                   : std::tuple<std::uint64_t, std::uint64_t, Slot>{
                         static_cast<std::uint64_t>(r.delay), static_cast<std::uint64_t>(r.hops),
                         r.start_slot};
    };
    for (const auto& c : candidates) {
        if (c && (!best || key(*c) < key(*best))) {
            best = &*c;
        }
    }
    if (!best) {
        return std::nullopt;
    }
    return *best;
}

Decision admit(Tseg& tseg, const FlowRequest& flow, const PathResult& best) {
    Decision d;
    d.weight = best.weight;
    auto a = make_assignment(flow, best.start_slot, best.path, tseg.topology(), tseg.config());
    try {
        tseg.occupy(a);
    } catch (const ConflictError& e) {
        // The search only returns free copies; reaching this is a bug.
        throw std::logic_error(std::string("scheduler produced a conflicting path: ") + e.what());
    }
    d.assignment = std::move(a);
    return d;
}

Decision schedule(Tseg& tseg, const FlowRequest& flow, const SearchOptions& options,
                  SearchStats* stats) {
    const auto candidates = candidate_paths(tseg, flow, options, stats);
    const auto best = best_candidate(candidates, options.objective);
    if (!best) {
        Decision d;
        d.reason = "No feasible path!";
        return d;
    }
    return admit(tseg, flow, *best);
}

} // namespace ttsched
