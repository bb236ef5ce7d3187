#pragma once

#include "ttsched/search.hpp"
#include "ttsched/tseg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ttsched {

/// Outcome of one online scheduling call. Rejection is a normal outcome.
struct Decision {
    std::optional<Assignment> assignment;
    std::uint64_t weight = 0; // path weight at decision time
    std::string reason;       // set on rejection
    std::string warning;      // non-fatal notes (e.g. capped enumeration)

    bool admitted() const { return assignment.has_value(); }
};

/// Best path per start slot i in [1, p]; entry i-1 is empty when no feasible
/// path starts in slot i.
std::vector<std::optional<PathResult>> candidate_paths(const Tseg& tseg, const FlowRequest& flow,
                                                       const SearchOptions& options = {},
                                                       SearchStats* stats = nullptr);

/// Picks the best candidate: for the weight objective the smallest weight,
/// then the smaller start slot; for the delay objective the smallest delay,
/// then fewer hops, then the smaller start slot.
std::optional<PathResult> best_candidate(std::span<const std::optional<PathResult>> candidates,
                                         SearchObjective objective);

/// Online joint routing and scheduling: searches every start slot, occupies
/// the best path and returns it, or rejects.
Decision schedule(Tseg& tseg, const FlowRequest& flow, const SearchOptions& options = {},
                  SearchStats* stats = nullptr);

/// Occupies `best` for `flow` and fills in the decision.
Decision admit(Tseg& tseg, const FlowRequest& flow, const PathResult& best);

} // namespace ttsched
