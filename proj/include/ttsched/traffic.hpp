#pragma once

#include "ttsched/slot_config.hpp"
#include "ttsched/topology.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ttsched {

/// A periodic time-triggered flow, all times in slots.
struct FlowRequest {
    std::string id;
    std::int64_t arrival_slot = 1;
    std::string src;
    std::string dst;
    int period_slots = 1;
    int max_delay_slots = 1;

    bool operator==(const FlowRequest&) const = default;
};

/// Throws ConfigError unless src != dst, both exist, the period is in the
/// configured set and the delay bound is at least one slot.
void validate(const FlowRequest& flow, const SlotConfig& cfg, const Topology& topo);

enum class EndpointPolicy { AnyNode, EndSystemsOnly };

/// Traffic mix: one ratio per configured period (ascending period order).
struct TrafficProfile {
    std::vector<double> class_ratios{0.2, 0.2, 0.3, 0.3};
    int flow_count = 100;
    EndpointPolicy endpoints = EndpointPolicy::AnyNode;
    std::uint64_t seed = 1;
};

/// Per-class flow counts: floor(ratio * count) each, remainder handed out one
/// by one to classes in descending ratio order (ties: smaller period first).
std::vector<int> class_counts(const TrafficProfile& profile);

/// Seeded random trace. Arrival slots are 1, 2, 3, ... in emission order and
/// each flow's delay bound is four times its period.
std::vector<FlowRequest> generate_flows(const TrafficProfile& profile, const SlotConfig& cfg,
                                        const Topology& topo);

/// CSV with header `id,arrival_slot,src,dst,period_slots,deadline_slots`.
std::string format_trace_csv(std::span<const FlowRequest> flows);
std::vector<FlowRequest> parse_trace_csv(std::string_view text);

} // namespace ttsched
