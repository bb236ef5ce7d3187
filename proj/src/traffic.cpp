#include "ttsched/traffic.hpp"

#include "text_util.hpp"
#include "ttsched/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace ttsched {

namespace {

constexpr std::string_view kTraceHeader = "id,arrival_slot,src,dst,period_slots,deadline_slots";

// Unbiased draw in [0, bound) straight from the engine so traces do not depend
// on the standard library's distribution implementation.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

} // namespace

void validate(const FlowRequest& flow, const SlotConfig& cfg, const Topology& topo) {
    const auto src = topo.find(flow.src);
    const auto dst = topo.find(flow.dst);
    if (!src || !dst) {
        throw ConfigError("flow " + flow.id + ": unknown endpoint");
    }
    if (*src == *dst) {
        throw ConfigError("flow " + flow.id + ": source equals destination");
    }
    if (!cfg.supports(flow.period_slots)) {
        throw ConfigError("flow " + flow.id + ": period " + std::to_string(flow.period_slots) +
                          " is not in the configured period set");
    }
    if (flow.max_delay_slots < 1) {
        throw ConfigError("flow " + flow.id + ": delay bound must be at least one slot");
    }
}

std::vector<int> class_counts(const TrafficProfile& profile) {
    if (profile.class_ratios.empty()) {
        throw ConfigError("traffic profile has no classes");
    }
    if (profile.flow_count < 0) {
        throw ConfigError("flow count must be non-negative");
    }
    double sum = 0.0;
    for (const double r : profile.class_ratios) {
        if (!(r >= 0.0)) {
            throw ConfigError("class ratios must be non-negative");
        }
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ConfigError("class ratios sum to " + text::format_double(sum) + ", expected 1");
    }
    const auto k = profile.class_ratios.size();
    std::vector<int> counts(k);
    int assigned = 0;
    for (std::size_t c = 0; c < k; ++c) {
        counts[c] = static_cast<int>(std::floor(profile.class_ratios[c] * profile.flow_count + 1e-9));
        assigned += counts[c];
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return profile.class_ratios[a] > profile.class_ratios[b];
    });
    for (std::size_t i = 0; assigned < profile.flow_count; i = (i + 1) % k) {
        ++counts[order[i]];
        ++assigned;
    }
    return counts;
}

std::vector<FlowRequest> generate_flows(const TrafficProfile& profile, const SlotConfig& cfg,
                                        const Topology& topo) {
    if (profile.class_ratios.size() != cfg.periods().size()) {
        throw ConfigError("traffic profile has " + std::to_string(profile.class_ratios.size()) +
                          " classes but the configuration has " +
                          std::to_string(cfg.periods().size()) + " periods");
    }
    const auto counts = class_counts(profile);

    std::vector<NodeId> eligible;
    for (std::size_t i = 0; i < topo.node_count(); ++i) {
        const auto id = static_cast<NodeId>(i);
        if (profile.endpoints == EndpointPolicy::AnyNode || topo.node(id).kind != NodeKind::Switch) {
            eligible.push_back(id);
        }
    }
    if (eligible.size() < 2 && profile.flow_count > 0) {
        throw ConfigError("fewer than two eligible flow endpoints");
    }

    std::vector<std::size_t> classes;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        classes.insert(classes.end(), static_cast<std::size_t>(counts[c]), c);
    }
    std::mt19937_64 rng(profile.seed);
    for (std::size_t i = classes.size(); i > 1; --i) {
        std::swap(classes[i - 1], classes[draw_below(rng, i)]);
    }

    std::vector<FlowRequest> flows;
    flows.reserve(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const auto s = draw_below(rng, eligible.size());
        auto d = draw_below(rng, eligible.size() - 1);
        if (d >= s) {
            ++d;
        }
        const int period = cfg.periods()[classes[i]];
        flows.push_back(FlowRequest{
            .id = "f" + std::to_string(i + 1),
            .arrival_slot = static_cast<std::int64_t>(i + 1),
            .src = topo.node(eligible[s]).name,
            .dst = topo.node(eligible[d]).name,
            .period_slots = period,
            .max_delay_slots = 4 * period,
        });
    }
    return flows;
}

std::string format_trace_csv(std::span<const FlowRequest> flows) {
    std::ostringstream out;
    out << kTraceHeader << '\n';
    for (const auto& f : flows) {
        out << f.id << ',' << f.arrival_slot << ',' << f.src << ',' << f.dst << ','
            << f.period_slots << ',' << f.max_delay_slots << '\n';
    }
    return out.str();
}

std::vector<FlowRequest> parse_trace_csv(std::string_view text) {
    const auto rows = text::lines(text);
    if (rows.empty() || text::trim(rows[0]) != kTraceHeader) {
        throw ParseError("flow trace must start with header '" + std::string(kTraceHeader) + "'");
    }
    std::vector<FlowRequest> flows;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto row = text::trim(rows[i]);
        if (row.empty()) {
            continue;
        }
        const auto f = text::split(row, ',');
        if (f.size() != 6) {
            throw ParseError("flow trace line " + std::to_string(i + 1) + ": expected 6 fields");
        }
        flows.push_back(FlowRequest{
            .id = std::string(text::trim(f[0])),
            .arrival_slot = text::to_int<std::int64_t>(f[1], "arrival_slot"),
            .src = std::string(text::trim(f[2])),
            .dst = std::string(text::trim(f[3])),
            .period_slots = text::to_int<int>(f[4], "period_slots"),
            .max_delay_slots = text::to_int<int>(f[5], "deadline_slots"),
        });
    }
    return flows;
}

} // namespace ttsched
