#pragma once

#include "ttsched/path.hpp"
#include "ttsched/slot_config.hpp"
#include "ttsched/topology.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ttsched {

/// Bit j set <=> cfg.periods()[j] is in the set.
using PeriodMask = std::uint64_t;

/// Base of the exponential edge weight; any integer >= 2.
struct WeightConfig {
    std::uint64_t alpha_base = 2;
};

/// State of one transmission-edge copy. An occupied copy is absent from the
/// expanded graph: empty support set, zero weight.
struct EdgeState {
    std::int32_t owner = -1;
    PeriodMask support = 0;
    std::uint64_t weight = 0;

    bool occupied() const { return owner >= 0; }
    bool operator==(const EdgeState&) const = default;
};

/// Busy/free bitmap over all (link, slot) copies, detached from any Tseg.
class Occupancy {
public:
    Occupancy(std::size_t link_count, int hyper_period);

    bool busy(Copy c) const { return bits_[offset(c)]; }
    void mark(Copy c) { bits_[offset(c)] = true; }
    std::size_t link_count() const { return links_; }
    int hyper_period() const { return n_; }
    std::size_t busy_count() const;

private:
    std::size_t offset(Copy c) const {
        return index(c.link) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(c.slot - 1);
    }

    std::size_t links_;
    int n_;
    std::vector<bool> bits_;
};

struct OccupyReport {
    std::vector<Copy> removed; // copies taken by the new flow
    std::vector<Copy> changed; // surviving copies whose support set shrank
};

class Tseg;
std::vector<Copy> update_on_occupy(Tseg& tseg, std::span<const Copy> removed);

/// Time-slot expanded graph over one hyper-period.
///
/// Vertices are (node, slot) pairs. Transmission-edge copies exist per
/// (link, slot) while unoccupied; caching edges (u_q, u_{q+1}) and the
/// inter-hyper-period edges (u_N, u_1) are implicit, always present, free of
/// charge and of unbounded capacity. Each free copy carries its supported
/// period set and the matching weight, kept equal to a from-scratch
/// computation across occupy() and release().
///
/// Single writer: mutate from one thread; copies are independent values.
class Tseg {
public:
    Tseg(Topology topo, SlotConfig cfg, WeightConfig weights = {});

    const Topology& topology() const { return topo_; }
    const SlotConfig& config() const { return cfg_; }
    const WeightConfig& weight_config() const { return weights_; }
    int hyper_period() const { return cfg_.hyper_period(); }

    std::size_t vertex_count() const;
    std::size_t free_copy_count() const;
    std::size_t caching_edge_count() const;
    std::size_t inter_hyper_edge_count() const;

    const EdgeState& state(Copy c) const { return states_[offset(c)]; }
    bool is_free(Copy c) const { return !state(c).occupied(); }
    std::uint64_t weight(Copy c) const { return state(c).weight; }
    bool supports(Copy c, int period) const;
    std::vector<int> support_periods(Copy c) const;
    std::optional<std::string_view> occupant(Copy c) const;

    /// Marks every replica of the assignment occupied, then updates support
    /// sets and weights. All-or-nothing: throws ConflictError (state
    /// unchanged) if any replica is already taken or the flow id is admitted.
    OccupyReport occupy(Assignment assignment);

    /// Frees the flow's replicas and recomputes the affected support sets.
    /// Throws UnknownFlowError if the flow is not admitted.
    void release(std::string_view flow_id);

    bool admitted(std::string_view flow_id) const;
    const std::map<std::string, Assignment, std::less<>>& assignments() const { return admitted_; }
    Occupancy occupancy() const;

    /// Structural equality of the observable state (occupancy owners by id,
    /// support sets, weights, admitted assignments).
    bool same_state(const Tseg& other) const;

private:
    friend std::vector<Copy> update_on_occupy(Tseg&, std::span<const Copy>);
    friend void recompute_link(Tseg&, LinkId);

    std::size_t offset(Copy c) const {
        return index(c.link) * static_cast<std::size_t>(cfg_.hyper_period()) +
               static_cast<std::size_t>(c.slot - 1);
    }
    EdgeState& mutable_state(Copy c) { return states_[offset(c)]; }

    Topology topo_;
    SlotConfig cfg_;
    WeightConfig weights_;
    std::vector<EdgeState> states_;
    std::vector<std::string> owner_names_;
    std::map<std::string, Assignment, std::less<>> admitted_;
};

/// Gate table CSV: header `link_src,link_dst,slot,flow_id`, one row per
/// occupied copy, rows sorted by (link_src, link_dst, slot, flow_id).
struct GateRow {
    std::string link_src;
    std::string link_dst;
    Slot slot = 1;
    std::string flow_id;

    auto operator<=>(const GateRow&) const = default;
};

std::vector<GateRow> gate_rows(const Tseg& tseg);
std::string export_gate_table(const Tseg& tseg);
std::vector<GateRow> parse_gate_table(std::string_view text);

} // namespace ttsched
