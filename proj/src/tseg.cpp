#include "ttsched/tseg.hpp"

#include "text_util.hpp"
#include "ttsched/errors.hpp"
#include "ttsched/weighting.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ttsched {

Occupancy::Occupancy(std::size_t link_count, int hyper_period)
    : links_(link_count), n_(hyper_period),
      bits_(link_count * static_cast<std::size_t>(hyper_period), false) {}

std::size_t Occupancy::busy_count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

Tseg::Tseg(Topology topo, SlotConfig cfg, WeightConfig weights)
    : topo_(std::move(topo)), cfg_(std::move(cfg)), weights_(weights) {
    validate(weights_, cfg_);
    const auto full = to_mask(cfg_.periods(), cfg_);
    const auto w = edge_weight(full, cfg_, weights_.alpha_base);
    states_.assign(topo_.link_count() * static_cast<std::size_t>(cfg_.hyper_period()),
                   EdgeState{-1, full, w});
}

std::size_t Tseg::vertex_count() const {
    return topo_.node_count() * static_cast<std::size_t>(cfg_.hyper_period());
}

std::size_t Tseg::free_copy_count() const {
    return static_cast<std::size_t>(std::count_if(states_.begin(), states_.end(),
                                                  [](const EdgeState& s) { return !s.occupied(); }));
}

std::size_t Tseg::caching_edge_count() const {
    return topo_.node_count() * static_cast<std::size_t>(cfg_.hyper_period() - 1);
}

std::size_t Tseg::inter_hyper_edge_count() const { return topo_.node_count(); }

bool Tseg::supports(Copy c, int period) const {
    const auto idx = cfg_.period_index(period);
    return idx && (state(c).support & (PeriodMask{1} << *idx));
}

std::vector<int> Tseg::support_periods(Copy c) const { return to_periods(state(c).support, cfg_); }

std::optional<std::string_view> Tseg::occupant(Copy c) const {
    const auto& st = state(c);
    if (!st.occupied()) {
        return std::nullopt;
    }
    return std::string_view(owner_names_[static_cast<std::size_t>(st.owner)]);
}

OccupyReport Tseg::occupy(Assignment assignment) {
    const auto& id = assignment.flow.id;
    if (admitted_.contains(id)) {
        throw ConflictError("flow " + id + " is already admitted");
    }
    for (const Copy c : assignment.replicas) {
        if (index(c.link) >= topo_.link_count() || c.slot < 1 || c.slot > cfg_.hyper_period()) {
            throw ConflictError("flow " + id + ": copy outside the expanded graph");
        }
        if (!is_free(c)) {
            const auto& l = topo_.link(c.link);
            throw ConflictError("flow " + id + ": copy " + topo_.node(l.src).name + "->" +
                                topo_.node(l.dst).name + "@" + std::to_string(c.slot) +
                                " is occupied by " + std::string(*occupant(c)));
        }
    }
    const std::set<Copy> unique(assignment.replicas.begin(), assignment.replicas.end());
    if (unique.size() != assignment.replicas.size()) {
        throw ConflictError("flow " + id + ": duplicate replicas");
    }

    const auto owner = static_cast<std::int32_t>(owner_names_.size());
    owner_names_.push_back(id);
    for (const Copy c : assignment.replicas) {
        mutable_state(c).owner = owner;
    }
    OccupyReport report;
    report.removed = assignment.replicas;
    report.changed = update_on_occupy(*this, report.removed);
    admitted_.emplace(id, std::move(assignment));
    return report;
}

void Tseg::release(std::string_view flow_id) {
    const auto it = admitted_.find(flow_id);
    if (it == admitted_.end()) {
        throw UnknownFlowError("flow " + std::string(flow_id) + " is not admitted");
    }
    std::set<LinkId> links;
    for (const Copy c : it->second.replicas) {
        mutable_state(c).owner = -1;
        links.insert(c.link);
    }
    admitted_.erase(it);
    for (const LinkId l : links) {
        recompute_link(*this, l);
    }
}

bool Tseg::admitted(std::string_view flow_id) const { return admitted_.contains(flow_id); }

Occupancy Tseg::occupancy() const {
    Occupancy occ(topo_.link_count(), cfg_.hyper_period());
    for (std::size_t l = 0; l < topo_.link_count(); ++l) {
        for (Slot q = 1; q <= cfg_.hyper_period(); ++q) {
            const Copy c{static_cast<LinkId>(l), q};
            if (!is_free(c)) {
                occ.mark(c);
            }
        }
    }
    return occ;
}

bool Tseg::same_state(const Tseg& other) const {
    if (!(topo_ == other.topo_) || !(cfg_ == other.cfg_) ||
        weights_.alpha_base != other.weights_.alpha_base || states_.size() != other.states_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < states_.size(); ++i) {
        const auto& a = states_[i];
        const auto& b = other.states_[i];
        if (a.occupied() != b.occupied() || a.support != b.support || a.weight != b.weight) {
            return false;
        }
        if (a.occupied() && owner_names_[static_cast<std::size_t>(a.owner)] !=
                                other.owner_names_[static_cast<std::size_t>(b.owner)]) {
            return false;
        }
    }
    return admitted_ == other.admitted_;
}

std::vector<GateRow> gate_rows(const Tseg& tseg) {
    std::vector<GateRow> rows;
    const auto& topo = tseg.topology();
    for (std::size_t l = 0; l < topo.link_count(); ++l) {
        const auto link = static_cast<LinkId>(l);
        for (Slot q = 1; q <= tseg.hyper_period(); ++q) {
            if (const auto who = tseg.occupant(Copy{link, q})) {
                rows.push_back(GateRow{topo.node(topo.link(link).src).name,
                                       topo.node(topo.link(link).dst).name, q, std::string(*who)});
            }
        }
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

std::string export_gate_table(const Tseg& tseg) {
    std::ostringstream out;
    out << "link_src,link_dst,slot,flow_id\n";
    for (const auto& r : gate_rows(tseg)) {
        out << r.link_src << ',' << r.link_dst << ',' << r.slot << ',' << r.flow_id << '\n';
    }
    return out.str();
}

std::vector<GateRow> parse_gate_table(std::string_view text) {
    const auto rows = text::lines(text);
    if (rows.empty() || text::trim(rows[0]) != "link_src,link_dst,slot,flow_id") {
        throw ParseError("gate table must start with header 'link_src,link_dst,slot,flow_id'");
    }
    std::vector<GateRow> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto row = text::trim(rows[i]);
        if (row.empty()) {
            continue;
        }
        const auto f = text::split(row, ',');
        if (f.size() != 4) {
            throw ParseError("gate table line " + std::to_string(i + 1) + ": expected 4 fields");
        }
        out.push_back(GateRow{std::string(text::trim(f[0])), std::string(text::trim(f[1])),
                              text::to_int<int>(f[2], "slot"), std::string(text::trim(f[3]))});
    }
    return out;
}

} // namespace ttsched
