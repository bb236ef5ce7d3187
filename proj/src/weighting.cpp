#include "ttsched/weighting.hpp"

#include "ttsched/errors.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

namespace ttsched {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

// alpha^exp, or nullopt on overflow.
std::optional<std::uint64_t> checked_pow(std::uint64_t alpha, int exp) {
    std::uint64_t acc = 1;
    for (int i = 0; i < exp; ++i) {
        if (acc > kMax / alpha) {
            return std::nullopt;
        }
        acc *= alpha;
    }
    return acc;
}

} // namespace

void validate(const WeightConfig& wc, const SlotConfig& cfg) {
    if (wc.alpha_base < 2) {
        throw ConfigError("weight base must be at least 2");
    }
    std::uint64_t sum = 0;
    for (const int p : cfg.periods()) {
        const auto term = checked_pow(wc.alpha_base, cfg.hyper_period() / p);
        if (!term || *term > kMax - sum) {
            throw ConfigError("edge weights overflow 64 bits for base " +
                              std::to_string(wc.alpha_base) + " and hyper-period " +
                              std::to_string(cfg.hyper_period()));
        }
        sum += *term;
    }
}

std::uint64_t edge_weight(std::span<const int> periods, int n, std::uint64_t alpha) {
    std::uint64_t w = 0;
    for (const int p : periods) {
        const auto term = checked_pow(alpha, n / p);
        if (!term || *term > kMax - w) {
            throw ConfigError("edge weight overflows 64 bits");
        }
        w += *term;
    }
    return w;
}

std::uint64_t edge_weight(PeriodMask mask, const SlotConfig& cfg, std::uint64_t alpha) {
    const auto periods = to_periods(mask, cfg);
    return edge_weight(periods, cfg.hyper_period(), alpha);
}

PeriodMask to_mask(std::span<const int> periods, const SlotConfig& cfg) {
    PeriodMask mask = 0;
    for (const int p : periods) {
        const auto idx = cfg.period_index(p);
        if (!idx) {
            throw ConfigError("period " + std::to_string(p) + " is not configured");
        }
        mask |= PeriodMask{1} << *idx;
    }
    return mask;
}

std::vector<int> to_periods(PeriodMask mask, const SlotConfig& cfg) {
    std::vector<int> out;
    for (std::size_t j = 0; j < cfg.periods().size(); ++j) {
        if (mask & (PeriodMask{1} << j)) {
            out.push_back(cfg.periods()[j]);
        }
    }
    return out;
}

PeriodMask supported_mask(const Tseg& tseg, Copy c) {
    if (!tseg.is_free(c)) {
        return 0;
    }
    const auto& cfg = tseg.config();
    PeriodMask mask = 0;
    for (std::size_t j = 0; j < cfg.periods().size(); ++j) {
        const int p = cfg.periods()[j];
        bool all_free = true;
        for (const Slot r : replica_slots(c.slot, p, cfg.hyper_period())) {
            if (!tseg.is_free(Copy{c.link, r})) {
                all_free = false;
                break;
            }
        }
        if (all_free) {
            mask |= PeriodMask{1} << j;
        }
    }
    return mask;
}

std::vector<int> supported_periods(const Tseg& tseg, Copy c) {
    return to_periods(supported_mask(tseg, c), tseg.config());
}

std::vector<Copy> update_on_occupy(Tseg& tseg, std::span<const Copy> removed) {
    const auto& cfg = tseg.config();
    const int n = cfg.hyper_period();
    const auto alpha = tseg.weight_config().alpha_base;
    std::vector<Copy> touched;

    for (const Copy r : removed) {
        auto& gone = tseg.mutable_state(r);
        const PeriodMask former = gone.support;
        gone.support = 0;
        gone.weight = 0;
        for (std::size_t j = 0; j < cfg.periods().size(); ++j) {
            const PeriodMask bit = PeriodMask{1} << j;
            if (!(former & bit)) {
                continue;
            }
            for (const Slot q : replica_slots(r.slot, cfg.periods()[j], n)) {
                const Copy partner{r.link, q};
                auto& st = tseg.mutable_state(partner);
                if (st.occupied() || !(st.support & bit)) {
                    continue;
                }
                st.support &= ~bit;
                touched.push_back(partner);
            }
        }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (const Copy c : touched) {
        auto& st = tseg.mutable_state(c);
        st.weight = edge_weight(st.support, cfg, alpha);
    }
    return touched;
}

void recompute_link(Tseg& tseg, LinkId link) {
    const auto& cfg = tseg.config();
    for (Slot q = 1; q <= cfg.hyper_period(); ++q) {
        const Copy c{link, q};
        const PeriodMask mask = supported_mask(tseg, c);
        auto& st = tseg.mutable_state(c);
        st.support = mask;
        st.weight = edge_weight(mask, cfg, tseg.weight_config().alpha_base);
    }
}

std::uint64_t total_weight(const Tseg& tseg) {
    std::uint64_t sum = 0;
    const auto links = tseg.topology().link_count();
    for (std::size_t l = 0; l < links; ++l) {
        for (Slot q = 1; q <= tseg.hyper_period(); ++q) {
            sum += tseg.weight(Copy{static_cast<LinkId>(l), q});
        }
    }
    return sum;
}

} // namespace ttsched
