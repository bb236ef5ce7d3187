#include "ttsched/slot_config.hpp"

#include "ttsched/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace ttsched {

std::int64_t hyper_period(std::span<const std::int64_t> periods) {
    if (periods.empty()) {
        throw ConfigError("period set must not be empty");
    }
    std::int64_t acc = 1;
    for (const auto p : periods) {
        if (p < 1) {
            throw ConfigError("period must be positive, got " + std::to_string(p));
        }
        const auto g = std::gcd(acc, p);
        if (acc / g > std::numeric_limits<std::int64_t>::max() / p) {
            throw ConfigError("hyper-period overflows");
        }
        acc = acc / g * p;
    }
    return acc;
}

std::int64_t slots_from_micros(std::int64_t duration_us, std::int64_t slot_len_us) {
    if (slot_len_us < 1) {
        throw ConfigError("slot length must be positive");
    }
    if (duration_us < 1 || duration_us % slot_len_us != 0) {
        throw ConfigError(std::to_string(duration_us) + " us is not a positive multiple of the " +
                          std::to_string(slot_len_us) + " us slot");
    }
    return duration_us / slot_len_us;
}

SlotConfig::SlotConfig(std::vector<int> periods, int slot_len_us)
    : periods_(std::move(periods)), slot_len_us_(slot_len_us) {
    if (slot_len_us_ < 1) {
        throw ConfigError("slot length must be positive");
    }
    std::sort(periods_.begin(), periods_.end());
    periods_.erase(std::unique(periods_.begin(), periods_.end()), periods_.end());
    if (periods_.size() > 64) {
        throw ConfigError("at most 64 distinct periods are supported");
    }
    const std::vector<std::int64_t> wide(periods_.begin(), periods_.end());
    const auto n = ttsched::hyper_period(wide);
    if (n > std::numeric_limits<int>::max() / 8) {
        throw ConfigError("hyper-period of " + std::to_string(n) + " slots is too large");
    }
    n_ = static_cast<int>(n);
}

SlotConfig SlotConfig::from_slots(std::vector<int> periods, int slot_len_us) {
    return SlotConfig(std::move(periods), slot_len_us);
}

SlotConfig SlotConfig::from_micros(std::span<const std::int64_t> periods_us, int slot_len_us) {
    std::vector<int> slots;
    for (const auto us : periods_us) {
        const auto s = slots_from_micros(us, slot_len_us);
        if (s > std::numeric_limits<int>::max()) {
            throw ConfigError("period too large");
        }
        slots.push_back(static_cast<int>(s));
    }
    return SlotConfig(std::move(slots), slot_len_us);
}

std::optional<std::size_t> SlotConfig::period_index(int p) const {
    const auto it = std::lower_bound(periods_.begin(), periods_.end(), p);
    if (it == periods_.end() || *it != p) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - periods_.begin());
}

} // namespace ttsched
