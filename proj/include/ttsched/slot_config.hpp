#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ttsched {

/// Slot index inside one hyper-period, 1-based: [1, N].
using Slot = int;

/// Least common multiple of the periods. Throws ConfigError for an empty set,
/// non-positive values, or overflow.
std::int64_t hyper_period(std::span<const std::int64_t> periods);

/// Exact conversion; throws ConfigError instead of rounding.
std::int64_t slots_from_micros(std::int64_t duration_us, std::int64_t slot_len_us);

/// Slot length, the supported period set (ascending, unique, in slots) and
/// the hyper-period length N.
class SlotConfig {
public:
    static SlotConfig from_slots(std::vector<int> periods, int slot_len_us = 12);
    static SlotConfig from_micros(std::span<const std::int64_t> periods_us, int slot_len_us);

    int hyper_period() const { return n_; }
    std::span<const int> periods() const { return periods_; }
    int slot_len_us() const { return slot_len_us_; }

    /// Position of `p` in periods(), if supported.
    std::optional<std::size_t> period_index(int p) const;
    bool supports(int p) const { return period_index(p).has_value(); }

    /// Maps any integer onto the cyclic slot range [1, N].
    Slot wrap(std::int64_t slot) const {
        const auto r = (slot - 1) % n_;
        return static_cast<Slot>((r < 0 ? r + n_ : r) + 1);
    }

    bool operator==(const SlotConfig&) const = default;

private:
    SlotConfig(std::vector<int> periods, int slot_len_us);

    std::vector<int> periods_;
    int slot_len_us_ = 12;
    int n_ = 1;
};

} // namespace ttsched
