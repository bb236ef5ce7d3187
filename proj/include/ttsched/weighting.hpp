#pragma once

#include "ttsched/tseg.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ttsched {

/// Throws ConfigError unless alpha >= 2 and every weight over `cfg` fits in
/// 64 bits.
void validate(const WeightConfig& wc, const SlotConfig& cfg);

/// Sum over p in `periods` of alpha^(N/p); zero for the empty set.
/// Every p must divide N.
std::uint64_t edge_weight(std::span<const int> periods, int n, std::uint64_t alpha);
std::uint64_t edge_weight(PeriodMask mask, const SlotConfig& cfg, std::uint64_t alpha);

PeriodMask to_mask(std::span<const int> periods, const SlotConfig& cfg);
std::vector<int> to_periods(PeriodMask mask, const SlotConfig& cfg);

/// Periods p such that the copy and every replica (same link, slot congruent
/// mod p) are free. Computed from the occupancy alone; empty when the copy
/// itself is occupied.
PeriodMask supported_mask(const Tseg& tseg, Copy c);
std::vector<int> supported_periods(const Tseg& tseg, Copy c);

/// Incremental update after `removed` copies were taken: for every removed
/// copy and every period p it supported, p leaves the support set of each
/// surviving copy congruent to it mod p. Weights of touched copies are
/// recomputed. Returns the copies whose support set changed.
std::vector<Copy> update_on_occupy(Tseg& tseg, std::span<const Copy> removed);

/// Recomputes support sets and weights of every copy of `link` from scratch.
void recompute_link(Tseg& tseg, LinkId link);

/// Sum of the weights of all free transmission copies.
std::uint64_t total_weight(const Tseg& tseg);

} // namespace ttsched
