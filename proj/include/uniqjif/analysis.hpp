#pragma once

#include <span>

#include "uniqjif/model.hpp"

namespace uniqjif {

/// ECDF of Uniq-JIF/JIF over journals with a defined ratio. The point at each
/// distinct ratio r is (r, |{ratio <= r}| / n).
RatioDistribution build_distribution(std::span<const JournalMetrics> metrics);

/// Fraction of journals with a defined drop whose drop is strictly greater
/// than `entry`'s; 0 means the largest drop. Throws Error(UndefinedMetric).
Rational percentile_of_drop(const JournalMetrics& entry, std::span<const JournalMetrics> all);

/// Flags journals with drop > drop_threshold (DropThreshold) or with
/// percentile rank < top_fraction and a non-zero drop (TopPercentile).
FlagReport flag_journals(std::span<const JournalMetrics> metrics,
                         const FlagThresholds& thresholds = {});

}  // namespace uniqjif
