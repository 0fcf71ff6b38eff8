#include "uniqjif/analysis.hpp"

#include <algorithm>

#include "uniqjif/error.hpp"

namespace uniqjif {

RatioDistribution build_distribution(std::span<const JournalMetrics> metrics) {
    RatioDistribution dist;
    for (const auto& m : metrics) {
        if (m.ratio) {
            dist.entries.push_back({m.journal, *m.ratio});
        } else {
            ++dist.excluded;
        }
    }
    std::sort(dist.entries.begin(), dist.entries.end(), [](const RatioEntry& a, const RatioEntry& b) {
        if (a.ratio != b.ratio) return a.ratio < b.ratio;
        return a.journal < b.journal;
    });

    const auto n = dist.entries.size();
    for (std::size_t i = 0; i < n; ++i) {
        // Emit once per run of equal ratios, at its last element.
        if (i + 1 < n && dist.entries[i + 1].ratio == dist.entries[i].ratio) continue;
        const double fraction =
            i + 1 == n ? 1.0 : static_cast<double>(i + 1) / static_cast<double>(n);
        dist.ecdf.push_back({dist.entries[i].ratio.to_double(), fraction});
    }
    return dist;
}

namespace {

std::vector<Rational> sorted_drops(std::span<const JournalMetrics> all) {
    std::vector<Rational> drops;
    for (const auto& m : all) {
        if (m.drop) drops.push_back(*m.drop);
    }
    std::sort(drops.begin(), drops.end());
    return drops;
}

Rational rank_in(const std::vector<Rational>& drops, const Rational& drop) {
    const auto above = drops.end() - std::upper_bound(drops.begin(), drops.end(), drop);
    return Rational(static_cast<std::uint64_t>(above), drops.size());
}

}  // namespace

Rational percentile_of_drop(const JournalMetrics& entry, std::span<const JournalMetrics> all) {
    if (!entry.drop) {
        throw Error(ErrorKind::UndefinedMetric, "drop undefined for " + entry.journal.str());
    }
    auto drops = sorted_drops(all);
    // The entry is part of its own population even if the caller left it out.
    const bool listed = std::any_of(all.begin(), all.end(),
                                    [&](const JournalMetrics& m) { return m.journal == entry.journal; });
    if (!listed) {
        drops.insert(std::upper_bound(drops.begin(), drops.end(), *entry.drop), *entry.drop);
    }
    return rank_in(drops, *entry.drop);
}

FlagReport flag_journals(std::span<const JournalMetrics> metrics, const FlagThresholds& thresholds) {
    thresholds.validate();
    FlagReport report;
    report.thresholds = thresholds;

    const auto drops = sorted_drops(metrics);
    report.considered = drops.size();
    report.excluded = metrics.size() - drops.size();

    for (const auto& m : metrics) {
        if (!m.drop) continue;
        const Rational rank = rank_in(drops, *m.drop);
        std::vector<FlagReason> reasons;
        if (m.drop->to_double() > thresholds.drop_threshold) reasons.push_back(FlagReason::DropThreshold);
        if (!m.drop->is_zero() && rank.to_double() < thresholds.top_fraction) {
            reasons.push_back(FlagReason::TopPercentile);
        }
        if (!reasons.empty()) report.flagged.push_back({m.journal, *m.drop, rank, std::move(reasons)});
    }
    std::sort(report.flagged.begin(), report.flagged.end(),
              [](const FlaggedJournal& a, const FlaggedJournal& b) {
                  if (a.drop != b.drop) return a.drop > b.drop;
                  return a.journal < b.journal;
              });
    return report;
}

}  // namespace uniqjif
