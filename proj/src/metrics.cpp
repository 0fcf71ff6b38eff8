#include "uniqjif/metrics.hpp"

#include <algorithm>
#include <limits>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "uniqjif/error.hpp"

namespace uniqjif {

std::string_view to_string(NumeratorScope scope) {
    return scope == NumeratorScope::AllItems ? "all" : "citable";
}

void MetricsConfig::validate() const {
    if (!valid_year(census_year)) {
        throw Error(ErrorKind::InvalidConfig, "census year " + std::to_string(census_year) +
                                                  " outside [" + std::to_string(kMinYear) + ", " +
                                                  std::to_string(kMaxYear) + "]");
    }
    if (window < 1) throw Error(ErrorKind::InvalidConfig, "window must be at least 1");
}

Rational uniq_jif_generic(std::uint64_t n_unique_citing, std::uint64_t n_citable) {
    if (n_citable == 0) throw Error(ErrorKind::ZeroDenominator, "no citable items");
    return Rational(n_unique_citing, n_citable);
}

std::uint64_t count_pub(const JournalId& journal, int census_year, int window,
                        const PublicationTable& publications) {
    const MetricsConfig window_only{census_year, window, NumeratorScope::AllItems};
    return static_cast<std::uint64_t>(
        std::count_if(publications.records().begin(), publications.records().end(),
                      [&](const PublicationRecord& p) {
                          return p.citable && p.journal == journal && window_only.in_window(p.pub_year);
                      }));
}

namespace {

bool counts(const ResolvedCitation& c, const MetricsConfig& config) {
    return c.citing_year == config.census_year && config.in_window(c.cited_pub_year) &&
           (config.scope == NumeratorScope::AllItems || c.cited_citable);
}

}  // namespace

std::uint64_t count_cit(const JournalId& journal, const MetricsConfig& config,
                        std::span<const ResolvedCitation> citations) {
    return static_cast<std::uint64_t>(
        std::count_if(citations.begin(), citations.end(), [&](const ResolvedCitation& c) {
            return c.cited_journal == journal && counts(c, config);
        }));
}

std::uint64_t count_ucit(const JournalId& journal, const MetricsConfig& config,
                         std::span<const ResolvedCitation> citations) {
    std::unordered_set<std::string_view> citing;
    for (const auto& c : citations) {
        if (c.cited_journal == journal && counts(c, config)) citing.insert(c.citing_doc_id);
    }
    return citing.size();
}

JournalMetrics compute_journal_metrics(const JournalId& journal, const MetricsConfig& config,
                                       const PublicationTable& publications,
                                       std::span<const ResolvedCitation> citations) {
    config.validate();
    return make_journal_metrics(journal, config.census_year, count_cit(journal, config, citations),
                                count_ucit(journal, config, citations),
                                count_pub(journal, config.census_year, config.window, publications));
}

std::vector<JournalMetrics> compute_all(const MetricsConfig& config,
                                        const PublicationTable& publications,
                                        std::span<const ResolvedCitation> citations,
                                        unsigned threads) {
    config.validate();
    const std::vector<JournalId> journals = publications.journals();
    if (journals.empty()) return {};

    std::unordered_map<std::string_view, std::uint32_t> slot;
    slot.reserve(journals.size());
    for (std::size_t i = 0; i < journals.size(); ++i) {
        slot.emplace(journals[i].str(), static_cast<std::uint32_t>(i));
    }

    std::vector<std::uint64_t> pub_count(journals.size(), 0);
    for (const auto& p : publications.records()) {
        if (p.citable && config.in_window(p.pub_year)) ++pub_count[slot.at(p.journal.str())];
    }

    // Journal slot of every citation that counts; kSkip otherwise. Citations
    // resolved through the fallback may name journals outside the table.
    constexpr auto kSkip = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> target(citations.size(), kSkip);
    for (std::size_t i = 0; i < citations.size(); ++i) {
        if (!counts(citations[i], config)) continue;
        const auto it = slot.find(citations[i].cited_journal.str());
        if (it != slot.end()) target[i] = it->second;
    }

    std::vector<std::uint64_t> cit_count(journals.size(), 0);
    std::vector<std::uint64_t> ucit_count(journals.size(), 0);
    const unsigned workers =
        std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(journals.size())));

    // Worker w owns the journals whose slot is congruent to w, so the
    // accumulators never alias across threads.
    auto accumulate = [&](unsigned w) {
        std::unordered_map<std::uint32_t, std::unordered_set<std::string_view>> citing;
        for (std::size_t i = 0; i < citations.size(); ++i) {
            const auto j = target[i];
            if (j == kSkip || j % workers != w) continue;
            ++cit_count[j];
            citing[j].insert(citations[i].citing_doc_id);
        }
        for (const auto& [j, docs] : citing) ucit_count[j] = docs.size();
    };

    if (workers == 1) {
        accumulate(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(accumulate, w);
    }

    std::vector<JournalMetrics> out;
    out.reserve(journals.size());
    for (std::size_t j = 0; j < journals.size(); ++j) {
        out.push_back(make_journal_metrics(journals[j], config.census_year, cit_count[j],
                                           ucit_count[j], pub_count[j]));
    }
    return out;
}

}  // namespace uniqjif
