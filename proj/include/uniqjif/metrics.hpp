#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uniqjif/ingest.hpp"
#include "uniqjif/model.hpp"

namespace uniqjif {

/// Which cited items count towards the citation and unique-citer numerators.
/// AllItems follows the conventional JIF numerator; CitableOnly restricts to
/// items that also count in the denominator.
enum class NumeratorScope { AllItems, CitableOnly };

std::string_view to_string(NumeratorScope scope);

struct MetricsConfig {
    int census_year = 0;
    int window = 2;  // publication years census_year-1 .. census_year-window
    NumeratorScope scope = NumeratorScope::AllItems;

    /// Throws Error(InvalidConfig).
    void validate() const;

    bool in_window(int pub_year) const noexcept {
        return pub_year < census_year && pub_year >= census_year - window;
    }
};

/// Unique citing documents per citable item. Throws Error(ZeroDenominator)
/// when n_citable is zero.
Rational uniq_jif_generic(std::uint64_t n_unique_citing, std::uint64_t n_citable);

/// Citable items of `journal` published in census_year-window .. census_year-1.
std::uint64_t count_pub(const JournalId& journal, int census_year, int window,
                        const PublicationTable& publications);

/// Citations made in the census year to the journal's items in the window.
std::uint64_t count_cit(const JournalId& journal, const MetricsConfig& config,
                        std::span<const ResolvedCitation> citations);

/// Distinct citing documents among the citations counted by count_cit. A
/// document citing several window articles of the journal counts once.
std::uint64_t count_ucit(const JournalId& journal, const MetricsConfig& config,
                         std::span<const ResolvedCitation> citations);

JournalMetrics compute_journal_metrics(const JournalId& journal, const MetricsConfig& config,
                                       const PublicationTable& publications,
                                       std::span<const ResolvedCitation> citations);

/// Metrics for every journal in the publication table, sorted by journal id.
/// With threads > 1 the journals are partitioned across workers; the output
/// does not depend on the thread count.
std::vector<JournalMetrics> compute_all(const MetricsConfig& config,
                                        const PublicationTable& publications,
                                        std::span<const ResolvedCitation> citations,
                                        unsigned threads = 1);

}  // namespace uniqjif
