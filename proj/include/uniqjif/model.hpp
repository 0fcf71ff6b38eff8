#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uniqjif {

inline constexpr int kMinYear = 1500;
inline constexpr int kMaxYear = 2200;

constexpr bool valid_year(int year) noexcept { return year >= kMinYear && year <= kMaxYear; }

/// Trims ASCII whitespace and lower-cases. Used for article and document ids,
/// so DOI-style identifiers compare case-insensitively.
std::string normalize_id(std::string_view raw);

/// Opaque journal identifier. Normalized by trimming and folding to upper case
/// (the ISSN convention, e.g. "1234-567X"). Never empty.
class JournalId {
public:
    explicit JournalId(std::string_view raw);

    const std::string& str() const noexcept { return id_; }

    friend bool operator==(const JournalId&, const JournalId&) = default;
    friend auto operator<=>(const JournalId&, const JournalId&) = default;

private:
    std::string id_;
};

/// Exact non-negative fraction, always stored reduced.
class Rational {
public:
    Rational(std::uint64_t num, std::uint64_t den);

    std::uint64_t num() const noexcept { return num_; }
    std::uint64_t den() const noexcept { return den_; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    bool is_zero() const noexcept { return num_ == 0; }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
        const auto lhs = static_cast<unsigned __int128>(a.num_) * b.den_;
        const auto rhs = static_cast<unsigned __int128>(b.num_) * a.den_;
        return lhs <=> rhs;
    }

private:
    std::uint64_t num_;
    std::uint64_t den_;
};

struct PublicationRecord {
    JournalId journal;
    std::string article_id;
    int pub_year = 0;
    bool citable = true;
    std::string doc_type;

    friend bool operator==(const PublicationRecord&, const PublicationRecord&) = default;
};

struct CitationRecord {
    std::string citing_doc_id;
    int citing_year = 0;
    std::string cited_article_id;
    // Denormalized fallback, used only when the article is missing from the
    // publication table.
    std::optional<JournalId> cited_journal;
    std::optional<int> cited_year;

    friend bool operator==(const CitationRecord&, const CitationRecord&) = default;
};

struct ResolvedCitation {
    std::string citing_doc_id;
    int citing_year = 0;
    std::string cited_article_id;
    JournalId cited_journal;
    int cited_pub_year = 0;
    bool cited_citable = true;

    friend bool operator==(const ResolvedCitation&, const ResolvedCitation&) = default;
};

/// Per-journal, per-census-year bundle. A metric is std::nullopt when it is
/// undefined: jif/uniq_jif need pub_count > 0, ratio/drop need jif > 0.
struct JournalMetrics {
    JournalId journal;
    int census_year = 0;
    std::uint64_t cit_count = 0;
    std::uint64_t ucit_count = 0;
    std::uint64_t pub_count = 0;
    std::optional<Rational> jif;
    std::optional<Rational> uniq_jif;
    std::optional<Rational> ratio;
    std::optional<Rational> drop;

    friend bool operator==(const JournalMetrics&, const JournalMetrics&) = default;
};

/// Derives jif, uniq_jif, ratio and drop from the three counts.
/// Throws Error(InvalidArgument) if ucit_count > cit_count.
JournalMetrics make_journal_metrics(JournalId journal, int census_year, std::uint64_t cit_count,
                                    std::uint64_t ucit_count, std::uint64_t pub_count);

struct RatioEntry {
    JournalId journal;
    Rational ratio;
};

struct EcdfPoint {
    double ratio = 0.0;
    double cumulative_fraction = 0.0;
};

struct RatioDistribution {
    std::vector<RatioEntry> entries;  // ascending by ratio, ties by journal id
    std::vector<EcdfPoint> ecdf;      // one point per distinct ratio
    std::size_t excluded = 0;         // journals whose ratio is undefined
};

enum class FlagReason { DropThreshold, TopPercentile };

std::string_view to_string(FlagReason reason);

struct FlagThresholds {
    double drop_threshold = 0.30;
    double top_fraction = 0.05;

    void validate() const;
};

struct FlaggedJournal {
    JournalId journal;
    Rational drop;
    Rational percentile_rank;
    std::vector<FlagReason> reasons;  // sorted, no duplicates
};

struct FlagReport {
    std::vector<FlaggedJournal> flagged;  // drop descending, ties by journal id
    FlagThresholds thresholds;
    std::size_t considered = 0;  // journals with defined drop
    std::size_t excluded = 0;    // journals with undefined drop
};

}  // namespace uniqjif
