#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "uniqjif/ingest.hpp"
#include "uniqjif/metrics.hpp"
#include "uniqjif/model.hpp"

namespace uniqjif {

/// xorshift64*: state ^= state >> 12; state ^= state << 25;
/// state ^= state >> 27; output = state * 0x2545F4914F6CDD1D. The initial
/// state is one SplitMix64 output for the user seed, replaced by
/// 0x9E3779B97F4A7C15 in the (unreachable in practice) case it is zero.
class Xorshift64Star {
public:
    explicit Xorshift64Star(std::uint64_t seed);

    std::uint64_t next();

    /// Uniform in [0, bound) by rejection: draws below 2^64 mod bound are
    /// discarded, the result is draw % bound.
    std::uint64_t uniform(std::uint64_t bound);

    /// Uniform double in [0, 1) from the top 53 bits of one draw.
    double unit();

private:
    std::uint64_t state_;
};

struct YearRange {
    int first = 0;
    int last = 0;  // inclusive
};

struct SynthConfig {
    std::uint64_t seed = 1;
    int n_journals = 1;
    YearRange years;
    int articles_per_journal_year = 1;
    int citing_docs_per_year = 1;
    int refs_per_doc = 1;
    double citable_fraction = 1.0;

    /// Throws Error(InvalidConfig).
    void validate() const;
};

struct StackingSpec {
    JournalId target;
    int n_stacking_docs = 1;
    int refs_per_stacking_doc = 2;
    int citing_year = 0;
    int window = 2;

    /// Throws Error(InvalidConfig).
    void validate() const;
};

struct Dataset {
    std::vector<PublicationRecord> publications;
    std::vector<CitationRecord> citations;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Deterministic synthetic dataset. Draw order: for each journal, year and
/// article (in that nesting) one unit() draw decides citable (< fraction);
/// then for each year and citing document, refs_per_doc distinct articles are
/// drawn with uniform(total_articles), redrawing repeats.
Dataset generate(const SynthConfig& config);

/// Adds n_stacking_docs fresh "stack-" documents, each citing
/// refs_per_stacking_doc distinct window articles of the target. Throws
/// Error(InvalidConfig) or Error(TargetTooSmall).
Dataset inject_stacking(Dataset dataset, const StackingSpec& spec);

/// Naive re-derivation of every journal's metrics straight from raw records:
/// first-wins article table, pair dedup, join, and per-journal scans. Meant
/// as an oracle for desk-scale inputs.
std::vector<JournalMetrics> brute_force_metrics(std::span<const PublicationRecord> publications,
                                                std::span<const CitationRecord> citations,
                                                const MetricsConfig& config);

/// Reads a JSON config. Keys mirror SynthConfig; the year range is given as
/// "years": [first, last] or "first_year"/"last_year". An optional "stacking"
/// array holds StackingSpec objects. Throws Error(InvalidConfig).
struct SynthPlan {
    SynthConfig config;
    std::vector<StackingSpec> stacking;
};
SynthPlan synth_plan_from_json(const nlohmann::json& doc);

/// Parses "TARGET:DOCS:REFS:YEAR[:WINDOW]". Throws Error(InvalidConfig).
StackingSpec parse_stacking_spec(std::string_view text);

/// Writers for the ingest CSV and JSONL formats.
void write_publications(std::ostream& out, std::span<const PublicationRecord> records,
                        InputFormat format = InputFormat::Csv);
void write_citations(std::ostream& out, std::span<const CitationRecord> records,
                     InputFormat format = InputFormat::Csv);

}  // namespace uniqjif
