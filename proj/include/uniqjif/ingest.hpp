#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "uniqjif/model.hpp"

namespace uniqjif {

enum class InputFormat { Auto, Csv, Jsonl };

enum class RejectReason { MalformedRow, YearOutOfRange, DuplicateArticle };

std::string_view to_string(RejectReason reason);

/// Row accounting for one ingest step. Exact duplicate citation pairs are
/// valid rows, so they count as accepted and are tallied again in
/// duplicate_pairs_removed.
struct IngestReport {
    std::uint64_t rows_read = 0;
    std::uint64_t rows_accepted = 0;
    std::uint64_t rows_rejected = 0;
    std::map<RejectReason, std::uint64_t> rejected_by_reason;
    std::uint64_t duplicate_pairs_removed = 0;
    std::uint64_t dangling_citations = 0;
    // Citations resolved from their own cited_journal_id/cited_year columns,
    // with citable=true assumed.
    std::uint64_t fallback_resolved = 0;

    void reject(RejectReason reason) {
        ++rows_rejected;
        ++rejected_by_reason[reason];
    }

    friend bool operator==(const IngestReport&, const IngestReport&) = default;
};

/// Publications keyed by normalized article id; the first record for an id wins.
class PublicationTable {
public:
    /// Returns false (and keeps the existing record) when the id is taken.
    bool insert(PublicationRecord record);

    const PublicationRecord* find(const std::string& article_id) const;
    const std::vector<PublicationRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    /// Distinct journals, sorted.
    std::vector<JournalId> journals() const;

private:
    std::vector<PublicationRecord> records_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct PublicationIngest {
    PublicationTable table;
    IngestReport report;
};

struct CitationIngest {
    std::vector<CitationRecord> citations;  // unique on (citing_doc_id, cited_article_id)
    IngestReport report;
};

struct Resolution {
    std::vector<ResolvedCitation> citations;
    IngestReport report;
};

/// Parses CSV (header required, RFC-4180 quoting) or JSONL publication rows.
/// Columns: journal_id, article_id, year, citable, and optionally doc_type.
/// gzip input is detected by magic bytes. Throws Error(Io) on stream failure
/// and Error(MalformedInput) when the CSV header lacks a required column.
PublicationIngest parse_publications(std::istream& in, InputFormat format = InputFormat::Auto);
PublicationIngest read_publications(const std::filesystem::path& path,
                                    InputFormat format = InputFormat::Auto);

/// Columns: citing_doc_id, citing_year, cited_article_id, and optionally
/// cited_journal_id and cited_year. Exact (citing_doc_id, cited_article_id)
/// duplicates collapse to the first-seen row.
CitationIngest parse_citations(std::istream& in, InputFormat format = InputFormat::Auto);
CitationIngest read_citations(const std::filesystem::path& path,
                              InputFormat format = InputFormat::Auto);

/// Joins citations against the publication table. Unknown articles fall back
/// to the row's own cited_journal_id/cited_year when both are present, and
/// are otherwise dropped as dangling.
Resolution resolve_citations(std::span<const CitationRecord> citations,
                             const PublicationTable& publications);

/// In-memory equivalents of the parsers' table building and pair dedup, for
/// records that are already normalized (e.g. generated datasets).
PublicationTable build_publication_table(std::span<const PublicationRecord> records,
                                         IngestReport* report = nullptr);
std::vector<CitationRecord> dedup_citations(std::span<const CitationRecord> records,
                                            IngestReport* report = nullptr);

/// Opens a file for binary reading. Throws Error(Io) if it cannot be opened.
std::unique_ptr<std::istream> open_input(const std::filesystem::path& path);

}  // namespace uniqjif
