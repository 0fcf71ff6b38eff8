#include "uniqjif/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "text_io.hpp"
#include "uniqjif/error.hpp"

namespace uniqjif {

using json = nlohmann::json;

std::string_view to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::MalformedRow: return "MalformedRow";
        case RejectReason::YearOutOfRange: return "YearOutOfRange";
        case RejectReason::DuplicateArticle: return "DuplicateArticle";
    }
    return "Unknown";
}

bool PublicationTable::insert(PublicationRecord record) {
    const auto [it, fresh] = index_.try_emplace(record.article_id, records_.size());
    if (!fresh) return false;
    records_.push_back(std::move(record));
    return true;
}

const PublicationRecord* PublicationTable::find(const std::string& article_id) const {
    const auto it = index_.find(article_id);
    return it == index_.end() ? nullptr : &records_[it->second];
}

std::vector<JournalId> PublicationTable::journals() const {
    std::set<JournalId> distinct;
    for (const auto& r : records_) distinct.insert(r.journal);
    return {distinct.begin(), distinct.end()};
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::optional<int> parse_int(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return value;
}

std::optional<bool> parse_bool(std::string_view text) {
    const std::string t = normalize_id(text);
    if (t == "true" || t == "1" || t == "yes" || t == "y" || t == "t") return true;
    if (t == "false" || t == "0" || t == "no" || t == "n" || t == "f") return false;
    return std::nullopt;
}

// Field values decoded from one row, before validation. A missing optional
// column is std::nullopt; a present-but-empty value is "".
using RawRow = std::vector<std::optional<std::string>>;

enum class RowOutcome { Ok, Malformed, YearOutOfRange };

struct Schema {
    std::vector<std::string_view> required;
    std::vector<std::string_view> optional;

    std::size_t width() const { return required.size() + optional.size(); }
    std::string_view name(std::size_t i) const {
        return i < required.size() ? required[i] : optional[i - required.size()];
    }
};

const Schema kPublicationSchema{{"journal_id", "article_id", "year", "citable"}, {"doc_type"}};
const Schema kCitationSchema{{"citing_doc_id", "citing_year", "cited_article_id"},
                             {"cited_journal_id", "cited_year"}};

std::optional<std::string> json_scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_null()) return std::string();
    return std::nullopt;
}

/// Drives either CSV or JSONL decoding and hands each row to `on_row`, which
/// validates it and updates the report.
template <typename OnRow>
void read_rows(std::istream& raw, InputFormat format, const Schema& schema, IngestReport& report,
               OnRow&& on_row) {
    std::unique_ptr<std::istream> inflated;
    std::istream* in = &raw;
    if (detail::has_gzip_magic(raw)) {
        inflated = std::make_unique<detail::GzipIstream>(raw);
        in = inflated.get();
    }
    detail::LineSource lines(*in);

    std::string first;
    bool have_first = false;
    while (lines.next(first)) {
        if (!detail::is_blank(first)) {
            have_first = true;
            break;
        }
    }
    if (!have_first) {
        if (format == InputFormat::Csv) throw Error(ErrorKind::MalformedInput, "missing CSV header");
        return;
    }
    // Strip a UTF-8 byte order mark.
    if (first.rfind("\xEF\xBB\xBF", 0) == 0) first.erase(0, 3);
    if (format == InputFormat::Auto) {
        format = trim(first).starts_with('{') ? InputFormat::Jsonl : InputFormat::Csv;
    }

    RawRow row(schema.width());
    if (format == InputFormat::Jsonl) {
        lines.push_back(std::move(first));
        std::string line;
        while (lines.next(line)) {
            if (detail::is_blank(line)) continue;
            ++report.rows_read;
            const json obj = json::parse(line, nullptr, false);
            bool ok = obj.is_object();
            for (std::size_t i = 0; ok && i < schema.width(); ++i) {
                const auto it = obj.find(std::string(schema.name(i)));
                if (it == obj.end()) {
                    row[i].reset();
                    ok = i >= schema.required.size();
                } else {
                    row[i] = json_scalar(*it);
                    ok = row[i].has_value();
                }
            }
            if (!ok) {
                report.reject(RejectReason::MalformedRow);
                continue;
            }
            on_row(row);
        }
        return;
    }

    // CSV: map header names onto schema slots.
    lines.push_back(std::move(first));
    detail::CsvReader csv(lines);
    std::vector<std::string> fields;
    if (csv.next(fields) != detail::CsvStatus::Ok) {
        throw Error(ErrorKind::MalformedInput, "unreadable CSV header");
    }
    std::vector<std::optional<std::size_t>> column_of(schema.width());
    for (std::size_t c = 0; c < fields.size(); ++c) {
        const std::string name = normalize_id(fields[c]);
        for (std::size_t i = 0; i < schema.width(); ++i) {
            if (name == schema.name(i) && !column_of[i]) column_of[i] = c;
        }
    }
    for (std::size_t i = 0; i < schema.required.size(); ++i) {
        if (!column_of[i]) {
            throw Error(ErrorKind::MalformedInput,
                        "CSV header lacks column '" + std::string(schema.name(i)) + "'");
        }
    }
    const std::size_t arity = fields.size();
    while (true) {
        const auto status = csv.next(fields);
        if (status == detail::CsvStatus::End) break;
        ++report.rows_read;
        if (status == detail::CsvStatus::Malformed || fields.size() != arity) {
            report.reject(RejectReason::MalformedRow);
            continue;
        }
        for (std::size_t i = 0; i < schema.width(); ++i) {
            if (column_of[i]) {
                row[i] = std::move(fields[*column_of[i]]);
            } else {
                row[i].reset();
            }
        }
        on_row(row);
    }
}

struct PairKeyHash {
    const std::vector<CitationRecord>* records;
    std::size_t operator()(std::size_t i) const noexcept {
        const auto& r = (*records)[i];
        const auto h1 = std::hash<std::string>{}(r.citing_doc_id);
        const auto h2 = std::hash<std::string>{}(r.cited_article_id);
        return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
    }
};

struct PairKeyEq {
    const std::vector<CitationRecord>* records;
    bool operator()(std::size_t a, std::size_t b) const noexcept {
        const auto& x = (*records)[a];
        const auto& y = (*records)[b];
        return x.citing_doc_id == y.citing_doc_id && x.cited_article_id == y.cited_article_id;
    }
};

/// Appends records while collapsing exact (citing, cited) pair duplicates.
class PairDeduper {
public:
    explicit PairDeduper(std::vector<CitationRecord>& out)
        : out_(out), seen_(1024, PairKeyHash{&out}, PairKeyEq{&out}) {}

    bool add(CitationRecord record) {
        out_.push_back(std::move(record));
        if (!seen_.insert(out_.size() - 1).second) {
            out_.pop_back();
            return false;
        }
        return true;
    }

private:
    std::vector<CitationRecord>& out_;
    std::unordered_set<std::size_t, PairKeyHash, PairKeyEq> seen_;
};

}  // namespace

PublicationIngest parse_publications(std::istream& in, InputFormat format) {
    PublicationIngest result;
    auto& report = result.report;
    read_rows(in, format, kPublicationSchema, report, [&](RawRow& row) {
        const std::string article = normalize_id(*row[1]);
        const auto year = parse_int(*row[2]);
        const auto citable = parse_bool(*row[3]);
        if (trim(*row[0]).empty() || article.empty() || !year || !citable) {
            report.reject(RejectReason::MalformedRow);
            return;
        }
        if (!valid_year(*year)) {
            report.reject(RejectReason::YearOutOfRange);
            return;
        }
        PublicationRecord record{JournalId(*row[0]), article, *year, *citable,
                                 row[4] ? std::string(trim(*row[4])) : std::string()};
        if (!result.table.insert(std::move(record))) {
            report.reject(RejectReason::DuplicateArticle);
            return;
        }
        ++report.rows_accepted;
    });
    return result;
}

CitationIngest parse_citations(std::istream& in, InputFormat format) {
    CitationIngest result;
    auto& report = result.report;
    PairDeduper dedup(result.citations);
    read_rows(in, format, kCitationSchema, report, [&](RawRow& row) {
        std::string citing = normalize_id(*row[0]);
        std::string cited = normalize_id(*row[2]);
        const auto year = parse_int(*row[1]);
        if (citing.empty() || cited.empty() || !year) {
            report.reject(RejectReason::MalformedRow);
            return;
        }
        if (!valid_year(*year)) {
            report.reject(RejectReason::YearOutOfRange);
            return;
        }
        CitationRecord record{std::move(citing), *year, std::move(cited), std::nullopt, std::nullopt};
        const bool has_journal = row[3] && !trim(*row[3]).empty();
        const bool has_year = row[4] && !trim(*row[4]).empty();
        if (has_year) {
            const auto cited_year = parse_int(*row[4]);
            if (!cited_year) {
                report.reject(RejectReason::MalformedRow);
                return;
            }
            if (!valid_year(*cited_year)) {
                report.reject(RejectReason::YearOutOfRange);
                return;
            }
            record.cited_year = cited_year;
        }
        if (has_journal) record.cited_journal = JournalId(*row[3]);
        ++report.rows_accepted;
        if (!dedup.add(std::move(record))) ++report.duplicate_pairs_removed;
    });
    return result;
}

std::unique_ptr<std::istream> open_input(const std::filesystem::path& path) {
    auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return in;
}

PublicationIngest read_publications(const std::filesystem::path& path, InputFormat format) {
    auto in = open_input(path);
    return parse_publications(*in, format);
}

CitationIngest read_citations(const std::filesystem::path& path, InputFormat format) {
    auto in = open_input(path);
    return parse_citations(*in, format);
}

Resolution resolve_citations(std::span<const CitationRecord> citations,
                             const PublicationTable& publications) {
    Resolution result;
    result.citations.reserve(citations.size());
    for (const auto& c : citations) {
        if (const auto* pub = publications.find(c.cited_article_id)) {
            result.citations.push_back(ResolvedCitation{c.citing_doc_id, c.citing_year,
                                                        c.cited_article_id, pub->journal,
                                                        pub->pub_year, pub->citable});
        } else if (c.cited_journal && c.cited_year) {
            result.citations.push_back(ResolvedCitation{c.citing_doc_id, c.citing_year,
                                                        c.cited_article_id, *c.cited_journal,
                                                        *c.cited_year, true});
            ++result.report.fallback_resolved;
        } else {
            ++result.report.dangling_citations;
        }
    }
    return result;
}

PublicationTable build_publication_table(std::span<const PublicationRecord> records,
                                         IngestReport* report) {
    PublicationTable table;
    IngestReport local;
    for (const auto& r : records) {
        ++local.rows_read;
        if (!valid_year(r.pub_year) || r.article_id.empty()) {
            local.reject(valid_year(r.pub_year) ? RejectReason::MalformedRow
                                                : RejectReason::YearOutOfRange);
        } else if (!table.insert(r)) {
            local.reject(RejectReason::DuplicateArticle);
        } else {
            ++local.rows_accepted;
        }
    }
    if (report) *report = local;
    return table;
}

std::vector<CitationRecord> dedup_citations(std::span<const CitationRecord> records,
                                            IngestReport* report) {
    std::vector<CitationRecord> out;
    out.reserve(records.size());
    IngestReport local;
    PairDeduper dedup(out);
    for (const auto& r : records) {
        ++local.rows_read;
        if (r.citing_doc_id.empty() || r.cited_article_id.empty()) {
            local.reject(RejectReason::MalformedRow);
            continue;
        }
        if (!valid_year(r.citing_year)) {
            local.reject(RejectReason::YearOutOfRange);
            continue;
        }
        ++local.rows_accepted;
        if (!dedup.add(r)) ++local.duplicate_pairs_removed;
    }
    if (report) *report = local;
    return out;
}

}  // namespace uniqjif
