#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uniqjif/ingest.hpp"
#include "uniqjif/metrics.hpp"
#include "uniqjif/model.hpp"

namespace uniqjif {

enum class TableFormat { Csv, Json };

/// Fixed-point with 9 fractional digits, trailing zeros trimmed down to one:
/// 8/3 -> "2.666666667", 1 -> "1.0", 0.375 -> "0.375". Never scientific.
std::string format_number(double value);

inline constexpr std::string_view kMetricsCsvHeader =
    "journal_id,cit_count,ucit_count,pub_count,jif,uniq_jif,ratio,drop";

/// One row per journal in the given order; undefined metrics are empty CSV
/// fields or JSON nulls.
void write_metrics(std::ostream& out, std::span<const JournalMetrics> metrics, TableFormat format,
                   const MetricsConfig& config);

/// Reads a metrics table written by write_metrics (CSV or JSON, detected from
/// content). The exact metrics are rebuilt from the three counts; derived
/// columns that disagree with the counts beyond 1e-9 raise
/// Error(MalformedInput).
std::vector<JournalMetrics> read_metrics(std::istream& in);
std::vector<JournalMetrics> read_metrics(const std::filesystem::path& path);

/// "ratio,cumulative_fraction" rows.
void write_ecdf_csv(std::ostream& out, const RatioDistribution& dist);

nlohmann::ordered_json flag_report_json(const FlagReport& report);
/// Journal ids listed in a flag report JSON document.
std::vector<JournalId> read_flagged_journals(const std::filesystem::path& path);

/// Static ECDF step plot; flagged journals are drawn as orange markers on the
/// curve at their ratio.
void write_ecdf_svg(std::ostream& out, const RatioDistribution& dist,
                    std::span<const JournalId> flagged = {});

nlohmann::ordered_json ingest_report_json(const IngestReport& report);

/// Hex SHA-256 of a file's bytes. Throws Error(Io).
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

/// Reproducible run record: no timestamps, only config, tool version, and
/// input digests, so identical runs produce identical manifests.
class RunManifest {
public:
    explicit RunManifest(std::string command);

    RunManifest& config(const std::string& key, nlohmann::ordered_json value);
    RunManifest& input(const std::string& role, const std::filesystem::path& path);
    RunManifest& output(const std::string& role, const std::filesystem::path& path);
    RunManifest& section(const std::string& key, nlohmann::ordered_json value);

    const nlohmann::ordered_json& json() const noexcept { return doc_; }
    /// Throws Error(Io).
    void write(const std::filesystem::path& path) const;

private:
    nlohmann::ordered_json doc_;
};

std::string_view tool_version();

}  // namespace uniqjif
