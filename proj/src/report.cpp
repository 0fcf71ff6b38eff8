#include "uniqjif/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "text_io.hpp"
#include "uniqjif/error.hpp"

namespace uniqjif {

using ojson = nlohmann::ordered_json;

std::string_view tool_version() { return "0.1.0"; }

std::string format_number(double value) {
    if (!std::isfinite(value)) throw Error(ErrorKind::InvalidArgument, "non-finite number");
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                         std::chars_format::fixed, 9);
    if (ec != std::errc{}) throw Error(ErrorKind::InvalidArgument, "number too large to format");
    std::string s(buf.data(), end);
    while (s.size() >= 2 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
    if (s == "-0.0") s = "0.0";
    return s;
}

namespace {

std::string opt_field(const std::optional<Rational>& r) {
    return r ? format_number(r->to_double()) : std::string();
}

ojson opt_json(const std::optional<Rational>& r) {
    if (!r) return nullptr;
    // The shortest round-trip repr of the parsed value is the formatted text.
    return ojson(std::strtod(format_number(r->to_double()).c_str(), nullptr));
}

std::uint64_t parse_count(std::string_view text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw Error(ErrorKind::MalformedInput, "bad count '" + std::string(text) + "'");
    }
    return v;
}

void check_derived(const std::optional<Rational>& exact, const std::optional<double>& stated,
                   std::string_view column, const JournalId& journal) {
    const bool consistent = exact.has_value() == stated.has_value() &&
                            (!exact || std::fabs(exact->to_double() - *stated) <= 1e-9);
    if (!consistent) {
        throw Error(ErrorKind::MalformedInput, std::string(column) + " of " + journal.str() +
                                                   " disagrees with its counts");
    }
}

JournalMetrics rebuild(const std::string& journal, int census_year, std::uint64_t cit,
                       std::uint64_t ucit, std::uint64_t pub,
                       const std::array<std::optional<double>, 4>& stated) {
    if (ucit > cit) {
        throw Error(ErrorKind::MalformedInput, "ucit_count exceeds cit_count for " + journal);
    }
    auto m = make_journal_metrics(JournalId(journal), census_year, cit, ucit, pub);
    check_derived(m.jif, stated[0], "jif", m.journal);
    check_derived(m.uniq_jif, stated[1], "uniq_jif", m.journal);
    check_derived(m.ratio, stated[2], "ratio", m.journal);
    check_derived(m.drop, stated[3], "drop", m.journal);
    return m;
}

std::optional<double> parse_optional_number(std::string_view text) {
    if (text.empty()) return std::nullopt;
    double v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::MalformedInput, "bad number '" + std::string(text) + "'");
    }
    return v;
}

std::vector<JournalMetrics> read_metrics_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorKind::MalformedInput, "metrics file is not valid JSON");
    const auto& rows = doc.is_array() ? doc : doc.value("journals", nlohmann::json::array());
    const int census_year = doc.is_object() ? doc.value("census_year", 0) : 0;
    std::vector<JournalMetrics> out;
    try {
        for (const auto& row : rows) {
            std::array<std::optional<double>, 4> stated;
            const std::array<const char*, 4> keys{"jif", "uniq_jif", "ratio", "drop"};
            for (std::size_t i = 0; i < keys.size(); ++i) {
                const auto& v = row.at(keys[i]);
                if (!v.is_null()) stated[i] = v.get<double>();
            }
            out.push_back(rebuild(row.at("journal_id").get<std::string>(), census_year,
                                  row.at("cit_count").get<std::uint64_t>(),
                                  row.at("ucit_count").get<std::uint64_t>(),
                                  row.at("pub_count").get<std::uint64_t>(), stated));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::MalformedInput, std::string("metrics JSON: ") + e.what());
    }
    return out;
}

}  // namespace

void write_metrics(std::ostream& out, std::span<const JournalMetrics> metrics, TableFormat format,
                   const MetricsConfig& config) {
    if (format == TableFormat::Json) {
        ojson doc;
        doc["census_year"] = config.census_year;
        doc["window"] = config.window;
        doc["scope"] = to_string(config.scope);
        auto& rows = doc["journals"] = ojson::array();
        for (const auto& m : metrics) {
            rows.push_back(ojson{{"journal_id", m.journal.str()},
                                 {"cit_count", m.cit_count},
                                 {"ucit_count", m.ucit_count},
                                 {"pub_count", m.pub_count},
                                 {"jif", opt_json(m.jif)},
                                 {"uniq_jif", opt_json(m.uniq_jif)},
                                 {"ratio", opt_json(m.ratio)},
                                 {"drop", opt_json(m.drop)}});
        }
        out << doc.dump(2) << '\n';
        return;
    }
    out << kMetricsCsvHeader << '\n';
    for (const auto& m : metrics) {
        out << detail::csv_escape(m.journal.str()) << ',' << m.cit_count << ',' << m.ucit_count << ','
            << m.pub_count << ',' << opt_field(m.jif) << ',' << opt_field(m.uniq_jif) << ','
            << opt_field(m.ratio) << ',' << opt_field(m.drop) << '\n';
    }
}

std::vector<JournalMetrics> read_metrics(std::istream& in) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw Error(ErrorKind::Io, "read failure");
    const auto start = text.find_first_not_of(" \t\r\n");
    if (start != std::string::npos && (text[start] == '{' || text[start] == '[')) {
        return read_metrics_json(text);
    }

    std::istringstream body(text);
    detail::LineSource lines(body);
    detail::CsvReader csv(lines);
    std::vector<std::string> fields;
    if (csv.next(fields) != detail::CsvStatus::Ok) {
        throw Error(ErrorKind::MalformedInput, "metrics CSV has no header");
    }
    std::string header;
    for (std::size_t i = 0; i < fields.size(); ++i) header += (i ? "," : "") + normalize_id(fields[i]);
    if (header != kMetricsCsvHeader) {
        throw Error(ErrorKind::MalformedInput, "unexpected metrics CSV header '" + header + "'");
    }
    std::vector<JournalMetrics> out;
    for (std::size_t row = 2;; ++row) {
        const auto status = csv.next(fields);
        if (status == detail::CsvStatus::End) break;
        if (status == detail::CsvStatus::Malformed || fields.size() != 8 || fields[0].empty()) {
            throw Error(ErrorKind::MalformedInput, "malformed metrics row " + std::to_string(row));
        }
        out.push_back(rebuild(fields[0], 0, parse_count(fields[1]), parse_count(fields[2]),
                              parse_count(fields[3]),
                              {parse_optional_number(fields[4]), parse_optional_number(fields[5]),
                               parse_optional_number(fields[6]), parse_optional_number(fields[7])}));
    }
    return out;
}

std::vector<JournalMetrics> read_metrics(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return read_metrics(in);
}

void write_ecdf_csv(std::ostream& out, const RatioDistribution& dist) {
    out << "ratio,cumulative_fraction\n";
    for (const auto& p : dist.ecdf) {
        out << format_number(p.ratio) << ',' << format_number(p.cumulative_fraction) << '\n';
    }
}

ojson flag_report_json(const FlagReport& report) {
    ojson doc;
    doc["thresholds"] = ojson{
        {"drop_threshold", std::strtod(format_number(report.thresholds.drop_threshold).c_str(), nullptr)},
        {"top_fraction", std::strtod(format_number(report.thresholds.top_fraction).c_str(), nullptr)}};
    doc["considered"] = report.considered;
    doc["excluded"] = report.excluded;
    auto& rows = doc["flagged"] = ojson::array();
    for (const auto& f : report.flagged) {
        ojson reasons = ojson::array();
        for (const auto r : f.reasons) reasons.push_back(to_string(r));
        rows.push_back(ojson{
            {"journal_id", f.journal.str()},
            {"drop", std::strtod(format_number(f.drop.to_double()).c_str(), nullptr)},
            {"percentile_rank", std::strtod(format_number(f.percentile_rank.to_double()).c_str(), nullptr)},
            {"reasons", reasons}});
    }
    return doc;
}

std::vector<JournalId> read_flagged_journals(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    const auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.contains("flagged") || !doc["flagged"].is_array()) {
        throw Error(ErrorKind::MalformedInput, path.string() + " is not a flag report");
    }
    std::vector<JournalId> out;
    for (const auto& row : doc["flagged"]) {
        if (!row.contains("journal_id") || !row["journal_id"].is_string()) {
            throw Error(ErrorKind::MalformedInput, "flag entry without journal_id");
        }
        out.emplace_back(row["journal_id"].get<std::string>());
    }
    return out;
}

namespace {

std::string coord(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.2f", v);
    return buf.data();
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

void write_ecdf_svg(std::ostream& out, const RatioDistribution& dist,
                    std::span<const JournalId> flagged) {
    constexpr double kWidth = 640, kHeight = 480;
    constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
    constexpr double kPlotW = kWidth - kLeft - kRight, kPlotH = kHeight - kTop - kBottom;
    const auto px = [&](double ratio) { return kLeft + ratio * kPlotW; };
    const auto py = [&](double fraction) { return kTop + (1.0 - fraction) * kPlotH; };

    out << R"(<svg xmlns="http://www.w3.org/2000/svg" width="640" height="480" viewBox="0 0 640 480">)"
        << '\n';
    out << R"(<rect width="640" height="480" fill="white"/>)" << '\n';
    out << R"(<text x="320" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">)"
        << "Cumulative distribution of Uniq-JIF / JIF</text>\n";

    // Axes and ticks.
    out << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    out << "<line x1=\"" << coord(px(0)) << "\" y1=\"" << coord(py(0)) << "\" x2=\"" << coord(px(1))
        << "\" y2=\"" << coord(py(0)) << "\"/>\n";
    out << "<line x1=\"" << coord(px(0)) << "\" y1=\"" << coord(py(0)) << "\" x2=\"" << coord(px(0))
        << "\" y2=\"" << coord(py(1)) << "\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double t = i / 4.0;
        out << "<line x1=\"" << coord(px(t)) << "\" y1=\"" << coord(py(0)) << "\" x2=\"" << coord(px(t))
            << "\" y2=\"" << coord(py(0) + 5) << "\"/>\n";
        out << "<line x1=\"" << coord(px(0) - 5) << "\" y1=\"" << coord(py(t)) << "\" x2=\""
            << coord(px(0)) << "\" y2=\"" << coord(py(t)) << "\"/>\n";
    }
    out << "</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double t = i / 4.0;
        out << "<text x=\"" << coord(px(t)) << "\" y=\"" << coord(py(0) + 20)
            << "\" text-anchor=\"middle\">" << format_number(t) << "</text>\n";
        out << "<text x=\"" << coord(px(0) - 8) << "\" y=\"" << coord(py(t) + 4)
            << "\" text-anchor=\"end\">" << format_number(t) << "</text>\n";
    }
    out << "<text x=\"" << coord(px(0.5)) << "\" y=\"" << coord(kHeight - 15)
        << "\" text-anchor=\"middle\">Uniq-JIF / JIF</text>\n";
    out << "<text x=\"18\" y=\"" << coord(py(0.5)) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << coord(py(0.5)) << ")\">Cumulative fraction of journals</text>\n";
    out << "</g>\n";

    if (!dist.ecdf.empty()) {
        out << "<path fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" d=\"M " << coord(px(0)) << ' '
            << coord(py(0));
        for (const auto& p : dist.ecdf) {
            out << " H " << coord(px(p.ratio)) << " V " << coord(py(p.cumulative_fraction));
        }
        out << " H " << coord(px(1)) << "\"/>\n";
    }

    std::size_t cursor = 0;
    std::vector<std::pair<const RatioEntry*, double>> marks;
    for (const auto& e : dist.entries) {
        while (cursor < dist.ecdf.size() && dist.ecdf[cursor].ratio < e.ratio.to_double()) ++cursor;
        if (std::find(flagged.begin(), flagged.end(), e.journal) == flagged.end()) continue;
        if (cursor < dist.ecdf.size()) marks.emplace_back(&e, dist.ecdf[cursor].cumulative_fraction);
    }
    if (!marks.empty()) {
        out << "<g fill=\"#ff7f0e\" stroke=\"black\" stroke-width=\"0.5\">\n";
        for (const auto& [entry, fraction] : marks) {
            out << "<circle cx=\"" << coord(px(entry->ratio.to_double())) << "\" cy=\"" << coord(py(fraction))
                << "\" r=\"4\"><title>" << xml_escape(entry->journal.str()) << "</title></circle>\n";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
}

ojson ingest_report_json(const IngestReport& report) {
    ojson reasons = ojson::object();
    for (const auto& [reason, count] : report.rejected_by_reason) reasons[std::string(to_string(reason))] = count;
    return ojson{{"rows_read", report.rows_read},
                 {"rows_accepted", report.rows_accepted},
                 {"rows_rejected", report.rows_rejected},
                 {"rejected_by_reason", reasons},
                 {"duplicate_pairs_removed", report.duplicate_pairs_removed},
                 {"dangling_citations", report.dangling_citations},
                 {"fallback_resolved", report.fallback_resolved}};
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::Io, "sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return sha256_hex(bytes);
}

RunManifest::RunManifest(std::string command) {
    doc_["tool"] = "uniqjif";
    doc_["version"] = tool_version();
    doc_["command"] = std::move(command);
    doc_["config"] = ojson::object();
    doc_["inputs"] = ojson::array();
    doc_["outputs"] = ojson::array();
}

RunManifest& RunManifest::config(const std::string& key, ojson value) {
    doc_["config"][key] = std::move(value);
    return *this;
}

RunManifest& RunManifest::input(const std::string& role, const std::filesystem::path& path) {
    doc_["inputs"].push_back(ojson{{"role", role},
                                   {"path", path.generic_string()},
                                   {"bytes", std::filesystem::file_size(path)},
                                   {"sha256", sha256_file(path)}});
    return *this;
}

RunManifest& RunManifest::output(const std::string& role, const std::filesystem::path& path) {
    doc_["outputs"].push_back(ojson{{"role", role},
                                    {"path", path.generic_string()},
                                    {"bytes", std::filesystem::file_size(path)},
                                    {"sha256", sha256_file(path)}});
    return *this;
}

RunManifest& RunManifest::section(const std::string& key, ojson value) {
    doc_[key] = std::move(value);
    return *this;
}

void RunManifest::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << doc_.dump(2) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write failure on " + path.string());
}

}  // namespace uniqjif
