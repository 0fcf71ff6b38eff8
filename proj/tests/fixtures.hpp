#pragma once

// Shared fixtures. The canonical three-document example: journal J1 has three
// citable items in the 2021-2022 window; in 2023 doc d1 cites all three, d2
// cites two and d3 cites all three, so CIT = 3+2+3 = 8 and UCIT = 3.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "uniqjif/ingest.hpp"
#include "uniqjif/model.hpp"

namespace fixtures {

inline constexpr int kCensusYear = 2023;

inline const std::string kThreeDocPublications =
    "journal_id,article_id,year,citable,doc_type\n"
    "J1,a1,2021,true,article\n"
    "J1,a2,2022,true,article\n"
    "J1,a3,2022,true,review\n";

inline const std::string kThreeDocCitations =
    "citing_doc_id,citing_year,cited_article_id\n"
    "d1,2023,a1\n"
    "d1,2023,a2\n"
    "d1,2023,a3\n"
    "d2,2023,a1\n"
    "d2,2023,a2\n"
    "d3,2023,a1\n"
    "d3,2023,a2\n"
    "d3,2023,a3\n";

inline uniqjif::PublicationTable three_doc_table() {
    std::istringstream in(kThreeDocPublications);
    return uniqjif::parse_publications(in).table;
}

inline std::vector<uniqjif::ResolvedCitation> three_doc_resolved(const uniqjif::PublicationTable& table) {
    std::istringstream in(kThreeDocCitations);
    const auto cites = uniqjif::parse_citations(in);
    return uniqjif::resolve_citations(cites.citations, table).citations;
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("uniqjif-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fixtures
