#pragma once

// Internal line/record readers shared by ingest and report.

#include <zlib.h>

#include <array>
#include <istream>
#include <memory>
#include <optional>
#include <streambuf>
#include <string>
#include <string_view>
#include <vector>

namespace uniqjif::detail {

/// Streaming gzip decoder over another istream. Handles concatenated members.
class GzipInflateBuf : public std::streambuf {
public:
    explicit GzipInflateBuf(std::istream& source);
    ~GzipInflateBuf() override;

    GzipInflateBuf(const GzipInflateBuf&) = delete;
    GzipInflateBuf& operator=(const GzipInflateBuf&) = delete;

protected:
    int_type underflow() override;

private:
    std::istream& source_;
    z_stream zs_{};
    std::array<char, 1 << 16> in_{};
    std::array<char, 1 << 16> out_{};
    bool finished_ = false;
};

/// Owns a GzipInflateBuf and exposes it as an istream.
class GzipIstream : public std::istream {
public:
    explicit GzipIstream(std::istream& source) : std::istream(nullptr), buf_(source) { rdbuf(&buf_); }

private:
    GzipInflateBuf buf_;
};

bool has_gzip_magic(std::istream& in);

/// getline wrapper that strips a trailing '\r', supports one line of
/// push-back, and fails loudly on stream errors.
class LineSource {
public:
    explicit LineSource(std::istream& in) : in_(in) {}

    bool next(std::string& line);
    void push_back(std::string line) { pending_ = std::move(line); }

private:
    std::istream& in_;
    std::optional<std::string> pending_;
};

enum class CsvStatus { Ok, Malformed, End };

/// RFC-4180 record reader: quoted fields may contain commas, doubled quotes,
/// and line breaks. Blank lines are skipped.
class CsvReader {
public:
    explicit CsvReader(LineSource& lines) : lines_(lines) {}

    CsvStatus next(std::vector<std::string>& fields);

private:
    LineSource& lines_;
    std::string line_;
};

/// Quotes a field if it contains a comma, quote, or line break.
std::string csv_escape(std::string_view field);

bool is_blank(std::string_view s);

}  // namespace uniqjif::detail
