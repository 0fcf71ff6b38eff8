#include "text_io.hpp"

#include <algorithm>
#include <cctype>

#include "uniqjif/error.hpp"

namespace uniqjif::detail {

GzipInflateBuf::GzipInflateBuf(std::istream& source) : source_(source) {
    // 16 + MAX_WBITS selects the gzip wrapper.
    if (inflateInit2(&zs_, 16 + MAX_WBITS) != Z_OK) {
        throw Error(ErrorKind::Io, "cannot initialise gzip decoder");
    }
    setg(out_.data(), out_.data(), out_.data());
}

GzipInflateBuf::~GzipInflateBuf() { inflateEnd(&zs_); }

GzipInflateBuf::int_type GzipInflateBuf::underflow() {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());

    while (!finished_) {
        if (zs_.avail_in == 0) {
            source_.read(in_.data(), static_cast<std::streamsize>(in_.size()));
            const auto got = source_.gcount();
            if (got <= 0) {
                if (source_.bad()) throw Error(ErrorKind::Io, "read failure in gzip input");
                throw Error(ErrorKind::Io, "truncated gzip input");
            }
            zs_.next_in = reinterpret_cast<Bytef*>(in_.data());
            zs_.avail_in = static_cast<uInt>(got);
        }
        zs_.next_out = reinterpret_cast<Bytef*>(out_.data());
        zs_.avail_out = static_cast<uInt>(out_.size());
        const int rc = inflate(&zs_, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END && rc != Z_BUF_ERROR) {
            throw Error(ErrorKind::Io, "corrupt gzip input");
        }
        const auto produced = out_.size() - zs_.avail_out;
        if (rc == Z_STREAM_END) {
            // Another member may follow.
            if (zs_.avail_in == 0 && source_.peek() == std::char_traits<char>::eof()) {
                finished_ = true;
            } else {
                inflateReset(&zs_);
            }
        }
        if (produced > 0) {
            setg(out_.data(), out_.data(), out_.data() + produced);
            return traits_type::to_int_type(*gptr());
        }
    }
    return traits_type::eof();
}

bool has_gzip_magic(std::istream& in) {
    const auto first = in.peek();
    if (first != 0x1f) return false;
    in.get();
    const auto second = in.peek();
    in.unget();
    return second == 0x8b;
}

bool LineSource::next(std::string& line) {
    if (pending_) {
        line = std::move(*pending_);
        pending_.reset();
        return true;
    }
    if (!std::getline(in_, line)) {
        if (in_.bad()) throw Error(ErrorKind::Io, "read failure");
        return false;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

CsvStatus CsvReader::next(std::vector<std::string>& fields) {
    fields.clear();
    do {
        if (!lines_.next(line_)) return CsvStatus::End;
    } while (is_blank(line_));

    std::string field;
    bool malformed = false;
    std::size_t i = 0;
    while (true) {
        field.clear();
        if (i < line_.size() && line_[i] == '"') {
            ++i;
            bool closed = false;
            while (!closed) {
                if (i >= line_.size()) {
                    // Quoted field continues on the next physical line.
                    std::string more;
                    if (!lines_.next(more)) {
                        return CsvStatus::Malformed;
                    }
                    field.push_back('\n');
                    line_ = std::move(more);
                    i = 0;
                    continue;
                }
                const char c = line_[i++];
                if (c != '"') {
                    field.push_back(c);
                } else if (i < line_.size() && line_[i] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    closed = true;
                }
            }
            if (i < line_.size() && line_[i] != ',') {
                malformed = true;
                while (i < line_.size() && line_[i] != ',') ++i;
            }
        } else {
            while (i < line_.size() && line_[i] != ',') {
                if (line_[i] == '"') malformed = true;
                field.push_back(line_[i++]);
            }
        }
        fields.push_back(field);
        if (i >= line_.size()) break;
        ++i;  // comma
    }
    return malformed ? CsvStatus::Malformed : CsvStatus::Ok;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace uniqjif::detail
