#include "uniqjif/model.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "uniqjif/error.hpp"

namespace uniqjif {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ZeroDenominator: return "ZeroDenominator";
        case ErrorKind::UndefinedMetric: return "UndefinedMetric";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::TargetTooSmall: return "TargetTooSmall";
        case ErrorKind::MalformedInput: return "MalformedInput";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string normalize_id(std::string_view raw) {
    std::string out(trim(raw));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

JournalId::JournalId(std::string_view raw) : id_(trim(raw)) {
    if (id_.empty()) throw Error(ErrorKind::InvalidArgument, "empty journal id");
    std::transform(id_.begin(), id_.end(), id_.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
}

Rational::Rational(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
    if (den == 0) throw Error(ErrorKind::ZeroDenominator, "rational with zero denominator");
    const auto g = std::gcd(num_, den_);
    num_ /= g;
    den_ /= g;
}

JournalMetrics make_journal_metrics(JournalId journal, int census_year, std::uint64_t cit_count,
                                    std::uint64_t ucit_count, std::uint64_t pub_count) {
    if (ucit_count > cit_count) {
        throw Error(ErrorKind::InvalidArgument,
                    "unique citing count exceeds citation count for " + journal.str());
    }
    JournalMetrics m{std::move(journal), census_year, cit_count, ucit_count, pub_count,
                     std::nullopt, std::nullopt, std::nullopt, std::nullopt};
    if (pub_count > 0) {
        m.jif = Rational(cit_count, pub_count);
        m.uniq_jif = Rational(ucit_count, pub_count);
    }
    // uniq_jif / jif reduces to ucit / cit because the denominators agree.
    if (pub_count > 0 && cit_count > 0) {
        m.ratio = Rational(ucit_count, cit_count);
        m.drop = Rational(cit_count - ucit_count, cit_count);
    }
    return m;
}

std::string_view to_string(FlagReason reason) {
    switch (reason) {
        case FlagReason::DropThreshold: return "DropThreshold";
        case FlagReason::TopPercentile: return "TopPercentile";
    }
    return "Unknown";
}

void FlagThresholds::validate() const {
    if (!(drop_threshold >= 0.0 && drop_threshold <= 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "drop threshold must lie in [0, 1]");
    }
    if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "top fraction must lie in (0, 1]");
    }
}

}  // namespace uniqjif
