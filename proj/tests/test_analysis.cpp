#include <doctest.h>

#include <algorithm>
#include <random>

#include "uniqjif/analysis.hpp"
#include "uniqjif/error.hpp"

using namespace uniqjif;

namespace {

// Builds a journal whose ratio is ucit/cit with three citable items.
JournalMetrics journal(const std::string& id, std::uint64_t cit, std::uint64_t ucit, std::uint64_t pubs = 3) {
    return make_journal_metrics(JournalId(id), 2023, cit, ucit, pubs);
}

std::vector<JournalMetrics> drop_population(std::size_t clean, std::size_t dropped,
                                            std::uint64_t cit_dropped = 10, std::uint64_t ucit_dropped = 2) {
    std::vector<JournalMetrics> out;
    for (std::size_t i = 0; i < clean; ++i) out.push_back(journal("C" + std::to_string(i), 5, 5));
    for (std::size_t i = 0; i < dropped; ++i) {
        out.push_back(journal("S" + std::to_string(i), cit_dropped, ucit_dropped));
    }
    return out;
}

}  // namespace

TEST_CASE("build_distribution follows the ECDF definition") {
    SUBCASE("three distinct ratios") {
        const std::vector ms{journal("J1", 2, 1), journal("J2", 4, 4), journal("J3", 4, 3)};
        const auto d = build_distribution(ms);
        REQUIRE(d.ecdf.size() == 3);
        CHECK(d.ecdf[0].ratio == 0.5);
        CHECK(d.ecdf[0].cumulative_fraction == doctest::Approx(1.0 / 3.0));
        CHECK(d.ecdf[1].ratio == 0.75);
        CHECK(d.ecdf[1].cumulative_fraction == doctest::Approx(2.0 / 3.0));
        CHECK(d.ecdf[2].ratio == 1.0);
        CHECK(d.ecdf[2].cumulative_fraction == 1.0);
        CHECK(d.entries[0].journal == JournalId("J1"));
        CHECK(d.entries[2].journal == JournalId("J2"));
    }
    SUBCASE("degenerate distribution") {
        const std::vector ms{journal("A", 3, 3), journal("B", 1, 1), journal("C", 7, 7)};
        const auto d = build_distribution(ms);
        REQUIRE(d.ecdf.size() == 1);
        CHECK(d.ecdf[0].ratio == 1.0);
        CHECK(d.ecdf[0].cumulative_fraction == 1.0);
    }
    SUBCASE("three-document example alone") {
        const auto d = build_distribution(std::vector{journal("J1", 8, 3)});
        REQUIRE(d.ecdf.size() == 1);
        CHECK(d.ecdf[0].ratio == 0.375);
        CHECK(d.ecdf[0].cumulative_fraction == 1.0);
    }
    SUBCASE("undefined ratios are excluded and counted") {
        const std::vector ms{journal("A", 0, 0), journal("B", 0, 0, 0), journal("C", 2, 1)};
        const auto d = build_distribution(ms);
        CHECK(d.entries.size() == 1);
        CHECK(d.excluded == 2);
    }
    SUBCASE("empty") {
        const auto d = build_distribution({});
        CHECK(d.entries.empty());
        CHECK(d.ecdf.empty());
    }
    SUBCASE("ties broken by journal id") {
        const std::vector ms{journal("Z", 2, 1), journal("A", 4, 2)};
        const auto d = build_distribution(ms);
        CHECK(d.entries[0].journal == JournalId("A"));
        CHECK(d.ecdf.size() == 1);
    }
}

TEST_CASE("property: ECDF is nondecreasing and ends at exactly one") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<JournalMetrics> ms;
        const int n = 1 + static_cast<int>(rng() % 60);
        for (int i = 0; i < n; ++i) {
            const std::uint64_t cit = rng() % 12;
            const std::uint64_t ucit = cit == 0 ? 0 : 1 + rng() % cit;
            ms.push_back(journal("J" + std::to_string(i), cit, std::min(ucit, cit), rng() % 4));
        }
        const auto d = build_distribution(ms);
        CHECK(d.entries.size() + d.excluded == ms.size());
        if (d.entries.empty()) continue;
        for (std::size_t i = 1; i < d.ecdf.size(); ++i) {
            CHECK(d.ecdf[i].ratio > d.ecdf[i - 1].ratio);
            CHECK(d.ecdf[i].cumulative_fraction >= d.ecdf[i - 1].cumulative_fraction);
        }
        CHECK(d.ecdf.back().cumulative_fraction == 1.0);
        CHECK(d.ecdf.front().cumulative_fraction > 0.0);
    }
}

TEST_CASE("percentile_of_drop") {
    // drops 0.9, 0.5, 0.1
    const std::vector ms{journal("A", 10, 1), journal("B", 10, 5), journal("C", 10, 9)};
    CHECK(percentile_of_drop(ms[0], ms) == Rational(0, 1));
    CHECK(percentile_of_drop(ms[2], ms) == Rational(2, 3));
    CHECK(percentile_of_drop(ms[1], ms) == Rational(1, 3));
    CHECK(percentile_of_drop(ms[1], std::vector{ms[1]}) == Rational(0, 1));
    // Ties share a rank.
    const std::vector tied{journal("A", 10, 5), journal("B", 4, 2), journal("C", 10, 9)};
    CHECK(percentile_of_drop(tied[0], tied) == percentile_of_drop(tied[1], tied));
    // An entry outside the population is ranked against it.
    CHECK(percentile_of_drop(ms[2], std::vector{ms[0], ms[1]}) == Rational(2, 3));

    try {
        percentile_of_drop(journal("Q", 0, 0), ms);
        FAIL("expected UndefinedMetric");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UndefinedMetric);
    }
}

TEST_CASE("flag_journals") {
    SUBCASE("95 clean + 5 dropped journals") {
        const auto ms = drop_population(95, 5);  // drop 0.8
        const auto report = flag_journals(ms);
        REQUIRE(report.flagged.size() == 5);
        for (const auto& f : report.flagged) {
            CHECK(f.journal.str().front() == 'S');
            CHECK(f.reasons == std::vector{FlagReason::DropThreshold, FlagReason::TopPercentile});
        }
        CHECK(report.considered == 100);
    }
    SUBCASE("no drop anywhere flags nobody") {
        const auto report = flag_journals(drop_population(50, 0));
        CHECK(report.flagged.empty());
    }
    SUBCASE("three-document example alone") {
        const auto report = flag_journals(std::vector{journal("J1", 8, 3)});
        REQUIRE(report.flagged.size() == 1);
        CHECK(report.flagged[0].drop == Rational(5, 8));
        CHECK(std::count(report.flagged[0].reasons.begin(), report.flagged[0].reasons.end(),
                         FlagReason::DropThreshold) == 1);
    }
    SUBCASE("only the tail gets TopPercentile") {
        // 40 journals with small drops 1/20 .. 40/200: the top 5% is the two
        // largest, none exceeds 0.3.
        std::vector<JournalMetrics> ms;
        for (int i = 1; i <= 40; ++i) ms.push_back(journal("J" + std::to_string(100 + i), 200, 200 - i));
        const auto report = flag_journals(ms);
        REQUIRE(report.flagged.size() == 2);
        CHECK(report.flagged[0].journal == JournalId("J140"));
        CHECK(report.flagged[1].journal == JournalId("J139"));
        CHECK(report.flagged[0].reasons == std::vector{FlagReason::TopPercentile});
    }
    SUBCASE("undefined drops are excluded, never flagged") {
        std::vector ms{journal("A", 0, 0), journal("B", 0, 0, 0), journal("C", 10, 1)};
        const auto report = flag_journals(ms);
        CHECK(report.excluded == 2);
        CHECK(report.considered == 1);
        REQUIRE(report.flagged.size() == 1);
        CHECK(report.flagged[0].journal == JournalId("C"));
    }
    SUBCASE("drop equal to the threshold does not exceed it") {
        // A still ranks first, so only the percentile rule applies.
        const auto report = flag_journals(std::vector{journal("A", 10, 7), journal("B", 10, 10)},
                                          {0.30, 0.01});
        REQUIRE(report.flagged.size() == 1);
        CHECK(report.flagged[0].reasons == std::vector{FlagReason::TopPercentile});
    }
    CHECK_THROWS_AS(flag_journals({}, {0.3, 0.0}), Error);
}

TEST_CASE("property: flagging is monotone, permutation-invariant and self-consistent") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<JournalMetrics> ms;
        const int n = 1 + static_cast<int>(rng() % 80);
        for (int i = 0; i < n; ++i) {
            const std::uint64_t cit = rng() % 30;
            const std::uint64_t ucit = cit == 0 ? 0 : 1 + rng() % cit;
            ms.push_back(journal("J" + std::to_string(i), cit, ucit, rng() % 5));
        }
        const FlagThresholds base{0.2, 0.1};
        const auto report = flag_journals(ms, base);

        for (const auto& f : report.flagged) {
            REQUIRE_FALSE(f.reasons.empty());
            for (const auto reason : f.reasons) {
                if (reason == FlagReason::DropThreshold) CHECK(f.drop.to_double() > base.drop_threshold);
                if (reason == FlagReason::TopPercentile) {
                    CHECK(f.percentile_rank.to_double() < base.top_fraction);
                    CHECK_FALSE(f.drop.is_zero());
                }
            }
        }

        auto count_drop_flags = [](const FlagReport& r) {
            return std::count_if(r.flagged.begin(), r.flagged.end(), [](const FlaggedJournal& f) {
                return std::find(f.reasons.begin(), f.reasons.end(), FlagReason::DropThreshold) != f.reasons.end();
            });
        };
        const auto raised = flag_journals(ms, {0.5, 0.1});
        CHECK(count_drop_flags(raised) <= count_drop_flags(report));

        auto shuffled = ms;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto again = flag_journals(shuffled, base);
        REQUIRE(again.flagged.size() == report.flagged.size());
        for (std::size_t i = 0; i < again.flagged.size(); ++i) {
            CHECK(again.flagged[i].journal == report.flagged[i].journal);
            CHECK(again.flagged[i].reasons == report.flagged[i].reasons);
            CHECK(again.flagged[i].percentile_rank == report.flagged[i].percentile_rank);
        }
    }
}
