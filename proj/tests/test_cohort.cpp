#include <doctest.h>

#include <cmath>
#include <set>

#include "fss/cohort.hpp"
#include "fss/numeric.hpp"
#include "fss/synth.hpp"

using namespace fss;

namespace {

ScoreRow row(std::string sds, MacroRegion region, double fss_star, double percentile,
             std::string university = "U1", std::string uda = "A01", bool top = false) {
    ScoreRow r;
    static int seq = 0;
    r.researcher_id = "R" + std::to_string(++seq);
    r.sds_code = std::move(sds);
    r.uda_code = std::move(uda);
    r.university_id = std::move(university);
    r.region = region;
    r.fss_star = fss_star;
    r.percentile = percentile;
    r.top = top;
    return r;
}

std::vector<ScoreRow> region_block(const std::string& sds, MacroRegion region, int count,
                                   double percentile, const std::string& university) {
    std::vector<ScoreRow> rows;
    for (int i = 0; i < count; ++i)
        rows.push_back(row(sds, region, 1.0, percentile, university));
    return rows;
}

} // namespace

TEST_CASE("cohort stats cut rules") {
    ThresholdSpec spec;
    std::vector<CohortMember> members = {
        {0.0, 10.0, false}, // unproductive, sits on the bottom-10 boundary
        {0.8, 40.0, false},
        {1.2, 60.0, false},
        {2.0, 95.0, false},
    };
    auto stats = cohort_stats(members, spec);
    CHECK(stats.observations == 4);
    CHECK(stats.pct_unproductive == 25.0);
    CHECK(stats.pct_bottom_small == 25.0);
    CHECK(stats.pct_bottom_large == 25.0);
    CHECK(stats.pct_above_median == 50.0);
    CHECK(stats.pct_top_small == 25.0);
    CHECK(stats.pct_top_large == 25.0);
    CHECK(stats.mean_fss_star == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a fully tied cohort has nobody above the median") {
    ThresholdSpec spec;
    std::vector<CohortMember> members(6, CohortMember{1.0, 50.0, false});
    auto stats = cohort_stats(members, spec);
    CHECK(stats.pct_above_median == 0.0);
    CHECK(stats.mean_percentile == 50.0);
}

TEST_CASE("singleton cohort") {
    ThresholdSpec spec;
    std::vector<CohortMember> members{{0.9, 50.0, true}};
    auto stats = cohort_stats(members, spec);
    CHECK(stats.observations == 1);
    CHECK(stats.pct_unproductive == 0.0);
    CHECK(stats.pct_top == 100.0);
    std::vector<CohortMember> empty;
    CHECK_THROWS_AS(cohort_stats(empty, spec), Error);
}

TEST_CASE("top can be switched to a percentile cut") {
    ThresholdSpec spec;
    spec.top_rule = ThresholdSpec::TopRule::PercentileCut;
    spec.top_cut = 90.0;
    std::vector<CohortMember> members = {
        {1.0, 95.0, false}, {1.0, 85.0, true}, {1.0, 10.0, false}};
    auto stats = cohort_stats(members, spec);
    CHECK(stats.pct_top == doctest::Approx(100.0 / 3).epsilon(1e-12));
}

TEST_CASE("disjoint cohorts recombine by observation weight") {
    Rng rng(8812);
    for (int trial = 0; trial < 30; ++trial) {
        ThresholdSpec spec;
        std::vector<CohortMember> a, b, pooled;
        std::size_t na = 1 + rng.next_below(40), nb = 1 + rng.next_below(40);
        for (std::size_t i = 0; i < na + nb; ++i) {
            CohortMember m{rng.bernoulli(0.15) ? 0.0 : rng.next_unit() * 3,
                           static_cast<double>(rng.next_below(101)), false};
            (i < na ? a : b).push_back(m);
            pooled.push_back(m);
        }
        auto sa = cohort_stats(a, spec);
        auto sb = cohort_stats(b, spec);
        auto sp = cohort_stats(pooled, spec);
        double weighted =
            (sa.pct_above_median * static_cast<double>(na) +
             sb.pct_above_median * static_cast<double>(nb)) /
            static_cast<double>(na + nb);
        CHECK(std::fabs(sp.pct_above_median - weighted) < 1e-9);
    }
}

TEST_CASE("unproductive share stays inside the bottom cuts at realistic rates") {
    SynthProfile profile;
    profile.researchers = 2000;
    profile.seed = 606;
    auto corpus = generate_corpus(profile);
    auto baselines = build_baselines(corpus.publications);
    auto table = score_corpus(corpus, profile.window, WeightScheme{}, baselines);

    std::vector<CohortMember> members;
    for (const auto& r : table.rows)
        members.push_back(CohortMember{r.fss_star, r.percentile, r.top});
    auto stats = cohort_stats(members, ThresholdSpec{});
    CHECK(stats.pct_unproductive > 0.0);
    CHECK(stats.pct_unproductive <= stats.pct_bottom_small);
    CHECK(stats.pct_bottom_small <= stats.pct_bottom_large);
}

TEST_CASE("exclusion rules") {
    std::vector<ScoreRow> rows;
    auto extend = [&](std::vector<ScoreRow> more) {
        rows.insert(rows.end(), more.begin(), more.end());
    };
    // S-OK has 3+ observations everywhere, S-THIN only 2 in the north.
    extend(region_block("S-OK", MacroRegion::North, 3, 60, "U-N"));
    extend(region_block("S-OK", MacroRegion::Center, 5, 50, "U-C"));
    extend(region_block("S-OK", MacroRegion::South, 7, 40, "U-S"));
    extend(region_block("S-THIN", MacroRegion::North, 2, 60, "U-N"));
    extend(region_block("S-THIN", MacroRegion::Center, 5, 50, "U-C"));
    extend(region_block("S-THIN", MacroRegion::South, 7, 40, "U-S"));

    ExclusionPolicy policy;

    SUBCASE("region observation rule drops the thin SDS") {
        auto result = apply_exclusions(rows, policy, kRuleObsPerRegionSds);
        CHECK(result.retained.size() == 15);
        CHECK(result.excluded.size() == 14);
        REQUIRE(result.log.size() == 1);
        CHECK(result.log[0].unit_code == "S-THIN");
        CHECK(result.log[0].detail == "observations N/C/S = 2/5/7");
        CHECK(result.retained.size() + result.excluded.size() == rows.size());
    }
    SUBCASE("thresholds of one exclude nothing") {
        policy.min_obs_per_region_sds = 1;
        auto result = apply_exclusions(rows, policy, kRuleObsPerRegionSds);
        CHECK(result.excluded.empty());
        CHECK(result.log.empty());
    }
    SUBCASE("university-sds staff rule") {
        auto result = apply_exclusions(rows, policy, kRuleStaffPerUniversitySds);
        // S-THIN north cell has 2 staff; every other cell has >= 3
        REQUIRE(result.log.size() == 1);
        CHECK(result.log[0].unit_code == "U-N/S-THIN");
        CHECK(result.log[0].rule == kRuleStaffPerUniversitySds);
        CHECK(result.excluded.size() == 2);
    }
    SUBCASE("unknown rule") {
        try {
            apply_exclusions(rows, policy, "min_bogus");
            FAIL("expected UnknownRule");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::UnknownRule);
        }
    }
    SUBCASE("every excluded unit logged once") {
        auto result = apply_exclusions(rows, policy, kRuleObsPerRegionSds);
        std::set<std::string> units;
        for (const auto& entry : result.log) CHECK(units.insert(entry.unit_code).second);
    }
}

TEST_CASE("gap table reproduces the north-south fixture difference") {
    // Four observations per region; means 52.0, 47.8 and 45.6.
    std::vector<ScoreRow> rows;
    for (int i = 0; i < 4; ++i) {
        rows.push_back(row("S1", MacroRegion::North, 1.0, 52.0, "U-N"));
        rows.push_back(row("S1", MacroRegion::Center, 1.0, 47.8, "U-C"));
        rows.push_back(row("S1", MacroRegion::South, 1.0, 45.6, "U-S"));
    }
    auto table = gap_table(rows, ExclusionPolicy{});
    REQUIRE(table.rows.size() == 1);
    const GapRow& gap = table.rows[0];
    CHECK(gap.mean_north == 52.0);
    CHECK(gap.mean_south == 45.6);
    CHECK(gap.gap_north_south == 52.0 - 45.6); // exact, binade-aligned means
    CHECK(format_fixed(gap.gap_north_south, 1) == "6.4");
    CHECK(gap.gap_north_south == gap.gap_north_center + gap.gap_center_south);
}

TEST_CASE("identical regional distributions give zero gaps counted as nonnegative") {
    std::vector<ScoreRow> rows;
    for (MacroRegion region :
         {MacroRegion::North, MacroRegion::Center, MacroRegion::South}) {
        for (double p : {20.0, 50.0, 80.0}) rows.push_back(row("S1", region, 1.0, p));
    }
    auto table = gap_table(rows, ExclusionPolicy{});
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].gap_north_south == 0.0);
    for (const auto& s : table.summary) {
        CHECK(s.n_nonnegative == 1);
        CHECK(s.n_negative == 0);
    }
}

TEST_CASE("gap telescoping is exact on random tables") {
    Rng rng(733);
    std::vector<ScoreRow> rows;
    for (int sds = 0; sds < 40; ++sds) {
        std::string code = "S" + std::to_string(sds);
        for (MacroRegion region :
             {MacroRegion::North, MacroRegion::Center, MacroRegion::South}) {
            int count = 3 + static_cast<int>(rng.next_below(10));
            for (int i = 0; i < count; ++i)
                rows.push_back(row(code, region, rng.next_unit() * 2,
                                   static_cast<double>(rng.next_below(100000)) / 1000.0));
        }
    }
    auto table = gap_table(rows, ExclusionPolicy{});
    CHECK(table.rows.size() == 40);
    for (const auto& gap : table.rows)
        CHECK(gap.gap_north_south == gap.gap_north_center + gap.gap_center_south);
}

TEST_CASE("university report applies the five-professor rule per UDA") {
    std::vector<ScoreRow> rows;
    auto staff = [&](const std::string& university, MacroRegion region, int professors,
                     double fss_star) {
        for (int i = 0; i < professors; ++i) {
            auto r = row("S1", region, fss_star, 50.0, university);
            rows.push_back(r);
        }
    };
    staff("U-N", MacroRegion::North, 6, 1.5);
    staff("U-C", MacroRegion::Center, 5, 1.0);
    staff("U-S", MacroRegion::South, 4, 0.5); // dropped: fewer than five in the UDA

    auto report = university_report(rows, UniversityScope::Uda, ExclusionPolicy{},
                                    ThresholdSpec{});
    REQUIRE(report.exclusions.size() == 1);
    CHECK(report.exclusions[0].unit_code == "U-S/A01");
    REQUIRE(report.scores.size() == 2);

    std::set<std::string> ranked;
    for (const auto& u : report.scores) ranked.insert(u.university_id);
    CHECK(ranked == std::set<std::string>{"U-N", "U-C"});
}

TEST_CASE("three universities rank 0/50/100 and the north cohort tops out") {
    std::vector<ScoreRow> rows;
    auto staff = [&](const std::string& university, MacroRegion region, double fss_star) {
        for (int i = 0; i < 5; ++i) rows.push_back(row("S1", region, fss_star, 50.0, university));
    };
    staff("U-S", MacroRegion::South, 0.5);
    staff("U-C", MacroRegion::Center, 1.0);
    staff("U-N", MacroRegion::North, 1.5);

    auto report = university_report(rows, UniversityScope::Uda, ExclusionPolicy{},
                                    ThresholdSpec{});
    REQUIRE(report.scores.size() == 3);
    for (const auto& u : report.scores) {
        if (u.university_id == "U-S") CHECK(u.percentile == 0.0);
        if (u.university_id == "U-C") CHECK(u.percentile == 50.0);
        if (u.university_id == "U-N") CHECK(u.percentile == 100.0);
    }
    bool found_north = false;
    for (const auto& cohort : report.cohorts) {
        if (cohort.region == MacroRegion::North) {
            found_north = true;
            CHECK(cohort.stats.mean_percentile == 100.0);
            CHECK(cohort.stats.observations == 1);
        }
    }
    CHECK(found_north);
}

TEST_CASE("a single surviving university sits at percentile 50") {
    std::vector<ScoreRow> rows;
    for (int i = 0; i < 12; ++i) rows.push_back(row("S1", MacroRegion::North, 1.0, 50.0, "U-N"));
    auto report = university_report(rows, UniversityScope::Overall, ExclusionPolicy{},
                                    ThresholdSpec{});
    REQUIRE(report.scores.size() == 1);
    CHECK(report.scores[0].percentile == 50.0);
    CHECK(report.scores[0].research_staff == 12);
}

TEST_CASE("university gap table applies both of its rules") {
    std::vector<ScoreRow> rows;
    auto cell = [&](const std::string& sds, const std::string& university, MacroRegion region,
                    int staff, double fss_star) {
        for (int i = 0; i < staff; ++i) rows.push_back(row(sds, region, fss_star, 50.0, university));
    };
    // S1: three universities per region, all cells big enough.
    for (int u = 0; u < 3; ++u) {
        cell("S1", "UN" + std::to_string(u), MacroRegion::North, 3, 1.0 + u);
        cell("S1", "UC" + std::to_string(u), MacroRegion::Center, 3, 1.0);
        cell("S1", "US" + std::to_string(u), MacroRegion::South, 3, 0.5);
    }
    // S2: a thin cell knocks the north below three universities.
    cell("S2", "UN0", MacroRegion::North, 3, 1.0);
    cell("S2", "UN1", MacroRegion::North, 3, 1.0);
    cell("S2", "UN2", MacroRegion::North, 2, 1.0); // staff rule removes this cell
    for (int u = 0; u < 3; ++u) {
        cell("S2", "UC" + std::to_string(u), MacroRegion::Center, 3, 1.0);
        cell("S2", "US" + std::to_string(u), MacroRegion::South, 3, 1.0);
    }

    auto table = university_gap_table(rows, ExclusionPolicy{});
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].sds_code == "S1");
    CHECK(table.rows[0].n_north == 3);
    // exclusion log has the thin cell and then the dropped SDS
    REQUIRE(table.exclusions.size() == 2);
    CHECK(table.exclusions[0].unit_code == "UN2/S2");
    CHECK(table.exclusions[1].unit_code == "S2");
}
