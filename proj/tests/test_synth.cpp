#include <doctest.h>

#include <cmath>

#include "fss/io.hpp"
#include "fss/normalization.hpp"
#include "fss/productivity.hpp"
#include "fss/synth.hpp"

using namespace fss;

TEST_CASE("same seed, same corpus") {
    SynthProfile profile;
    profile.researchers = 400;
    profile.seed = 42;
    auto a = generate_corpus(profile);
    auto b = generate_corpus(profile);

    REQUIRE(a.researchers.size() == b.researchers.size());
    REQUIRE(a.publications.size() == b.publications.size());
    for (std::size_t i = 0; i < a.researchers.size(); ++i) {
        CHECK(a.researchers[i].researcher_id == b.researchers[i].researcher_id);
        CHECK(a.researchers[i].sds_code == b.researchers[i].sds_code);
        CHECK(a.researchers[i].university_id == b.researchers[i].university_id);
    }
    for (std::size_t i = 0; i < a.publications.size(); ++i)
        CHECK(a.publications[i].citations == b.publications[i].citations);

    profile.seed = 43;
    auto c = generate_corpus(profile);
    bool any_difference = c.publications.size() != a.publications.size();
    for (std::size_t i = 0; !any_difference && i < a.researchers.size(); ++i)
        any_difference = a.researchers[i].sds_code != c.researchers[i].sds_code;
    CHECK(any_difference);
}

TEST_CASE("generated corpora validate clean and score end to end") {
    SynthProfile profile;
    profile.researchers = 500;
    profile.seed = 7;
    auto corpus = generate_corpus(profile);
    auto window = profile.window;
    CHECK(validate_corpus(corpus, &window).empty());

    auto baselines = build_baselines(corpus.publications);
    auto table = score_corpus(corpus, window, WeightScheme{}, baselines);
    CHECK(table.rows.size() == 500);
    CHECK(table.unscored_researchers == 0);
}

TEST_CASE("regional researcher shares track the profile") {
    SynthProfile profile;
    profile.researchers = 10000;
    profile.seed = 1234;
    auto corpus = generate_corpus(profile);

    std::map<std::string, MacroRegion> region_of;
    for (const auto& u : corpus.universities) region_of[u.university_id] = u.macro_region;
    std::array<int, 3> counts{0, 0, 0};
    for (const auto& r : corpus.researchers)
        counts[static_cast<std::size_t>(region_of.at(r.university_id))] += 1;

    // Table-1-like shares: 42.8 / 25.7 / 31.5, +-2 points.
    CHECK(std::fabs(100.0 * counts[0] / 10000.0 - 42.8) < 2.0);
    CHECK(std::fabs(100.0 * counts[1] / 10000.0 - 25.7) < 2.0);
    CHECK(std::fabs(100.0 * counts[2] / 10000.0 - 31.5) < 2.0);
}

TEST_CASE("unproductive shares track the profile at scale") {
    SynthProfile profile;
    profile.researchers = 6000;
    profile.seed = 99;
    auto corpus = generate_corpus(profile);
    auto baselines = build_baselines(corpus.publications);
    auto table = score_corpus(corpus, profile.window, WeightScheme{}, baselines);

    std::array<std::pair<int, int>, 3> tally{}; // (unproductive, total) per region
    for (const auto& row : table.rows) {
        auto& [zeros, total] = tally[static_cast<std::size_t>(row.region)];
        if (row.fss_star == 0.0) ++zeros;
        ++total;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        double share = 100.0 * tally[i].first / tally[i].second;
        double target = 100.0 * SynthProfile{}.regions[i].unproductive_share;
        CHECK(std::fabs(share - target) < 2.0);
    }
}

TEST_CASE("infeasible profiles are rejected") {
    SynthProfile profile;
    profile.researchers = 10; // 27 default universities cannot fit
    try {
        generate_corpus(profile);
        FAIL("expected InfeasibleProfile");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InfeasibleProfile);
    }

    SynthProfile bad;
    bad.regions[0].effect = 0.0;
    CHECK_THROWS_AS(generate_corpus(bad), Error);
}

TEST_CASE("profile JSON honors defaults and rejects unknown keys") {
    auto p = parse_profile_json(R"({"researchers": 50, "seed": 3,
                                    "regions": [{"share": 0.5, "universities": 2},
                                                {"share": 0.2, "universities": 1},
                                                {"share": 0.3, "universities": 1}]})");
    CHECK(p.researchers == 50);
    CHECK(p.seed == 3);
    CHECK(p.regions[0].universities == 2);
    CHECK(p.regions[2].researcher_share == 0.3);
    CHECK_THROWS_AS(parse_profile_json(R"({"researcher": 50})"), Error);
}

TEST_CASE("null regional effect leaves no systematic gap") {
    // delta = 1 and identical region parameters: the north-south mean
    // percentile difference is resampling noise only.
    SynthProfile profile;
    profile.researchers = 3000;
    profile.seed = 42;
    for (auto& region : profile.regions) region.unproductive_share = 0.11;
    auto corpus = generate_corpus(profile);
    auto baselines = build_baselines(corpus.publications);
    auto table = score_corpus(corpus, profile.window, WeightScheme{}, baselines);

    std::array<std::pair<double, int>, 3> acc{};
    for (const auto& row : table.rows) {
        auto& [sum, count] = acc[static_cast<std::size_t>(row.region)];
        sum += row.percentile;
        count += 1;
    }
    double north = acc[0].first / acc[0].second;
    double south = acc[2].first / acc[2].second;
    CHECK(std::fabs(north - south) < 3.0);
}
