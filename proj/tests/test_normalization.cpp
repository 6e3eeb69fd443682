#include <doctest.h>

#include <cmath>

#include "fss/normalization.hpp"
#include "fss/synth.hpp"
#include "oracles.hpp"

using namespace fss;

namespace {

Publication pub(std::string id, int year, long long citations,
                std::vector<std::string> categories) {
    Publication p;
    p.pub_id = std::move(id);
    p.year = year;
    p.citations = citations;
    p.subject_categories = std::move(categories);
    return p;
}

Authorship byline_slot(int slot, int total, bool extramural = false) {
    Authorship a;
    a.pub_id = "P1";
    a.author_slot = slot;
    a.total_authors = total;
    a.extramural_byline = extramural;
    return a;
}

} // namespace

TEST_CASE("baseline mean covers cited publications only") {
    std::vector<Publication> pubs = {
        pub("P1", 2010, 2, {"Biochemistry"}),
        pub("P2", 2010, 4, {"Biochemistry"}),
        pub("P3", 2010, 6, {"Biochemistry"}),
        pub("P4", 2010, 0, {"Biochemistry"}), // uncited, excluded from the mean
    };
    auto baselines = build_baselines(pubs);
    auto cell = baselines.lookup(2010, "Biochemistry");
    REQUIRE(cell.has_value());
    CHECK(cell->mean_cited == 4.0);
    CHECK(cell->n_cited == 3);
}

TEST_CASE("singleton and all-uncited cells") {
    std::vector<Publication> pubs = {
        pub("P1", 2011, 7, {"Physics"}),
        pub("P2", 2011, 0, {"Geology"}),
    };
    auto baselines = build_baselines(pubs);
    auto physics = baselines.lookup(2011, "Physics");
    REQUIRE(physics.has_value());
    CHECK(physics->mean_cited == 7.0);
    CHECK(!baselines.lookup(2011, "Geology").has_value());
}

TEST_CASE("baselines equal the brute-force group-by mean exactly") {
    Rng rng(90210);
    std::vector<Publication> pubs;
    const char* cats[] = {"A", "B", "C", "D", "E"};
    for (int i = 0; i < 10000; ++i) {
        std::vector<std::string> these{cats[rng.next_below(5)]};
        if (rng.bernoulli(0.3)) these.push_back(cats[rng.next_below(5)]);
        if (these.size() == 2 && these[0] == these[1]) these.pop_back();
        pubs.push_back(pub("P" + std::to_string(i), 2009 + static_cast<int>(rng.next_below(5)),
                           static_cast<long long>(rng.next_below(40)), std::move(these)));
    }
    auto engine = build_baselines(pubs);
    auto brute = oracle::oracle_baselines(pubs);
    REQUIRE(engine.size() == brute.size());
    for (const auto& [key, cell] : engine) {
        auto it = brute.find(key);
        REQUIRE(it != brute.end());
        CHECK(cell.mean_cited == it->second.first); // bitwise: same integer ratio
        CHECK(cell.n_cited == it->second.second);
    }
}

TEST_CASE("adding an uncited publication never moves a baseline") {
    std::vector<Publication> pubs = {
        pub("P1", 2010, 3, {"A"}),
        pub("P2", 2010, 9, {"A", "B"}),
        pub("P3", 2012, 5, {"B"}),
    };
    auto before = build_baselines(pubs);
    pubs.push_back(pub("P4", 2010, 0, {"A", "B"}));
    pubs.push_back(pub("P5", 2012, 0, {"B"}));
    auto after = build_baselines(pubs);
    REQUIRE(before.size() == after.size());
    for (const auto& [key, cell] : before) {
        auto other = after.lookup(key.first, key.second);
        REQUIRE(other.has_value());
        CHECK(cell.mean_cited == other->mean_cited);
        CHECK(cell.n_cited == other->n_cited);
    }
}

TEST_CASE("scaling factor is citations over the mean of category baselines") {
    CitationBaseline baselines;
    baselines.set(2010, "X", BaselineCell{5.0, 3});
    baselines.set(2010, "Y", BaselineCell{4.0, 2});
    baselines.set(2010, "Z", BaselineCell{8.0, 2});

    CHECK(scaling_factor(pub("P1", 2010, 10, {"X"}), baselines) == 2.0);
    CHECK(scaling_factor(pub("P2", 2010, 0, {"X"}), baselines) == 0.0);
    // two categories: 6 / ((4+8)/2) = 1
    CHECK(scaling_factor(pub("P3", 2010, 6, {"Y", "Z"}), baselines) == 1.0);

    SUBCASE("missing baseline for a cited publication") {
        try {
            scaling_factor(pub("P4", 2010, 3, {"W"}), baselines);
            FAIL("expected MissingBaseline");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::MissingBaseline);
        }
    }
    SUBCASE("uncited publication never consults the table") {
        CHECK(scaling_factor(pub("P5", 2019, 0, {"NoSuch"}), baselines) == 0.0);
    }
}

TEST_CASE("scaling factor scales exactly with citations") {
    CitationBaseline baselines;
    baselines.set(2012, "X", BaselineCell{7.0, 4});
    auto once = scaling_factor(pub("P1", 2012, 13, {"X"}), baselines);
    auto twice = scaling_factor(pub("P2", 2012, 26, {"X"}), baselines);
    CHECK(twice == 2.0 * once);
    CHECK(scaling_factor(pub("P3", 2012, 7, {"X"}), baselines) == 1.0);
}

TEST_CASE("fractional contribution under both conventions") {
    WeightScheme weights;

    CHECK(fractional_contribution(byline_slot(2, 4), BylineConvention::Alphabetical, weights) ==
          0.25);
    CHECK(fractional_contribution(byline_slot(1, 1), BylineConvention::PositionWeighted,
                                  weights) == 1.0);
    CHECK(fractional_contribution(byline_slot(1, 1), BylineConvention::Alphabetical, weights) ==
          1.0);

    // intramural default (0.40, 0.30, 0.30), four authors
    CHECK(fractional_contribution(byline_slot(1, 4), BylineConvention::PositionWeighted,
                                  weights) == 0.40);
    CHECK(fractional_contribution(byline_slot(2, 4), BylineConvention::PositionWeighted,
                                  weights) == 0.15);
    CHECK(fractional_contribution(byline_slot(3, 4), BylineConvention::PositionWeighted,
                                  weights) == 0.15);
    CHECK(fractional_contribution(byline_slot(4, 4), BylineConvention::PositionWeighted,
                                  weights) == 0.30);

    // extramural triple applies when the byline crosses institutions
    CHECK(fractional_contribution(byline_slot(1, 5, true), BylineConvention::PositionWeighted,
                                  weights) == 0.30);
    CHECK(fractional_contribution(byline_slot(5, 5, true), BylineConvention::PositionWeighted,
                                  weights) == 0.20);
    CHECK(fractional_contribution(byline_slot(3, 5, true), BylineConvention::PositionWeighted,
                                  weights) == doctest::Approx(0.5 / 3).epsilon(1e-15));

    // two authors: (first, last) renormalized
    CHECK(fractional_contribution(byline_slot(1, 2), BylineConvention::PositionWeighted,
                                  weights) == doctest::Approx(0.4 / 0.7).epsilon(1e-15));
    CHECK(fractional_contribution(byline_slot(2, 2), BylineConvention::PositionWeighted,
                                  weights) == doctest::Approx(0.3 / 0.7).epsilon(1e-15));

    SUBCASE("slot past the byline end") {
        try {
            fractional_contribution(byline_slot(5, 4), BylineConvention::Alphabetical, weights);
            FAIL("expected InvalidSlot");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::InvalidSlot);
        }
    }
}

TEST_CASE("byline contributions sum to one for every byline") {
    Rng rng(404);
    for (int trial = 0; trial < 300; ++trial) {
        WeightScheme weights;
        if (trial % 3 == 1) {
            // random triples that sum to 1
            double a = rng.next_unit(), b = rng.next_unit() * (1.0 - a);
            weights.intramural = WeightTriple{a, b, 1.0 - a - b};
            double c = rng.next_unit(), d = rng.next_unit() * (1.0 - c);
            weights.extramural = WeightTriple{c, d, 1.0 - c - d};
        }
        int n = 1 + static_cast<int>(rng.next_below(12));
        auto convention = rng.bernoulli(0.5) ? BylineConvention::Alphabetical
                                             : BylineConvention::PositionWeighted;
        bool extramural = rng.bernoulli(0.5);
        double sum = 0.0;
        for (int slot = 1; slot <= n; ++slot)
            sum += fractional_contribution(byline_slot(slot, n, extramural), convention, weights);
        CHECK(std::fabs(sum - 1.0) < 1e-12);
    }
}
