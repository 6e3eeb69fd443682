#include "fss/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "fss/errors.hpp"

namespace fss {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

// xoshiro256** seeded through splitmix64; identical streams on every
// platform, unlike the <random> distributions.
Rng::Rng(std::uint64_t seed) {
    for (auto& s : state_) s = splitmix64(seed);
}

std::uint64_t Rng::next_u64() {
    std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::next_below(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t limit = ~0ull - ~0ull % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

bool Rng::bernoulli(double p) {
    return next_unit() < p;
}

double Rng::normal(double mean, double sd) {
    double u1;
    do {
        u1 = next_unit();
    } while (u1 == 0.0);
    double u2 = next_unit();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

long long Rng::poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    double limit = std::exp(-lambda);
    long long k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= next_unit();
    } while (p > limit);
    return k - 1;
}

namespace {

std::string padded(const char* prefix, int value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, value);
    return buf;
}

void check_profile(const SynthProfile& p) {
    auto fail = [](const std::string& msg) { throw Error(Errc::InfeasibleProfile, msg); };
    if (p.researchers < 1) fail("researchers must be >= 1");
    if (p.udas < 1 || p.sds_per_uda < 1) fail("need at least one SDS");
    double share_sum = 0.0;
    int total_universities = 0;
    for (const auto& r : p.regions) {
        if (r.researcher_share < 0.0 || r.researcher_share > 1.0)
            fail("researcher_share outside [0, 1]");
        if (r.universities < 1) fail("every region needs a university");
        if (r.unproductive_share < 0.0 || r.unproductive_share > 1.0)
            fail("unproductive_share outside [0, 1]");
        if (!(r.effect > 0.0)) fail("regional effect must be positive");
        share_sum += r.researcher_share;
        total_universities += r.universities;
    }
    if (share_sum <= 0.0) fail("researcher shares sum to zero");
    if (total_universities > p.researchers) fail("more universities than researchers");
    if (p.window.first_year > p.window.last_year) fail("window is inverted");
}

// Largest-remainder split of `total` into shares; realized counts differ
// from the exact quotas by at most one.
std::array<int, 3> allocate_regions(int total, const std::array<RegionProfile, 3>& regions) {
    double share_sum = 0.0;
    for (const auto& r : regions) share_sum += r.researcher_share;
    std::array<double, 3> quota{};
    std::array<int, 3> count{};
    int assigned = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        quota[i] = static_cast<double>(total) * (regions[i].researcher_share / share_sum);
        count[i] = static_cast<int>(quota[i]);
        assigned += count[i];
    }
    std::array<std::size_t, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double fa = quota[a] - std::floor(quota[a]);
        double fb = quota[b] - std::floor(quota[b]);
        if (fa != fb) return fa > fb;
        return a < b;
    });
    for (std::size_t i = 0; assigned < total; ++i, ++assigned) count[order[i % 3]] += 1;
    return count;
}

struct SdsParams {
    double rate = 1.0;
    double citation_mu = 1.0;
    double citation_sigma = 1.0;
    double authors_mean = 3.0;
};

} // namespace

ResearchCorpus generate_corpus(const SynthProfile& profile) {
    check_profile(profile);
    Rng rng(profile.seed);
    ResearchCorpus corpus;
    const ObservationWindow& window = profile.window;

    // Universities, numbered across regions in North/Center/South order.
    std::array<std::vector<std::string>, 3> region_universities;
    int uni_seq = 0;
    for (std::size_t ri = 0; ri < 3; ++ri) {
        auto region = static_cast<MacroRegion>(ri);
        for (int k = 0; k < profile.regions[ri].universities; ++k) {
            University u;
            u.university_id = padded("U", ++uni_seq, 3);
            u.name = "University " + std::to_string(uni_seq);
            u.macro_region = region;
            region_universities[ri].push_back(u.university_id);
            corpus.universities.push_back(std::move(u));
        }
    }

    // Field scheme: UDA codes A01.., SDS codes A01/01.. with the leading
    // fraction of each UDA using position-weighted bylines.
    std::vector<std::string> sds_codes;
    for (int u = 1; u <= profile.udas; ++u) {
        std::string uda = padded("A", u, 2);
        int weighted = static_cast<int>(profile.position_weighted_share *
                                        static_cast<double>(profile.sds_per_uda));
        for (int s = 1; s <= profile.sds_per_uda; ++s) {
            std::string sds = uda + "/" + padded("", s, 2);
            corpus.fields.emplace(sds, FieldEntry{uda, s <= weighted
                                                           ? BylineConvention::PositionWeighted
                                                           : BylineConvention::Alphabetical});
            sds_codes.push_back(std::move(sds));
        }
    }

    // Salary scale: integer euros so tests can rescale it exactly.
    constexpr std::array<std::pair<AcademicRank, int>, 3> bases{
        {{AcademicRank::Assistant, 30000},
         {AcademicRank::Associate, 42000},
         {AcademicRank::Full, 58000}}};
    for (const auto& [rank, base] : bases)
        for (int band = 0; band < 5; ++band)
            corpus.salaries.table[{rank, band}] = static_cast<double>(base + base / 20 * band);

    // Per-SDS publication behavior, drawn once up front.
    std::vector<SdsParams> sds_params(sds_codes.size());
    for (auto& p : sds_params) {
        p.rate = profile.pubs_per_year * (0.6 + 0.8 * rng.next_unit());
        p.citation_mu = profile.citation_log_mean + 0.4 * (rng.next_unit() - 0.5);
        p.citation_sigma = profile.citation_log_sd * (0.75 + 0.5 * rng.next_unit());
        p.authors_mean = 2.0 + 4.0 * rng.next_unit();
    }

    const std::array<int, 3> region_counts = allocate_regions(profile.researchers,
                                                              profile.regions);
    const long long window_begin = serial_day(Date{window.first_year, 1, 1});
    const long long window_end = serial_day(Date{window.last_year + 1, 1, 1});
    const long long window_days = window_end - window_begin;

    auto date_of = [](long long serial) {
        // Serial back to civil via linear scan over years; generation only.
        int year = static_cast<int>(1970 + serial / 366);
        while (fss::serial_day(Date{year + 1, 1, 1}) <= serial) ++year;
        while (fss::serial_day(Date{year, 1, 1}) > serial) --year;
        long long rest = serial - fss::serial_day(Date{year, 1, 1});
        int month = 1;
        while (rest >= days_in_month(year, month)) {
            rest -= days_in_month(year, month);
            ++month;
        }
        return Date{year, month, static_cast<int>(rest) + 1};
    };

    int researcher_seq = 0;
    int pub_seq = 0;
    for (std::size_t ri = 0; ri < 3; ++ri) {
        const RegionProfile& region = profile.regions[ri];
        for (int k = 0; k < region_counts[ri]; ++k) {
            Researcher r;
            r.researcher_id = padded("R", ++researcher_seq, 6);
            r.gender = rng.bernoulli(profile.female_share) ? Gender::F : Gender::M;
            r.sds_code = sds_codes[rng.next_below(sds_codes.size())];
            r.university_id =
                region_universities[ri][rng.next_below(region_universities[ri].size())];

            double pick = rng.next_unit();
            AcademicRank rank = pick < profile.rank_mix[0] ? AcademicRank::Assistant
                                : pick < profile.rank_mix[0] + profile.rank_mix[1]
                                    ? AcademicRank::Associate
                                    : AcademicRank::Full;

            EmploymentSpell spell;
            spell.rank = rank;
            spell.seniority_band = static_cast<int>(rng.next_below(5));
            double coverage = 1.0;
            if (window_days > 500 && rng.bernoulli(profile.partial_spell_share)) {
                long long offset = static_cast<long long>(
                    rng.next_below(static_cast<std::uint64_t>(window_days / 2)));
                spell.start = date_of(window_begin + offset);
                long long room = window_days - offset - 200;
                if (room > 0 && rng.bernoulli(0.5)) {
                    long long last = window_begin + offset + 200 +
                                     static_cast<long long>(
                                         rng.next_below(static_cast<std::uint64_t>(room)));
                    spell.end = date_of(last);
                    coverage = static_cast<double>(last - window_begin - offset) /
                               static_cast<double>(window_days);
                } else {
                    coverage = static_cast<double>(window_days - offset) /
                               static_cast<double>(window_days);
                }
            } else {
                spell.start = Date{window.first_year, 1, 1};
            }
            r.spells.push_back(spell);

            const SdsParams& params =
                sds_params[static_cast<std::size_t>(std::find(sds_codes.begin(), sds_codes.end(),
                                                              r.sds_code) -
                                                    sds_codes.begin())];
            double years = coverage * static_cast<double>(window.span_years());

            int n_pubs = 0;
            bool productive = !rng.bernoulli(region.unproductive_share);
            if (productive) {
                n_pubs = 1 + static_cast<int>(rng.poisson(params.rate * years * region.effect));
            } else if (rng.bernoulli(0.5)) {
                n_pubs = 1 + static_cast<int>(rng.next_below(2)); // uncited output only
            }

            for (int pi = 0; pi < n_pubs; ++pi) {
                Publication pub;
                pub.pub_id = padded("P", ++pub_seq, 7);
                pub.year = window.first_year +
                           static_cast<int>(rng.next_below(
                               static_cast<std::uint64_t>(window.span_years())));
                double doc_pick = rng.next_unit();
                pub.doc_type = doc_pick < 0.8    ? DocType::Article
                               : doc_pick < 0.9 ? DocType::Review
                                                : DocType::ProceedingsPaper;
                bool cited = productive && (pi == 0 || !rng.bernoulli(profile.uncited_pub_share));
                if (cited) {
                    double draw = std::exp(rng.normal(params.citation_mu, params.citation_sigma));
                    pub.citations = std::max(1ll, std::llround(draw));
                }
                pub.subject_categories.push_back("K" + r.sds_code);
                if (rng.bernoulli(0.25))
                    pub.subject_categories.push_back("KU" + corpus.fields.at(r.sds_code).uda_code);

                Authorship auth;
                auth.pub_id = pub.pub_id;
                auth.total_authors =
                    1 + static_cast<int>(rng.poisson(params.authors_mean - 1.0));
                auth.author_slot =
                    1 + static_cast<int>(rng.next_below(
                            static_cast<std::uint64_t>(auth.total_authors)));
                auth.researcher_id = r.researcher_id;
                auth.extramural_byline = rng.bernoulli(profile.extramural_share);

                corpus.publications.push_back(std::move(pub));
                corpus.authorships.push_back(std::move(auth));
            }
            corpus.researchers.push_back(std::move(r));
        }
    }
    return corpus;
}

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) known = true;
        if (!known)
            throw Error(Errc::ConfigError, "unknown key '" + it.key() + "' in " + where);
    }
}

} // namespace

SynthProfile parse_profile_json(const std::string& json_text) {
    json root = json::parse(json_text);
    if (!root.is_object()) throw Error(Errc::ConfigError, "profile must be a JSON object");
    reject_unknown(root,
                   {"researchers", "regions", "udas", "sds_per_uda", "position_weighted_share",
                    "pubs_per_year", "citation_log_mean", "citation_log_sd", "uncited_pub_share",
                    "extramural_share", "female_share", "rank_mix", "partial_spell_share",
                    "window", "seed"},
                   "profile");

    SynthProfile p;
    auto number = [&](const char* key, double fallback) {
        return root.contains(key) ? root.at(key).get<double>() : fallback;
    };
    p.researchers = static_cast<int>(number("researchers", p.researchers));
    p.udas = static_cast<int>(number("udas", p.udas));
    p.sds_per_uda = static_cast<int>(number("sds_per_uda", p.sds_per_uda));
    p.position_weighted_share = number("position_weighted_share", p.position_weighted_share);
    p.pubs_per_year = number("pubs_per_year", p.pubs_per_year);
    p.citation_log_mean = number("citation_log_mean", p.citation_log_mean);
    p.citation_log_sd = number("citation_log_sd", p.citation_log_sd);
    p.uncited_pub_share = number("uncited_pub_share", p.uncited_pub_share);
    p.extramural_share = number("extramural_share", p.extramural_share);
    p.female_share = number("female_share", p.female_share);
    p.partial_spell_share = number("partial_spell_share", p.partial_spell_share);
    if (root.contains("seed")) p.seed = root.at("seed").get<std::uint64_t>();

    if (root.contains("rank_mix")) {
        const auto& mix = root.at("rank_mix");
        if (!mix.is_array() || mix.size() != 3)
            throw Error(Errc::ConfigError, "rank_mix must be an array of 3 numbers");
        for (std::size_t i = 0; i < 3; ++i) p.rank_mix[i] = mix[i].get<double>();
    }
    if (root.contains("regions")) {
        const auto& regions = root.at("regions");
        if (!regions.is_array() || regions.size() != 3)
            throw Error(Errc::ConfigError, "regions must be an array of 3 objects (N, C, S)");
        for (std::size_t i = 0; i < 3; ++i) {
            const auto& r = regions[i];
            reject_unknown(r, {"share", "universities", "unproductive_share", "effect"},
                           "regions[" + std::to_string(i) + "]");
            if (r.contains("share")) p.regions[i].researcher_share = r.at("share").get<double>();
            if (r.contains("universities"))
                p.regions[i].universities = r.at("universities").get<int>();
            if (r.contains("unproductive_share"))
                p.regions[i].unproductive_share = r.at("unproductive_share").get<double>();
            if (r.contains("effect")) p.regions[i].effect = r.at("effect").get<double>();
        }
    }
    if (root.contains("window")) {
        const auto& w = root.at("window");
        reject_unknown(w, {"first_year", "last_year", "census_date"}, "window");
        if (w.contains("first_year")) p.window.first_year = w.at("first_year").get<int>();
        if (w.contains("last_year")) p.window.last_year = w.at("last_year").get<int>();
        if (w.contains("census_date")) {
            auto d = parse_date(w.at("census_date").get<std::string>());
            if (!d) throw Error(Errc::ConfigError, "window.census_date is not a date");
            p.window.citation_census_date = *d;
        }
    }
    return p;
}

SynthProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::MissingFile, path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_profile_json(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ConfigError, path + ": " + e.what());
    }
}

} // namespace fss
