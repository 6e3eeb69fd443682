#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "fss/corpus.hpp"

namespace fss {

// Deterministic random helpers on top of mt19937_64. All distributions are
// implemented here rather than taken from <random>, so a seed produces the
// same corpus on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    double next_unit();                       // [0, 1)
    std::uint64_t next_below(std::uint64_t n); // [0, n)
    bool bernoulli(double p);
    double normal(double mean, double sd);     // Box-Muller, no state cache
    long long poisson(double lambda);          // Knuth for small lambda

private:
    std::uint64_t state_[4];
};

struct RegionProfile {
    double researcher_share = 0.0;  // fraction of all researchers
    int universities = 0;
    double unproductive_share = 0.0; // fraction with zero cited output
    double effect = 1.0;             // multiplicative productivity factor
};

// Region order: North, Center, South. Default shares echo the national
// roster magnitudes (42.8 / 25.7 / 31.5).
struct SynthProfile {
    int researchers = 1000;
    std::array<RegionProfile, 3> regions{{
        {0.428, 10, 0.102, 1.0},
        {0.257, 8, 0.118, 1.0},
        {0.315, 9, 0.133, 1.0},
    }};
    int udas = 5;
    int sds_per_uda = 4;
    double position_weighted_share = 0.3; // fraction of SDSs with weighted bylines
    double pubs_per_year = 1.0;           // base publication rate, modulated per SDS
    double citation_log_mean = 1.0;       // lognormal citation body
    double citation_log_sd = 0.9;
    double uncited_pub_share = 0.15;      // extra pubs of productive researchers
    double extramural_share = 0.4;
    double female_share = 0.31;
    std::array<double, 3> rank_mix{0.39, 0.32, 0.29}; // assistant/associate/full
    double partial_spell_share = 0.15;
    ObservationWindow window{2009, 2013, Date{2014, 6, 30}};
    std::uint64_t seed = 42;
};

// Seeded corpus generation. Regional researcher counts use largest-remainder
// allocation, so realized shares match the profile to within rounding.
// Productive researchers always get at least one cited publication; the
// profile's unproductive share is drawn per researcher. Throws
// Errc::InfeasibleProfile when counts cannot work.
ResearchCorpus generate_corpus(const SynthProfile& profile);

// Reads a SynthProfile from JSON (same strictness as the pipeline config).
SynthProfile parse_profile_json(const std::string& json_text);
SynthProfile load_profile(const std::string& path);

} // namespace fss
