#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "fss/corpus.hpp"

namespace fss {

struct BaselineCell {
    double mean_cited = 0.0;   // mean citations over cited publications only
    std::uint64_t n_cited = 0; // 0 when the cell comes from an override file
};

// c-bar lookup: (publication year, subject category) -> mean citations of
// the cited publications in that cell. Cells with no cited publication do
// not exist.
class CitationBaseline {
public:
    using Key = std::pair<int, std::string>;

    void set(int year, const std::string& category, BaselineCell cell) {
        cells_[{year, category}] = cell;
    }

    std::optional<BaselineCell> lookup(int year, const std::string& category) const {
        auto it = cells_.find({year, category});
        if (it == cells_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return cells_.size(); }
    auto begin() const { return cells_.begin(); }
    auto end() const { return cells_.end(); }

private:
    std::map<Key, BaselineCell> cells_;
};

// Mean citations per (year, category) over publications with citations >= 1.
// Uncited publications never contribute. Integer accumulation, one division
// per cell, so the result is the correctly rounded cell mean.
CitationBaseline build_baselines(std::span<const Publication> publications);

// c_i / c-bar. Multi-category publications divide by the arithmetic mean of
// their per-category baselines. Zero citations give 0 without any lookup;
// otherwise a missing cell throws Errc::MissingBaseline.
double scaling_factor(const Publication& pub, const CitationBaseline& baselines);

struct WeightTriple {
    double first = 0.0;
    double last = 0.0;
    double middle_pool = 0.0; // shared equally by all non-first non-last slots
};

// Byline weights for fields where author order signals contribution, split
// by co-authorship character. Each triple must sum to 1.
struct WeightScheme {
    WeightTriple intramural{0.40, 0.30, 0.30};
    WeightTriple extramural{0.30, 0.20, 0.50};
};

// f_i of the productivity formula. Alphabetical conventions give
// 1/total_authors; position-weighted bylines read the applicable triple.
// A sole author always gets 1. Two-author bylines renormalize (first, last)
// proportionally since there is no middle slot to take the pool.
double fractional_contribution(const Authorship& auth, BylineConvention convention,
                               const WeightScheme& weights);

} // namespace fss
