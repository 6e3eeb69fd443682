#include "fss/normalization.hpp"

#include <cstdint>

namespace fss {

CitationBaseline build_baselines(std::span<const Publication> publications) {
    // Integer sums keep the per-cell mean a single correctly rounded division.
    std::map<CitationBaseline::Key, std::pair<std::uint64_t, std::uint64_t>> acc;
    for (const auto& pub : publications) {
        if (pub.citations < 1) continue;
        for (const auto& category : pub.subject_categories) {
            auto& [sum, count] = acc[{pub.year, category}];
            sum += static_cast<std::uint64_t>(pub.citations);
            count += 1;
        }
    }
    CitationBaseline result;
    for (const auto& [key, sc] : acc) {
        result.set(key.first, key.second,
                   BaselineCell{static_cast<double>(sc.first) / static_cast<double>(sc.second),
                                sc.second});
    }
    return result;
}

double scaling_factor(const Publication& pub, const CitationBaseline& baselines) {
    if (pub.citations == 0) return 0.0;
    double sum = 0.0;
    for (const auto& category : pub.subject_categories) {
        auto cell = baselines.lookup(pub.year, category);
        if (!cell)
            throw Error(Errc::MissingBaseline,
                        "publication " + pub.pub_id + ": no baseline for (" +
                            std::to_string(pub.year) + ", " + category + ")");
        sum += cell->mean_cited;
    }
    double mean_baseline = sum / static_cast<double>(pub.subject_categories.size());
    return static_cast<double>(pub.citations) / mean_baseline;
}

double fractional_contribution(const Authorship& auth, BylineConvention convention,
                               const WeightScheme& weights) {
    const int n = auth.total_authors;
    if (auth.author_slot < 1 || auth.author_slot > n)
        throw Error(Errc::InvalidSlot, "publication " + auth.pub_id + ": slot " +
                                           std::to_string(auth.author_slot) + " of " +
                                           std::to_string(n));
    if (n == 1) return 1.0;
    if (convention == BylineConvention::Alphabetical) return 1.0 / static_cast<double>(n);

    const WeightTriple& w = auth.extramural_byline ? weights.extramural : weights.intramural;
    if (n == 2) {
        // No middle slot; first/last shares are renormalized to sum to 1.
        double head = w.first + w.last;
        return (auth.author_slot == 1 ? w.first : w.last) / head;
    }
    if (auth.author_slot == 1) return w.first;
    if (auth.author_slot == n) return w.last;
    return w.middle_pool / static_cast<double>(n - 2);
}

} // namespace fss
