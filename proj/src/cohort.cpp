#include "fss/cohort.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "fss/numeric.hpp"

namespace fss {

namespace {

constexpr std::array<MacroRegion, 3> kRegions{MacroRegion::North, MacroRegion::Center,
                                              MacroRegion::South};

std::size_t region_index(MacroRegion r) {
    return static_cast<std::size_t>(r);
}

double share(std::int64_t count, std::int64_t total) {
    return static_cast<double>(100 * count) / static_cast<double>(total);
}

} // namespace

CohortStats cohort_stats(std::span<const CohortMember> members, const ThresholdSpec& spec) {
    if (members.empty()) throw Error(Errc::EmptyCohort, "no members");

    const auto n = static_cast<std::int64_t>(members.size());
    std::int64_t unproductive = 0, bottom_small = 0, bottom_large = 0, above_median = 0;
    std::int64_t top_large = 0, top_small = 0, top = 0;
    KahanSum star_sum, pct_sum;

    for (const auto& m : members) {
        star_sum.add(m.fss_star);
        pct_sum.add(m.percentile);
        if (m.fss_star == 0.0) ++unproductive;
        if (m.percentile <= spec.bottom_small) ++bottom_small;
        if (m.percentile <= spec.bottom_large) ++bottom_large;
        if (m.percentile > 50.0) ++above_median;
        if (m.percentile >= 100.0 - spec.top_large) ++top_large;
        if (m.percentile >= 100.0 - spec.top_small) ++top_small;
        if (spec.top_rule == ThresholdSpec::TopRule::StrictMax ? m.top
                                                               : m.percentile >= spec.top_cut)
            ++top;
    }

    CohortStats stats;
    stats.observations = n;
    stats.pct_unproductive = share(unproductive, n);
    stats.mean_fss_star = star_sum.value() / static_cast<double>(n);
    stats.mean_percentile = pct_sum.value() / static_cast<double>(n);
    stats.pct_bottom_small = share(bottom_small, n);
    stats.pct_bottom_large = share(bottom_large, n);
    stats.pct_above_median = share(above_median, n);
    stats.pct_top_large = share(top_large, n);
    stats.pct_top_small = share(top_small, n);
    stats.pct_top = share(top, n);
    return stats;
}

namespace {

// Count rows per unit, mark units under the threshold, split rows.
template <typename KeyFn, typename FailFn>
ExclusionResult exclude_units(std::span<const ScoreRow> rows, const std::string& rule,
                              const std::string& unit_kind, KeyFn key_of, FailFn unit_fails) {
    ExclusionResult result;
    std::set<std::string> failed;
    std::map<std::string, std::string> details;
    // First pass done by the caller via unit_fails; here we just split.
    for (const auto& row : rows) {
        std::string key = key_of(row);
        auto it = failed.find(key);
        bool fails;
        if (it != failed.end()) {
            fails = true;
        } else if (details.contains(key)) {
            fails = false;
        } else {
            auto verdict = unit_fails(key);
            fails = verdict.first;
            if (fails)
                failed.insert(key);
            details.emplace(key, std::move(verdict.second));
            if (fails)
                result.log.push_back(ExclusionRecord{rule, unit_kind, key, details.at(key)});
        }
        (fails ? result.excluded : result.retained).push_back(row);
    }
    std::sort(result.log.begin(), result.log.end(),
              [](const ExclusionRecord& a, const ExclusionRecord& b) {
                  return a.unit_code < b.unit_code;
              });
    return result;
}

std::string cell_key(const std::string& university, const std::string& code) {
    return university + "/" + code;
}

} // namespace

ExclusionResult apply_exclusions(std::span<const ScoreRow> rows, const ExclusionPolicy& policy,
                                 const std::string& rule) {
    if (rule == kRuleObsPerRegionSds) {
        std::map<std::string, std::array<std::int64_t, 3>> counts;
        for (const auto& row : rows) counts[row.sds_code][region_index(row.region)] += 1;
        return exclude_units(
            rows, rule, "sds", [](const ScoreRow& r) { return r.sds_code; },
            [&](const std::string& sds) {
                const auto& c = counts.at(sds);
                bool fails = c[0] < policy.min_obs_per_region_sds ||
                             c[1] < policy.min_obs_per_region_sds ||
                             c[2] < policy.min_obs_per_region_sds;
                std::string detail = "observations N/C/S = " + std::to_string(c[0]) + "/" +
                                     std::to_string(c[1]) + "/" + std::to_string(c[2]);
                return std::make_pair(fails, detail);
            });
    }
    if (rule == kRuleUniversitiesPerRegionSds) {
        std::map<std::string, std::array<std::set<std::string>, 3>> unis;
        for (const auto& row : rows)
            unis[row.sds_code][region_index(row.region)].insert(row.university_id);
        return exclude_units(
            rows, rule, "sds", [](const ScoreRow& r) { return r.sds_code; },
            [&](const std::string& sds) {
                const auto& u = unis.at(sds);
                auto min = static_cast<std::size_t>(policy.min_universities_per_region_sds);
                bool fails =
                    u[0].size() < min || u[1].size() < min || u[2].size() < min;
                std::string detail = "universities N/C/S = " + std::to_string(u[0].size()) +
                                     "/" + std::to_string(u[1].size()) + "/" +
                                     std::to_string(u[2].size());
                return std::make_pair(fails, detail);
            });
    }

    const bool staff_rule = rule == kRuleStaffPerUniversitySds;
    const bool overall_rule = rule == kRuleProfessorsPerSdsUniversityOverall;
    const bool uda_rule = rule == kRuleProfessorsPerUniversityUda;
    if (!staff_rule && !overall_rule && !uda_rule)
        throw Error(Errc::UnknownRule, rule);

    std::map<std::string, std::int64_t> counts;
    for (const auto& row : rows)
        counts[cell_key(row.university_id, uda_rule ? row.uda_code : row.sds_code)] += 1;
    const int threshold = staff_rule     ? policy.min_staff_per_university_sds
                          : overall_rule ? policy.min_professors_per_sds_university_overall
                                         : policy.min_professors_per_university_uda;
    const std::string unit_kind = uda_rule ? "university_uda" : "university_sds";
    return exclude_units(
        rows, rule, unit_kind,
        [&](const ScoreRow& r) {
            return cell_key(r.university_id, uda_rule ? r.uda_code : r.sds_code);
        },
        [&](const std::string& cell) {
            std::int64_t c = counts.at(cell);
            return std::make_pair(c < threshold, "professors = " + std::to_string(c));
        });
}

namespace {

struct RegionalMeans {
    std::array<KahanSum, 3> sums;
    std::array<std::int64_t, 3> counts{0, 0, 0};
};

GapRow make_gap_row(const std::string& sds, const RegionalMeans& m) {
    GapRow row;
    row.sds_code = sds;
    row.n_north = m.counts[0];
    row.n_center = m.counts[1];
    row.n_south = m.counts[2];
    row.mean_north = m.sums[0].value() / static_cast<double>(m.counts[0]);
    row.mean_center = m.sums[1].value() / static_cast<double>(m.counts[1]);
    row.mean_south = m.sums[2].value() / static_cast<double>(m.counts[2]);
    row.gap_north_center = row.mean_north - row.mean_center;
    row.gap_center_south = row.mean_center - row.mean_south;
    row.gap_north_south = row.gap_north_center + row.gap_center_south;
    return row;
}

std::vector<GapPairSummary> summarize_gaps(const std::vector<GapRow>& rows) {
    struct Pair {
        const char* name;
        double GapRow::*field;
    };
    static constexpr Pair pairs[] = {{"north_south", &GapRow::gap_north_south},
                                     {"north_center", &GapRow::gap_north_center},
                                     {"center_south", &GapRow::gap_center_south}};
    std::vector<GapPairSummary> out;
    for (const auto& pair : pairs) {
        GapPairSummary s;
        s.comparison = pair.name;
        bool first = true;
        for (const auto& row : rows) {
            double g = row.*pair.field;
            if (first || g > s.highest.gap) s.highest = GapExtreme{g, row.sds_code};
            if (first || g < s.lowest.gap) s.lowest = GapExtreme{g, row.sds_code};
            (g >= 0.0 ? s.n_nonnegative : s.n_negative) += 1;
            first = false;
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace

GapTable gap_table(std::span<const ScoreRow> rows, const ExclusionPolicy& policy) {
    ExclusionResult excl = apply_exclusions(rows, policy, kRuleObsPerRegionSds);

    std::map<std::string, RegionalMeans> by_sds;
    for (const auto& row : excl.retained) {
        auto& m = by_sds[row.sds_code];
        m.sums[region_index(row.region)].add(row.percentile);
        m.counts[region_index(row.region)] += 1;
    }

    GapTable table;
    for (const auto& [sds, means] : by_sds) table.rows.push_back(make_gap_row(sds, means));
    table.summary = summarize_gaps(table.rows);
    table.exclusions = std::move(excl.log);
    return table;
}

namespace {

struct UniversityCell {
    std::vector<double> member_stars;
    MacroRegion region = MacroRegion::North;
};

// Rank the universities of one pool by fss_u and flag the strict maximum.
void rank_pool(std::vector<UniversityScore>& pool, std::vector<bool>& top_flags) {
    std::vector<double> values;
    values.reserve(pool.size());
    for (const auto& u : pool) values.push_back(u.fss_u);
    std::vector<double> percentiles = rank_percentiles(values);

    double max_value = 0.0;
    std::size_t max_count = 0;
    for (double v : values) {
        if (v > max_value) {
            max_value = v;
            max_count = 1;
        } else if (v == max_value) {
            ++max_count;
        }
    }
    top_flags.assign(pool.size(), false);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        pool[i].percentile = percentiles[i];
        top_flags[i] = max_value > 0.0 && max_count == 1 && values[i] == max_value;
    }
}

} // namespace

UniversityReport university_report(std::span<const ScoreRow> rows, UniversityScope scope,
                                   const ExclusionPolicy& policy, const ThresholdSpec& spec) {
    UniversityReport report;

    const char* rule = scope == UniversityScope::Uda   ? kRuleProfessorsPerUniversityUda
                       : scope == UniversityScope::Sds ? kRuleStaffPerUniversitySds
                                                       : kRuleProfessorsPerSdsUniversityOverall;
    ExclusionResult excl = apply_exclusions(rows, policy, rule);
    report.exclusions = std::move(excl.log);

    // scope code -> university -> staff scores
    std::map<std::string, std::map<std::string, UniversityCell>> pools;
    for (const auto& row : excl.retained) {
        std::string code = scope == UniversityScope::Uda   ? row.uda_code
                           : scope == UniversityScope::Sds ? row.sds_code
                                                           : std::string("overall");
        auto& cell = pools[code][row.university_id];
        cell.member_stars.push_back(row.fss_star);
        cell.region = row.region;
    }

    for (const auto& [code, universities] : pools) {
        std::vector<UniversityScore> pool;
        pool.reserve(universities.size());
        for (const auto& [university_id, cell] : universities) {
            UniversityScore score;
            score.university_id = university_id;
            score.scope_code = code;
            score.fss_u = university_score(cell.member_stars);
            score.research_staff = static_cast<std::int64_t>(cell.member_stars.size());
            score.region = cell.region;
            pool.push_back(std::move(score));
        }
        std::vector<bool> top_flags;
        rank_pool(pool, top_flags);

        for (MacroRegion region : kRegions) {
            std::vector<CohortMember> members;
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (pool[i].region == region)
                    members.push_back(
                        CohortMember{pool[i].fss_u, pool[i].percentile, top_flags[i]});
            }
            if (members.empty()) continue;
            report.cohorts.push_back(UniversityCohortRow{code, region,
                                                         cohort_stats(members, spec)});
        }
        report.scores.insert(report.scores.end(), pool.begin(), pool.end());
    }
    return report;
}

GapTable university_gap_table(std::span<const ScoreRow> rows, const ExclusionPolicy& policy) {
    ExclusionResult staff = apply_exclusions(rows, policy, kRuleStaffPerUniversitySds);
    ExclusionResult spread =
        apply_exclusions(staff.retained, policy, kRuleUniversitiesPerRegionSds);

    // sds -> university -> cell
    std::map<std::string, std::map<std::string, UniversityCell>> pools;
    for (const auto& row : spread.retained) {
        auto& cell = pools[row.sds_code][row.university_id];
        cell.member_stars.push_back(row.fss_star);
        cell.region = row.region;
    }

    GapTable table;
    for (const auto& [sds, universities] : pools) {
        std::vector<UniversityScore> pool;
        for (const auto& [university_id, cell] : universities) {
            UniversityScore score;
            score.university_id = university_id;
            score.scope_code = sds;
            score.fss_u = university_score(cell.member_stars);
            score.research_staff = static_cast<std::int64_t>(cell.member_stars.size());
            score.region = cell.region;
            pool.push_back(std::move(score));
        }
        std::vector<bool> top_flags;
        rank_pool(pool, top_flags);

        RegionalMeans means;
        for (const auto& u : pool) {
            means.sums[region_index(u.region)].add(u.percentile);
            means.counts[region_index(u.region)] += 1;
        }
        table.rows.push_back(make_gap_row(sds, means));
    }
    table.summary = summarize_gaps(table.rows);
    table.exclusions = std::move(staff.log);
    table.exclusions.insert(table.exclusions.end(), spread.log.begin(), spread.log.end());
    return table;
}

} // namespace fss
