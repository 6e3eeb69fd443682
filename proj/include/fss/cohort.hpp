#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fss/productivity.hpp"

namespace fss {

// Percentile cuts for the descriptive-statistics rows. "Top" defaults to
// holding the strict maximum fss_star of the pool; it can be switched to a
// plain percentile cut.
struct ThresholdSpec {
    double bottom_small = 10.0; // "%Bottom 10%"
    double bottom_large = 20.0; // "%Bottom 20%"
    double top_large = 20.0;    // "%Top 20%"
    double top_small = 10.0;    // "%Top 10%"

    enum class TopRule { StrictMax, PercentileCut };
    TopRule top_rule = TopRule::StrictMax;
    double top_cut = 99.0; // used only under PercentileCut
};

struct CohortStats {
    std::int64_t observations = 0;
    double pct_unproductive = 0.0;
    double mean_fss_star = 0.0; // zeros included
    double mean_percentile = 0.0;
    double pct_bottom_small = 0.0;  // percentile <= bottom_small
    double pct_bottom_large = 0.0;  // percentile <= bottom_large
    double pct_above_median = 0.0;  // percentile > 50
    double pct_top_large = 0.0;     // percentile >= 100 - top_large
    double pct_top_small = 0.0;     // percentile >= 100 - top_small
    double pct_top = 0.0;           // holds the pool's strict maximum
};

// A cohort member as the stats see it: the starred score, its pool
// percentile, and whether it is the strict maximum of its ranking pool.
struct CohortMember {
    double fss_star = 0.0;
    double percentile = 0.0;
    bool top = false;
};

// Throws Errc::EmptyCohort on an empty member list.
CohortStats cohort_stats(std::span<const CohortMember> members, const ThresholdSpec& spec);

struct ExclusionPolicy {
    int min_obs_per_region_sds = 3;
    int min_universities_per_region_sds = 3;
    int min_staff_per_university_sds = 3;
    int min_professors_per_university_uda = 5;
    int min_professors_per_sds_university_overall = 10;
};

// Rule names accepted by apply_exclusions; mirror the policy fields.
inline constexpr const char* kRuleObsPerRegionSds = "min_obs_per_region_sds";
inline constexpr const char* kRuleUniversitiesPerRegionSds = "min_universities_per_region_sds";
inline constexpr const char* kRuleStaffPerUniversitySds = "min_staff_per_university_sds";
inline constexpr const char* kRuleProfessorsPerUniversityUda = "min_professors_per_university_uda";
inline constexpr const char* kRuleProfessorsPerSdsUniversityOverall =
    "min_professors_per_sds_university_overall";

struct ExclusionRecord {
    std::string rule;
    std::string unit_kind; // "sds", "university_sds", "university_uda"
    std::string unit_code;
    std::string detail;
};

struct ExclusionResult {
    std::vector<ScoreRow> retained;
    std::vector<ScoreRow> excluded;
    std::vector<ExclusionRecord> log;
};

// Applies one named policy rule to a slice of score rows. Every excluded
// unit is logged exactly once; retained + excluded partition the input.
// Unknown rule names throw Errc::UnknownRule.
ExclusionResult apply_exclusions(std::span<const ScoreRow> rows, const ExclusionPolicy& policy,
                                 const std::string& rule);

// One SDS row of the regional gap table. The two paired gaps are exact
// differences of the published regional means; the north-south total is
// their telescoped sum, so north-south == north-center + center-south holds
// bit for bit on every row.
struct GapRow {
    std::string sds_code;
    std::int64_t n_north = 0;
    std::int64_t n_center = 0;
    std::int64_t n_south = 0;
    double mean_north = 0.0;
    double mean_center = 0.0;
    double mean_south = 0.0;
    double gap_north_center = 0.0; // mean_north - mean_center
    double gap_center_south = 0.0; // mean_center - mean_south
    double gap_north_south = 0.0;  // gap_north_center + gap_center_south
};

struct GapExtreme {
    double gap = 0.0;
    std::string sds_code;
};

struct GapPairSummary {
    std::string comparison; // "north_south", "north_center", "center_south"
    GapExtreme highest;
    GapExtreme lowest;
    std::int64_t n_nonnegative = 0;
    std::int64_t n_negative = 0;
};

struct GapTable {
    std::vector<GapRow> rows; // sorted by sds_code
    std::vector<GapPairSummary> summary;
    std::vector<ExclusionRecord> exclusions;
};

// Researcher-level gap table: drops SDSs failing min_obs_per_region_sds,
// then reports mean SDS-pool percentile per macro-region and the pairwise
// gaps.
GapTable gap_table(std::span<const ScoreRow> rows, const ExclusionPolicy& policy);

enum class UniversityScope { Uda, Sds, Overall };

struct UniversityCohortRow {
    std::string scope_code; // UDA code or "overall"
    MacroRegion region = MacroRegion::North;
    CohortStats stats;
};

struct UniversityReport {
    std::vector<UniversityScore> scores; // ranked universities per scope pool
    std::vector<UniversityCohortRow> cohorts;
    std::vector<ExclusionRecord> exclusions;
};

// University-level analysis. Uda scope drops universities with fewer than
// min_professors_per_university_uda professors in the UDA and ranks the
// survivors within each UDA; Overall drops the thin SDS-university pairs
// first and ranks nationally. Each university counts as one observation in
// the per-region cohort stats.
UniversityReport university_report(std::span<const ScoreRow> rows, UniversityScope scope,
                                   const ExclusionPolicy& policy, const ThresholdSpec& spec);

// University-level gap table: per SDS, universities are scored by the mean
// fss_star of their staff in that SDS, ranked within the SDS, and the
// regional means of those percentiles are compared. Applies the staff-size
// rule, then the universities-per-region rule.
GapTable university_gap_table(std::span<const ScoreRow> rows, const ExclusionPolicy& policy);

} // namespace fss
