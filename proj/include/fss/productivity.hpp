#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fss/corpus.hpp"
#include "fss/normalization.hpp"

namespace fss {

// Everything compute_fss needs besides the researcher's own rows.
struct ScoringInputs {
    const CitationBaseline* baselines = nullptr;
    const SalaryScale* salaries = nullptr;
    const ObservationWindow* window = nullptr;
    const WeightScheme* weights = nullptr;
    const FieldScheme* fields = nullptr;
};

struct PubAuthorship {
    const Publication* pub = nullptr;
    const Authorship* auth = nullptr;
};

// FSS = (1/w)(1/t) sum over in-window publications of (c_i/c-bar) f_i.
// Publications outside [first_year, last_year] are skipped; a researcher
// with no publications scores 0 (w and t must still resolve).
double compute_fss(const Researcher& researcher, std::span<const PubAuthorship> records,
                   const ScoringInputs& in);

// Citation-impact sum of the productivity formula, before the 1/(w t) factor.
double impact_sum(const Researcher& researcher, std::span<const PubAuthorship> records,
                  const ScoringInputs& in);

// sds_code -> mean FSS over productive (fss > 0) researchers. SDSs with no
// productive researcher are absent.
using SdsBaseline = std::map<std::string, double>;

SdsBaseline compute_sds_baselines(std::span<const std::pair<std::string, double>> fss_by_sds);

// FSS* = FSS / FSS-bar. Zero stays zero even without a baseline; a positive
// fss without a baseline signals pipeline misuse (Errc::MissingSdsBaseline).
double standardize(double fss, std::optional<double> sds_baseline);

// Percentile ranking, 0-100 worst to best, within one pool. Ascending rank
// r (1-based) maps to 100*(r-1)/(N-1); tied values share the mean of their
// slots. A singleton pool gets 50. Each percentile is produced by a single
// division of exact integers, so any implementation of the same convention
// agrees bit for bit.
std::vector<double> rank_percentiles(std::span<const double> values);

struct ProductivityScore {
    std::string researcher_id;
    double fss = 0.0;
    double fss_star = 0.0;
    double percentile = 0.0;
    bool productive = false;
    bool top = false; // strict maximum fss_star of the researcher's SDS pool
};

struct UniversityScore {
    std::string university_id;
    std::string scope_code; // UDA code, SDS code, or "overall"
    double fss_u = 0.0;
    std::int64_t research_staff = 0;
    double percentile = 0.0;
    MacroRegion region = MacroRegion::North;
};

// FSS^U: arithmetic mean of the members' FSS*. Throws Errc::EmptyStaff on an
// empty member list.
double university_score(std::span<const double> member_fss_star);

// One researcher row of the scored corpus; the unit every report consumes.
struct ScoreRow {
    std::string researcher_id;
    Gender gender = Gender::Unspecified;
    AcademicRank rank = AcademicRank::Assistant; // latest spell intersecting the window
    std::string sds_code;
    std::string uda_code;
    std::string university_id;
    MacroRegion region = MacroRegion::North;
    double avg_salary = 0.0;
    double years = 0.0;
    double fss = 0.0;
    double fss_star = 0.0;
    double percentile = 0.0;
    bool top = false;
};

struct ScoreTable {
    std::vector<ScoreRow> rows;
    std::int64_t unscored_researchers = 0; // no spell intersecting the window
};

// Full scoring pass over a corpus: fss, fss_star, percentiles. Researchers without
// an intersecting spell are skipped (counted in unscored_researchers).
// Scoring is parallel over researchers when jobs > 1; results are written by
// index, so the table is identical for any worker count.
ScoreTable score_corpus(const ResearchCorpus& corpus, const ObservationWindow& window,
                        const WeightScheme& weights, const CitationBaseline& baselines,
                        int jobs = 1);

} // namespace fss
