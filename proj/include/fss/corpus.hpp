#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fss/dates.hpp"
#include "fss/errors.hpp"

namespace fss {

enum class MacroRegion { North, Center, South };
enum class Gender { F, M, Unspecified };
enum class AcademicRank { Assistant, Associate, Full };
enum class DocType { Article, Review, ProceedingsPaper };
enum class BylineConvention { Alphabetical, PositionWeighted };

const char* to_string(MacroRegion r);
const char* to_string(Gender g);
const char* to_string(AcademicRank r);
const char* to_string(DocType t);
const char* to_string(BylineConvention c);

std::optional<MacroRegion> parse_macro_region(const std::string& s);
std::optional<Gender> parse_gender(const std::string& s);
std::optional<AcademicRank> parse_academic_rank(const std::string& s);
std::optional<DocType> parse_doc_type(const std::string& s);
std::optional<BylineConvention> parse_byline_convention(const std::string& s);

struct University {
    std::string university_id;
    std::string name;
    MacroRegion macro_region = MacroRegion::North;
};

struct FieldEntry {
    std::string uda_code;
    BylineConvention convention = BylineConvention::Alphabetical;
};

// sds_code -> (uda_code, byline convention); every SDS belongs to one UDA.
using FieldScheme = std::map<std::string, FieldEntry>;

// Employment interval, half-open [start, end). An absent end means the
// spell is still running (clamped to the observation window).
struct EmploymentSpell {
    Date start;
    std::optional<Date> end;
    AcademicRank rank = AcademicRank::Assistant;
    int seniority_band = 0;
};

struct Researcher {
    std::string researcher_id;
    Gender gender = Gender::Unspecified;
    std::string sds_code;
    std::string university_id;
    std::vector<EmploymentSpell> spells;
};

// (rank, seniority band) -> yearly salary, strictly positive.
struct SalaryScale {
    std::map<std::pair<AcademicRank, int>, double> table;

    std::optional<double> lookup(AcademicRank rank, int band) const {
        auto it = table.find({rank, band});
        if (it == table.end()) return std::nullopt;
        return it->second;
    }
};

struct Publication {
    std::string pub_id;
    int year = 0;
    DocType doc_type = DocType::Article;
    long long citations = 0; // frozen census-date count
    std::vector<std::string> subject_categories;
};

struct Authorship {
    std::string pub_id;
    int author_slot = 1; // 1-based position in the byline
    int total_authors = 1;
    std::string researcher_id; // empty: author outside the corpus
    bool extramural_byline = false;

    bool is_external() const { return researcher_id.empty(); }
};

struct ObservationWindow {
    int first_year = 0;
    int last_year = 0;
    Date citation_census_date;

    int span_years() const { return last_year - first_year + 1; }
};

struct ResearchCorpus {
    std::vector<University> universities;
    FieldScheme fields;
    SalaryScale salaries;
    std::vector<Researcher> researchers;
    std::vector<Publication> publications;
    std::vector<Authorship> authorships;
};

// Lookup tables over an immutable corpus. Pointers stay valid as long as
// the corpus they were built from.
struct CorpusIndex {
    std::unordered_map<std::string, const University*> university_by_id;
    std::unordered_map<std::string, const Researcher*> researcher_by_id;
    std::unordered_map<std::string, const Publication*> publication_by_id;
    std::unordered_map<std::string, std::vector<const Authorship*>> authorships_by_researcher;

    static CorpusIndex build(const ResearchCorpus& corpus);
};

// w and t of the productivity formula: t in fractional years (calendar-day
// proration, per-year denominators), w the time-weighted average salary.
struct Earnings {
    double avg_salary = 0.0; // w
    double years = 0.0;      // t
};

// Throws Errc::NoEmployment if no spell intersects the window,
// Errc::UnknownSalaryKey if an intersecting spell has no salary entry.
Earnings resolve_w_and_t(const Researcher& researcher, const SalaryScale& scale,
                         const ObservationWindow& window);

// Same proration with every salary divided by `salary_ref` before the
// time-weighted average. Rankings built on these values are exactly
// invariant under rescaling the whole salary scale.
Earnings resolve_w_and_t_scaled(const Researcher& researcher, const SalaryScale& scale,
                                const ObservationWindow& window, double salary_ref);

struct Violation {
    enum class Kind {
        DanglingReference,
        DuplicateId,
        DuplicateAuthorship,
        OverlappingSpells,
        DegenerateSpell,
        EmptyCategories,
        AuthorSlotOutOfRange,
        MissingSalaryKey,
        NonPositiveSalary,
        YearOutOfWindow,
        NegativeCitations,
    };
    Kind kind;
    std::string entity; // id of the offending row
    std::string detail;
};

const char* to_string(Violation::Kind k);

// Structural validation; violations are data, not failures. The window is
// optional: when given, publication years past the window end are flagged.
std::vector<Violation> validate_corpus(const ResearchCorpus& corpus,
                                       const ObservationWindow* window = nullptr);

} // namespace fss
