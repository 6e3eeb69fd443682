#include "fss/corpus.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <unordered_set>

namespace fss {

const char* to_string(MacroRegion r) {
    switch (r) {
        case MacroRegion::North: return "North";
        case MacroRegion::Center: return "Center";
        case MacroRegion::South: return "South";
    }
    return "?";
}

const char* to_string(Gender g) {
    switch (g) {
        case Gender::F: return "F";
        case Gender::M: return "M";
        case Gender::Unspecified: return "U";
    }
    return "?";
}

const char* to_string(AcademicRank r) {
    switch (r) {
        case AcademicRank::Assistant: return "Assistant";
        case AcademicRank::Associate: return "Associate";
        case AcademicRank::Full: return "Full";
    }
    return "?";
}

const char* to_string(DocType t) {
    switch (t) {
        case DocType::Article: return "Article";
        case DocType::Review: return "Review";
        case DocType::ProceedingsPaper: return "ProceedingsPaper";
    }
    return "?";
}

const char* to_string(BylineConvention c) {
    switch (c) {
        case BylineConvention::Alphabetical: return "Alphabetical";
        case BylineConvention::PositionWeighted: return "PositionWeighted";
    }
    return "?";
}

std::optional<MacroRegion> parse_macro_region(const std::string& s) {
    if (s == "North") return MacroRegion::North;
    if (s == "Center") return MacroRegion::Center;
    if (s == "South") return MacroRegion::South;
    return std::nullopt;
}

std::optional<Gender> parse_gender(const std::string& s) {
    if (s == "F") return Gender::F;
    if (s == "M") return Gender::M;
    if (s == "U") return Gender::Unspecified;
    return std::nullopt;
}

std::optional<AcademicRank> parse_academic_rank(const std::string& s) {
    if (s == "Assistant") return AcademicRank::Assistant;
    if (s == "Associate") return AcademicRank::Associate;
    if (s == "Full") return AcademicRank::Full;
    return std::nullopt;
}

std::optional<DocType> parse_doc_type(const std::string& s) {
    if (s == "Article") return DocType::Article;
    if (s == "Review") return DocType::Review;
    if (s == "ProceedingsPaper") return DocType::ProceedingsPaper;
    return std::nullopt;
}

std::optional<BylineConvention> parse_byline_convention(const std::string& s) {
    if (s == "Alphabetical") return BylineConvention::Alphabetical;
    if (s == "PositionWeighted") return BylineConvention::PositionWeighted;
    return std::nullopt;
}

CorpusIndex CorpusIndex::build(const ResearchCorpus& corpus) {
    CorpusIndex index;
    index.university_by_id.reserve(corpus.universities.size());
    for (const auto& u : corpus.universities) index.university_by_id.emplace(u.university_id, &u);
    index.researcher_by_id.reserve(corpus.researchers.size());
    for (const auto& r : corpus.researchers) index.researcher_by_id.emplace(r.researcher_id, &r);
    index.publication_by_id.reserve(corpus.publications.size());
    for (const auto& p : corpus.publications) index.publication_by_id.emplace(p.pub_id, &p);
    for (const auto& a : corpus.authorships) {
        if (!a.is_external()) index.authorships_by_researcher[a.researcher_id].push_back(&a);
    }
    return index;
}

namespace {

// Covered days of [start, end) inside calendar year `year`.
long long overlap_days_in_year(long long start_day, long long end_day, int year) {
    long long year_begin = serial_day(Date{year, 1, 1});
    long long year_end = serial_day(Date{year + 1, 1, 1});
    long long lo = std::max(start_day, year_begin);
    long long hi = std::min(end_day, year_end);
    return hi > lo ? hi - lo : 0;
}

Earnings resolve_impl(const Researcher& researcher, const SalaryScale& scale,
                      const ObservationWindow& window, double salary_ref) {
    long long window_begin = serial_day(Date{window.first_year, 1, 1});
    long long window_end = serial_day(Date{window.last_year + 1, 1, 1});

    double total_years = 0.0;
    double weighted_salary = 0.0;
    bool any = false;

    for (const auto& spell : researcher.spells) {
        long long start = serial_day(spell.start);
        long long end = spell.end ? serial_day(*spell.end) : window_end;
        start = std::max(start, window_begin);
        end = std::min(end, window_end);
        if (end <= start) continue;

        double spell_years = 0.0;
        for (int y = window.first_year; y <= window.last_year; ++y) {
            long long days = overlap_days_in_year(start, end, y);
            if (days > 0)
                spell_years += static_cast<double>(days) / static_cast<double>(days_in_year(y));
        }
        if (spell_years == 0.0) continue;

        auto salary = scale.lookup(spell.rank, spell.seniority_band);
        if (!salary)
            throw Error(Errc::UnknownSalaryKey,
                        "researcher " + researcher.researcher_id + ": no salary for (" +
                            to_string(spell.rank) + ", band " +
                            std::to_string(spell.seniority_band) + ")");
        any = true;
        total_years += spell_years;
        weighted_salary += (*salary / salary_ref) * spell_years;
    }

    if (!any)
        throw Error(Errc::NoEmployment,
                    "researcher " + researcher.researcher_id + ": no spell intersects window");

    return Earnings{weighted_salary / total_years, total_years};
}

} // namespace

Earnings resolve_w_and_t(const Researcher& researcher, const SalaryScale& scale,
                         const ObservationWindow& window) {
    return resolve_impl(researcher, scale, window, 1.0);
}

Earnings resolve_w_and_t_scaled(const Researcher& researcher, const SalaryScale& scale,
                                const ObservationWindow& window, double salary_ref) {
    return resolve_impl(researcher, scale, window, salary_ref);
}

const char* to_string(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::DanglingReference: return "DanglingReference";
        case Violation::Kind::DuplicateId: return "DuplicateId";
        case Violation::Kind::DuplicateAuthorship: return "DuplicateAuthorship";
        case Violation::Kind::OverlappingSpells: return "OverlappingSpells";
        case Violation::Kind::DegenerateSpell: return "DegenerateSpell";
        case Violation::Kind::EmptyCategories: return "EmptyCategories";
        case Violation::Kind::AuthorSlotOutOfRange: return "AuthorSlotOutOfRange";
        case Violation::Kind::MissingSalaryKey: return "MissingSalaryKey";
        case Violation::Kind::NonPositiveSalary: return "NonPositiveSalary";
        case Violation::Kind::YearOutOfWindow: return "YearOutOfWindow";
        case Violation::Kind::NegativeCitations: return "NegativeCitations";
    }
    return "?";
}

std::vector<Violation> validate_corpus(const ResearchCorpus& corpus,
                                       const ObservationWindow* window) {
    std::vector<Violation> out;
    auto add = [&](Violation::Kind kind, std::string entity, std::string detail) {
        out.push_back(Violation{kind, std::move(entity), std::move(detail)});
    };

    std::unordered_set<std::string> university_ids;
    for (const auto& u : corpus.universities) {
        if (!university_ids.insert(u.university_id).second)
            add(Violation::Kind::DuplicateId, "university " + u.university_id, "duplicate id");
    }

    for (const auto& [key, salary] : corpus.salaries.table) {
        if (!(salary > 0.0))
            add(Violation::Kind::NonPositiveSalary,
                std::string("salary (") + to_string(key.first) + ", band " +
                    std::to_string(key.second) + ")",
                "yearly salary must be positive");
    }

    std::unordered_set<std::string> researcher_ids;
    for (const auto& r : corpus.researchers) {
        const std::string entity = "researcher " + r.researcher_id;
        if (!researcher_ids.insert(r.researcher_id).second)
            add(Violation::Kind::DuplicateId, entity, "duplicate id");
        if (!university_ids.contains(r.university_id))
            add(Violation::Kind::DanglingReference, entity,
                "unknown university " + r.university_id);
        if (!corpus.fields.contains(r.sds_code))
            add(Violation::Kind::DanglingReference, entity, "unknown SDS " + r.sds_code);

        std::vector<std::pair<long long, long long>> intervals;
        for (const auto& spell : r.spells) {
            long long start = serial_day(spell.start);
            long long end = spell.end ? serial_day(*spell.end)
                                      : std::numeric_limits<long long>::max();
            if (end <= start) {
                add(Violation::Kind::DegenerateSpell, entity,
                    "spell starting " + format_date(spell.start) + " has no positive length");
                continue;
            }
            intervals.emplace_back(start, end);
            if (!corpus.salaries.lookup(spell.rank, spell.seniority_band))
                add(Violation::Kind::MissingSalaryKey, entity,
                    std::string("no salary for (") + to_string(spell.rank) + ", band " +
                        std::to_string(spell.seniority_band) + ")");
        }
        std::sort(intervals.begin(), intervals.end());
        for (std::size_t i = 1; i < intervals.size(); ++i) {
            if (intervals[i].first < intervals[i - 1].second) {
                add(Violation::Kind::OverlappingSpells, entity, "spells overlap in time");
                break;
            }
        }
    }

    std::unordered_set<std::string> pub_ids;
    for (const auto& p : corpus.publications) {
        const std::string entity = "publication " + p.pub_id;
        if (!pub_ids.insert(p.pub_id).second)
            add(Violation::Kind::DuplicateId, entity, "duplicate id");
        if (p.subject_categories.empty())
            add(Violation::Kind::EmptyCategories, entity, "no subject categories");
        if (p.citations < 0)
            add(Violation::Kind::NegativeCitations, entity, "negative citation count");
        if (window && p.year > window->last_year)
            add(Violation::Kind::YearOutOfWindow, entity,
                "year " + std::to_string(p.year) + " past window end " +
                    std::to_string(window->last_year));
    }

    std::set<std::pair<std::string, std::string>> seen_authorships;
    for (const auto& a : corpus.authorships) {
        const std::string entity = "authorship " + a.pub_id + "/" +
                                   (a.is_external() ? std::string("-") : a.researcher_id);
        if (!pub_ids.contains(a.pub_id))
            add(Violation::Kind::DanglingReference, entity, "unknown publication " + a.pub_id);
        if (!a.is_external()) {
            if (!researcher_ids.contains(a.researcher_id))
                add(Violation::Kind::DanglingReference, entity,
                    "unknown researcher " + a.researcher_id);
            if (!seen_authorships.insert({a.pub_id, a.researcher_id}).second)
                add(Violation::Kind::DuplicateAuthorship, entity,
                    "researcher listed twice on one byline");
        }
        if (a.author_slot < 1 || a.author_slot > a.total_authors)
            add(Violation::Kind::AuthorSlotOutOfRange, entity,
                "slot " + std::to_string(a.author_slot) + " of " +
                    std::to_string(a.total_authors));
    }

    return out;
}

} // namespace fss
