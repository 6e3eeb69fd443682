#pragma once

// Shared fixtures for the test suites.

#include <string>
#include <vector>

#include "fss/corpus.hpp"

namespace testutil {

inline fss::ObservationWindow window_2009_2013() {
    return fss::ObservationWindow{2009, 2013, fss::Date{2014, 6, 30}};
}

inline fss::EmploymentSpell full_spell(fss::AcademicRank rank = fss::AcademicRank::Assistant,
                                       int band = 0) {
    return fss::EmploymentSpell{fss::Date{2009, 1, 1}, std::nullopt, rank, band};
}

// Three universities, two SDSs, 12 researchers, a handful of publications.
// Everything cross-links, so validate_corpus is empty by construction.
inline fss::ResearchCorpus tiny_corpus() {
    fss::ResearchCorpus corpus;
    corpus.universities = {
        {"UN1", "North Tech", fss::MacroRegion::North},
        {"UC1", "Center State", fss::MacroRegion::Center},
        {"US1", "South Uni", fss::MacroRegion::South},
    };
    corpus.fields.emplace("MAT/01", fss::FieldEntry{"A01", fss::BylineConvention::Alphabetical});
    corpus.fields.emplace("BIO/01",
                          fss::FieldEntry{"A02", fss::BylineConvention::PositionWeighted});
    corpus.salaries.table = {
        {{fss::AcademicRank::Assistant, 0}, 30000.0},
        {{fss::AcademicRank::Associate, 0}, 42000.0},
        {{fss::AcademicRank::Full, 0}, 58000.0},
    };

    const char* unis[3] = {"UN1", "UC1", "US1"};
    for (int i = 0; i < 12; ++i) {
        fss::Researcher r;
        char id[8];
        std::snprintf(id, sizeof(id), "R%03d", i + 1);
        r.researcher_id = id;
        r.gender = i % 3 == 0 ? fss::Gender::F : fss::Gender::M;
        r.sds_code = i % 2 == 0 ? "MAT/01" : "BIO/01";
        r.university_id = unis[i % 3];
        r.spells.push_back(full_spell(i % 4 == 0 ? fss::AcademicRank::Full
                                                 : fss::AcademicRank::Assistant));
        corpus.researchers.push_back(std::move(r));
    }

    // Eight publications: researchers 1..8 get one each, citation counts
    // 0, 2, 4, 6, 8, 10, 12, 14; researchers 9..12 stay unproductive.
    for (int i = 0; i < 8; ++i) {
        fss::Publication p;
        char pid[8];
        std::snprintf(pid, sizeof(pid), "P%03d", i + 1);
        p.pub_id = pid;
        p.year = 2009 + i % 5;
        p.doc_type = fss::DocType::Article;
        p.citations = 2 * i;
        p.subject_categories = {i % 2 == 0 ? "Math" : "Bio"};
        corpus.publications.push_back(std::move(p));

        fss::Authorship a;
        a.pub_id = pid;
        a.author_slot = 1 + i % 3;
        a.total_authors = 3;
        char rid[8];
        std::snprintf(rid, sizeof(rid), "R%03d", i + 1);
        a.researcher_id = rid;
        a.extramural_byline = i % 2 == 1;
        corpus.authorships.push_back(std::move(a));
    }
    return corpus;
}

inline fss::Researcher one_spell_researcher(const std::string& id, fss::Date start,
                                            std::optional<fss::Date> end,
                                            fss::AcademicRank rank = fss::AcademicRank::Assistant,
                                            int band = 0) {
    fss::Researcher r;
    r.researcher_id = id;
    r.sds_code = "MAT/01";
    r.university_id = "UN1";
    r.spells.push_back(fss::EmploymentSpell{start, end, rank, band});
    return r;
}

} // namespace testutil
