#pragma once

// Brute-force reference implementations used only by the test suites.
// They deliberately share no computation code with the engine: ranking
// counts pairs instead of sorting, and working time is counted day by day
// with hand-rolled calendar arithmetic instead of interval clipping.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fss/corpus.hpp"

namespace oracle {

// O(N^2) percentile ranking: per element, count strictly-smaller values and
// ties, then average the tied slots of 100*(rank-1)/(N-1).
std::vector<double> oracle_rank(const std::vector<double>& values);

struct FlatSpell {
    fss::Date start;
    std::optional<fss::Date> end; // exclusive; absent = open
    double salary = 0.0;
};

struct FlatPub {
    int year = 0;
    long long citations = 0;
    std::vector<std::string> categories;
    int author_slot = 1;
    int total_authors = 1;
    bool extramural = false;
};

struct FlatWeights {
    double intramural_first = 0.40, intramural_last = 0.30, intramural_middle = 0.30;
    double extramural_first = 0.30, extramural_last = 0.20, extramural_middle = 0.50;
};

// Straight-line re-implementation of the productivity formula for one
// researcher given flat records.
double oracle_fss(const std::vector<FlatSpell>& spells, const std::vector<FlatPub>& pubs,
                  const std::map<std::pair<int, std::string>, double>& baselines,
                  int first_year, int last_year, bool position_weighted, const FlatWeights& w);

// Group-by mean of citations over cited publications, quadratic scan.
std::map<std::pair<int, std::string>, std::pair<double, unsigned long long>>
oracle_baselines(const std::vector<fss::Publication>& pubs);

// Flattens one corpus researcher into oracle inputs (data plumbing only).
struct Flattened {
    std::vector<FlatSpell> spells;
    std::vector<FlatPub> pubs;
    bool position_weighted = false;
};

struct CorpusView {
    std::map<std::string, const fss::Publication*> pubs_by_id;
    std::map<std::string, std::vector<const fss::Authorship*>> auths_by_researcher;
    explicit CorpusView(const fss::ResearchCorpus& corpus);
};

Flattened flatten_researcher(const fss::ResearchCorpus& corpus, const CorpusView& view,
                             const fss::Researcher& r);

} // namespace oracle
