#include "fss/productivity.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "fss/numeric.hpp"

namespace fss {

double impact_sum(const Researcher& researcher, std::span<const PubAuthorship> records,
                  const ScoringInputs& in) {
    auto field = in.fields->find(researcher.sds_code);
    if (field == in.fields->end())
        throw Error(Errc::DanglingReference,
                    "researcher " + researcher.researcher_id + ": unknown SDS " +
                        researcher.sds_code);
    const BylineConvention convention = field->second.convention;

    double sum = 0.0;
    for (const auto& rec : records) {
        if (rec.pub->year < in.window->first_year || rec.pub->year > in.window->last_year)
            continue;
        double scaled = scaling_factor(*rec.pub, *in.baselines);
        if (scaled == 0.0) continue;
        sum += scaled * fractional_contribution(*rec.auth, convention, *in.weights);
    }
    return sum;
}

double compute_fss(const Researcher& researcher, std::span<const PubAuthorship> records,
                   const ScoringInputs& in) {
    Earnings e = resolve_w_and_t(researcher, *in.salaries, *in.window);
    return impact_sum(researcher, records, in) / (e.avg_salary * e.years);
}

SdsBaseline compute_sds_baselines(std::span<const std::pair<std::string, double>> fss_by_sds) {
    std::map<std::string, std::pair<KahanSum, std::int64_t>> acc;
    for (const auto& [sds, fss] : fss_by_sds) {
        if (fss > 0.0) {
            auto& [sum, count] = acc[sds];
            sum.add(fss);
            count += 1;
        }
    }
    SdsBaseline out;
    for (const auto& [sds, sc] : acc)
        out.emplace(sds, sc.first.value() / static_cast<double>(sc.second));
    return out;
}

double standardize(double fss, std::optional<double> sds_baseline) {
    if (fss == 0.0) return 0.0;
    if (!sds_baseline)
        throw Error(Errc::MissingSdsBaseline, "positive fss with no SDS baseline");
    return fss / *sds_baseline;
}

std::vector<double> rank_percentiles(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<double> out(n, 50.0);
    if (n <= 1) return out;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    // Tie groups share the mean of their slot percentiles. Building each
    // percentile as one division of exact integers makes the value the
    // correctly rounded rational, independent of how the ranks were found.
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        const unsigned long long group = j - i;
        const unsigned long long rank0_sum = (i + j - 1) * group / 2;
        const double p = static_cast<double>(100ull * rank0_sum) /
                         static_cast<double>(group * (n - 1));
        for (std::size_t k = i; k < j; ++k) out[order[k]] = p;
        i = j;
    }
    return out;
}

double university_score(std::span<const double> member_fss_star) {
    if (member_fss_star.empty()) throw Error(Errc::EmptyStaff, "no members to average");
    return compensated_mean(member_fss_star);
}

namespace {

bool employed_in_window(const Researcher& r, const ObservationWindow& window) {
    long long begin = serial_day(Date{window.first_year, 1, 1});
    long long end = serial_day(Date{window.last_year + 1, 1, 1});
    for (const auto& spell : r.spells) {
        long long s = serial_day(spell.start);
        long long e = spell.end ? serial_day(*spell.end) : end;
        if (std::min(e, end) > std::max(s, begin)) return true;
    }
    return false;
}

AcademicRank rank_at_window(const Researcher& r, const ObservationWindow& window) {
    // Rank of the latest spell intersecting the window.
    long long begin = serial_day(Date{window.first_year, 1, 1});
    long long end = serial_day(Date{window.last_year + 1, 1, 1});
    AcademicRank rank = AcademicRank::Assistant;
    long long best = std::numeric_limits<long long>::min();
    for (const auto& spell : r.spells) {
        long long s = serial_day(spell.start);
        long long e = spell.end ? serial_day(*spell.end) : end;
        if (std::min(e, end) > std::max(s, begin) && s > best) {
            best = s;
            rank = spell.rank;
        }
    }
    return rank;
}

} // namespace

ScoreTable score_corpus(const ResearchCorpus& corpus, const ObservationWindow& window,
                        const WeightScheme& weights, const CitationBaseline& baselines,
                        int jobs) {
    const CorpusIndex index = CorpusIndex::build(corpus);

    // Salaries enter the ranked scores only as ratios to the cheapest scale
    // entry; rescaling every salary by a common factor then cancels exactly
    // and leaves fss_star and all percentiles bit-identical.
    double salary_ref = 1.0;
    if (!corpus.salaries.table.empty()) {
        salary_ref = std::numeric_limits<double>::infinity();
        for (const auto& [key, salary] : corpus.salaries.table)
            salary_ref = std::min(salary_ref, salary);
    }

    ScoringInputs in;
    in.baselines = &baselines;
    in.salaries = &corpus.salaries;
    in.window = &window;
    in.weights = &weights;
    in.fields = &corpus.fields;

    const std::size_t n = corpus.researchers.size();
    struct Slot {
        bool scored = false;
        ScoreRow row;
        double fss_scaled = 0.0; // impact / (w_ratio * t); ranking currency
    };
    std::vector<Slot> slots(n);

    auto score_range = [&](std::size_t lo, std::size_t hi) {
        std::vector<PubAuthorship> records;
        for (std::size_t i = lo; i < hi; ++i) {
            const Researcher& r = corpus.researchers[i];
            if (!employed_in_window(r, window)) continue;

            records.clear();
            if (auto it = index.authorships_by_researcher.find(r.researcher_id);
                it != index.authorships_by_researcher.end()) {
                for (const Authorship* a : it->second) {
                    auto pub = index.publication_by_id.find(a->pub_id);
                    if (pub == index.publication_by_id.end())
                        throw Error(Errc::DanglingReference,
                                    "authorship references unknown publication " + a->pub_id);
                    records.push_back(PubAuthorship{pub->second, a});
                }
            }

            auto uni = index.university_by_id.find(r.university_id);
            if (uni == index.university_by_id.end())
                throw Error(Errc::DanglingReference, "researcher " + r.researcher_id +
                                                         ": unknown university " +
                                                         r.university_id);
            auto field = corpus.fields.find(r.sds_code);
            if (field == corpus.fields.end())
                throw Error(Errc::DanglingReference,
                            "researcher " + r.researcher_id + ": unknown SDS " + r.sds_code);

            Earnings e = resolve_w_and_t(r, corpus.salaries, window);
            Earnings e_scaled = resolve_w_and_t_scaled(r, corpus.salaries, window, salary_ref);
            double impact = impact_sum(r, records, in);

            Slot& slot = slots[i];
            slot.scored = true;
            slot.fss_scaled = impact / (e_scaled.avg_salary * e_scaled.years);
            slot.row.researcher_id = r.researcher_id;
            slot.row.gender = r.gender;
            slot.row.rank = rank_at_window(r, window);
            slot.row.sds_code = r.sds_code;
            slot.row.uda_code = field->second.uda_code;
            slot.row.university_id = r.university_id;
            slot.row.region = uni->second->macro_region;
            slot.row.avg_salary = e.avg_salary;
            slot.row.years = e.years;
            slot.row.fss = impact / (e.avg_salary * e.years);
        }
    };

    jobs = std::max(1, jobs);
    if (jobs == 1 || n < 64) {
        score_range(0, n);
    } else {
        std::vector<std::thread> workers;
        std::size_t chunk = (n + static_cast<std::size_t>(jobs) - 1) / jobs;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (int j = 0; j < jobs; ++j) {
            std::size_t lo = std::min(n, static_cast<std::size_t>(j) * chunk);
            std::size_t hi = std::min(n, lo + chunk);
            workers.emplace_back([&, lo, hi] {
                try {
                    score_range(lo, hi);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& w : workers) w.join();
        if (failure) std::rethrow_exception(failure);
    }

    // Standardization denominator: per-SDS mean of the scaled fss over
    // productive researchers, accumulated in corpus order.
    std::map<std::string, std::pair<KahanSum, std::int64_t>> sds_acc;
    for (const Slot& slot : slots) {
        if (slot.scored && slot.fss_scaled > 0.0) {
            auto& [sum, count] = sds_acc[slot.row.sds_code];
            sum.add(slot.fss_scaled);
            count += 1;
        }
    }
    std::map<std::string, double> sds_mean;
    for (const auto& [sds, sc] : sds_acc)
        sds_mean.emplace(sds, sc.first.value() / static_cast<double>(sc.second));

    ScoreTable table;
    table.rows.reserve(n);
    std::map<std::string, std::vector<std::size_t>> pools; // sds -> row indices
    for (Slot& slot : slots) {
        if (!slot.scored) {
            ++table.unscored_researchers;
            continue;
        }
        if (slot.fss_scaled == 0.0) {
            slot.row.fss_star = 0.0;
        } else {
            slot.row.fss_star = slot.fss_scaled / sds_mean.at(slot.row.sds_code);
        }
        pools[slot.row.sds_code].push_back(table.rows.size());
        table.rows.push_back(std::move(slot.row));
    }

    for (const auto& [sds, indices] : pools) {
        std::vector<double> values;
        values.reserve(indices.size());
        for (std::size_t idx : indices) values.push_back(table.rows[idx].fss_star);
        std::vector<double> percentiles = rank_percentiles(values);

        double max_star = 0.0;
        std::size_t max_count = 0;
        for (double v : values) {
            if (v > max_star) {
                max_star = v;
                max_count = 1;
            } else if (v == max_star) {
                ++max_count;
            }
        }
        for (std::size_t k = 0; k < indices.size(); ++k) {
            ScoreRow& row = table.rows[indices[k]];
            row.percentile = percentiles[k];
            row.top = max_star > 0.0 && max_count == 1 && values[k] == max_star;
        }
    }
    return table;
}

} // namespace fss
