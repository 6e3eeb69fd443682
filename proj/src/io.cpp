#include "fss/io.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fss/csv.hpp"
#include "fss/numeric.hpp"
#include "fss/version.hpp"

namespace fss {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& file, std::size_t row, const std::string& column,
                               const std::string& reason) {
    throw Error(Errc::SchemaError,
                file + ", row " + std::to_string(row) + ", column " + column + ": " + reason);
}

void expect_header(const csv::Table& table, const std::vector<std::string>& expected,
                   const std::string& file) {
    if (table.header != expected) {
        std::string want;
        for (const auto& c : expected) want += (want.empty() ? "" : ",") + c;
        schema_error(file, 0, "header", "expected '" + want + "'");
    }
}

// One parsed CSV record with typed field accessors that raise row-level
// schema errors.
struct Record {
    const std::string& file;
    std::size_t row; // 1-based data row
    const std::vector<std::string>& fields;
    const std::vector<std::string>& header;

    const std::string& raw(std::size_t col) const {
        if (col >= fields.size())
            schema_error(file, row, header[col], "missing field");
        return fields[col];
    }

    long long integer(std::size_t col, long long lo, long long hi) const {
        auto v = parse_int(raw(col));
        if (!v || *v < lo || *v > hi)
            schema_error(file, row, header[col], "expected integer in [" + std::to_string(lo) +
                                                     ", " + std::to_string(hi) + "], got '" +
                                                     raw(col) + "'");
        return *v;
    }

    double number(std::size_t col) const {
        auto v = parse_double(raw(col));
        if (!v) schema_error(file, row, header[col], "expected number, got '" + raw(col) + "'");
        return *v;
    }

    Date date(std::size_t col) const {
        auto d = parse_date(raw(col));
        if (!d)
            schema_error(file, row, header[col], "expected YYYY-MM-DD, got '" + raw(col) + "'");
        return *d;
    }

    template <typename T>
    T parsed(std::size_t col, std::optional<T> (*parser)(const std::string&),
             const char* what) const {
        auto v = parser(raw(col));
        if (!v)
            schema_error(file, row, header[col],
                         std::string("expected ") + what + ", got '" + raw(col) + "'");
        return *v;
    }

    bool flag(std::size_t col) const {
        const std::string& s = raw(col);
        if (s == "true" || s == "1") return true;
        if (s == "false" || s == "0") return false;
        schema_error(file, row, header[col], "expected true/false, got '" + s + "'");
    }

    void check_width() const {
        if (fields.size() != header.size())
            schema_error(file, row, "-", "expected " + std::to_string(header.size()) +
                                             " fields, got " + std::to_string(fields.size()));
    }
};

template <typename Fn>
void for_each_record(const csv::Table& table, const std::string& file, Fn fn) {
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        Record rec{file, i + 1, table.rows[i], table.header};
        rec.check_width();
        fn(rec);
    }
}

std::vector<std::string> split_categories(const Record& rec, std::size_t col) {
    const std::string& joined = rec.raw(col);
    std::vector<std::string> out;
    std::string current;
    auto flush = [&] {
        if (current.empty())
            schema_error(rec.file, rec.row, rec.header[col], "empty category");
        if (std::find(out.begin(), out.end(), current) == out.end()) out.push_back(current);
        current.clear();
    };
    if (joined.empty())
        schema_error(rec.file, rec.row, rec.header[col], "at least one category required");
    for (char c : joined) {
        if (c == ';')
            flush();
        else
            current += c;
    }
    flush();
    return out;
}

} // namespace

ResearchCorpus load_corpus_files(const std::filesystem::path& dir) {
    ResearchCorpus corpus;

    auto table_of = [&](const char* name) {
        auto path = dir / name;
        if (!std::filesystem::exists(path)) throw Error(Errc::MissingFile, path.string());
        return csv::read_file(path);
    };

    {
        const std::string file = "universities.csv";
        csv::Table t = table_of("universities.csv");
        expect_header(t, {"university_id", "name", "macro_region"}, file);
        for_each_record(t, file, [&](const Record& rec) {
            University u;
            u.university_id = rec.raw(0);
            if (u.university_id.empty()) schema_error(file, rec.row, "university_id", "empty id");
            u.name = rec.raw(1);
            u.macro_region = rec.parsed(2, parse_macro_region, "North/Center/South");
            corpus.universities.push_back(std::move(u));
        });
    }

    {
        const std::string file = "fields.csv";
        csv::Table t = table_of("fields.csv");
        expect_header(t, {"sds_code", "uda_code", "byline_convention"}, file);
        for_each_record(t, file, [&](const Record& rec) {
            const std::string& sds = rec.raw(0);
            if (sds.empty()) schema_error(file, rec.row, "sds_code", "empty code");
            FieldEntry entry;
            entry.uda_code = rec.raw(1);
            if (entry.uda_code.empty()) schema_error(file, rec.row, "uda_code", "empty code");
            entry.convention =
                rec.parsed(2, parse_byline_convention, "Alphabetical/PositionWeighted");
            if (!corpus.fields.emplace(sds, std::move(entry)).second)
                schema_error(file, rec.row, "sds_code", "duplicate SDS '" + sds + "'");
        });
    }

    {
        const std::string file = "salaries.csv";
        csv::Table t = table_of("salaries.csv");
        expect_header(t, {"rank", "seniority_band", "yearly_salary"}, file);
        for_each_record(t, file, [&](const Record& rec) {
            auto rank = rec.parsed(0, parse_academic_rank, "Assistant/Associate/Full");
            int band = static_cast<int>(rec.integer(1, 0, 1000));
            double salary = rec.number(2);
            if (!(salary > 0.0))
                schema_error(file, rec.row, "yearly_salary", "must be positive");
            if (!corpus.salaries.table.emplace(std::make_pair(rank, band), salary).second)
                schema_error(file, rec.row, "rank", "duplicate salary key");
        });
    }

    std::map<std::string, std::size_t> researcher_pos;
    {
        const std::string file = "researchers.csv";
        csv::Table t = table_of("researchers.csv");
        expect_header(t, {"researcher_id", "gender", "sds_code", "university_id"}, file);
        for_each_record(t, file, [&](const Record& rec) {
            Researcher r;
            r.researcher_id = rec.raw(0);
            if (r.researcher_id.empty()) schema_error(file, rec.row, "researcher_id", "empty id");
            r.gender = rec.parsed(1, parse_gender, "F/M/U");
            r.sds_code = rec.raw(2);
            r.university_id = rec.raw(3);
            researcher_pos.emplace(r.researcher_id, corpus.researchers.size());
            corpus.researchers.push_back(std::move(r));
        });
    }

    {
        const std::string file = "spells.csv";
        csv::Table t = table_of("spells.csv");
        expect_header(t, {"researcher_id", "start", "end", "rank", "seniority_band"}, file);
        for_each_record(t, file, [&](const Record& rec) {
            auto pos = researcher_pos.find(rec.raw(0));
            if (pos == researcher_pos.end())
                schema_error(file, rec.row, "researcher_id",
                             "unknown researcher '" + rec.raw(0) + "'");
            EmploymentSpell spell;
            spell.start = rec.date(1);
            if (!rec.raw(2).empty()) spell.end = rec.date(2);
            spell.rank = rec.parsed(3, parse_academic_rank, "Assistant/Associate/Full");
            spell.seniority_band = static_cast<int>(rec.integer(4, 0, 1000));
            corpus.researchers[pos->second].spells.push_back(spell);
        });
    }

    {
        const std::string file = "publications.csv";
        csv::Table t = table_of("publications.csv");
        expect_header(t, {"pub_id", "year", "doc_type", "citations", "categories"}, file);
        for_each_record(t, file, [&](const Record& rec) {
            Publication p;
            p.pub_id = rec.raw(0);
            if (p.pub_id.empty()) schema_error(file, rec.row, "pub_id", "empty id");
            p.year = static_cast<int>(rec.integer(1, 1400, 2999));
            p.doc_type = rec.parsed(2, parse_doc_type, "Article/Review/ProceedingsPaper");
            p.citations = rec.integer(3, 0, std::numeric_limits<long long>::max());
            p.subject_categories = split_categories(rec, 4);
            corpus.publications.push_back(std::move(p));
        });
    }

    {
        const std::string file = "authorships.csv";
        csv::Table t = table_of("authorships.csv");
        expect_header(
            t, {"pub_id", "author_slot", "total_authors", "researcher_id", "extramural_byline"},
            file);
        for_each_record(t, file, [&](const Record& rec) {
            Authorship a;
            a.pub_id = rec.raw(0);
            a.total_authors = static_cast<int>(rec.integer(2, 1, 1000000));
            a.author_slot = static_cast<int>(rec.integer(1, 1, a.total_authors));
            if (rec.raw(3) != "-") a.researcher_id = rec.raw(3);
            a.extramural_byline = rec.flag(4);
            corpus.authorships.push_back(std::move(a));
        });
    }

    return corpus;
}

ResearchCorpus load_corpus(const std::filesystem::path& dir, const ObservationWindow* window) {
    ResearchCorpus corpus = load_corpus_files(dir);
    auto violations = validate_corpus(corpus, window);
    if (!violations.empty()) {
        std::string msg = dir.string() + ": corpus failed validation (" +
                          std::to_string(violations.size()) + " violations)";
        for (const auto& v : violations)
            msg += "\n  " + std::string(to_string(v.kind)) + " " + v.entity + ": " + v.detail;
        throw Error(Errc::DanglingReference, msg);
    }
    return corpus;
}

CitationBaseline load_baseline_file(const std::filesystem::path& path) {
    const std::string file = path.filename().string();
    csv::Table t = csv::read_file(path);
    expect_header(t, {"year", "category", "mean_cited"}, file);
    CitationBaseline out;
    for_each_record(t, file, [&](const Record& rec) {
        int year = static_cast<int>(rec.integer(0, 1400, 2999));
        const std::string& category = rec.raw(1);
        if (category.empty()) schema_error(file, rec.row, "category", "empty category");
        double mean = rec.number(2);
        if (!(mean > 0.0)) schema_error(file, rec.row, "mean_cited", "must be positive");
        out.set(year, category, BaselineCell{mean, 0});
    });
    return out;
}

void write_corpus_files(const std::filesystem::path& dir, const ResearchCorpus& corpus) {
    std::filesystem::create_directories(dir);

    csv::Table universities{{"university_id", "name", "macro_region"}, {}};
    for (const auto& u : corpus.universities)
        universities.rows.push_back({u.university_id, u.name, to_string(u.macro_region)});
    csv::write_file(dir / "universities.csv", universities);

    csv::Table fields{{"sds_code", "uda_code", "byline_convention"}, {}};
    for (const auto& [sds, entry] : corpus.fields)
        fields.rows.push_back({sds, entry.uda_code, to_string(entry.convention)});
    csv::write_file(dir / "fields.csv", fields);

    csv::Table salaries{{"rank", "seniority_band", "yearly_salary"}, {}};
    for (const auto& [key, salary] : corpus.salaries.table)
        salaries.rows.push_back(
            {to_string(key.first), std::to_string(key.second), format_double(salary)});
    csv::write_file(dir / "salaries.csv", salaries);

    csv::Table researchers{{"researcher_id", "gender", "sds_code", "university_id"}, {}};
    csv::Table spells{{"researcher_id", "start", "end", "rank", "seniority_band"}, {}};
    for (const auto& r : corpus.researchers) {
        researchers.rows.push_back(
            {r.researcher_id, to_string(r.gender), r.sds_code, r.university_id});
        for (const auto& s : r.spells)
            spells.rows.push_back({r.researcher_id, format_date(s.start),
                                   s.end ? format_date(*s.end) : std::string{},
                                   to_string(s.rank), std::to_string(s.seniority_band)});
    }
    csv::write_file(dir / "researchers.csv", researchers);
    csv::write_file(dir / "spells.csv", spells);

    csv::Table publications{{"pub_id", "year", "doc_type", "citations", "categories"}, {}};
    for (const auto& p : corpus.publications) {
        std::string cats;
        for (const auto& c : p.subject_categories) cats += (cats.empty() ? "" : ";") + c;
        publications.rows.push_back({p.pub_id, std::to_string(p.year), to_string(p.doc_type),
                                     std::to_string(p.citations), cats});
    }
    csv::write_file(dir / "publications.csv", publications);

    csv::Table authorships{
        {"pub_id", "author_slot", "total_authors", "researcher_id", "extramural_byline"}, {}};
    for (const auto& a : corpus.authorships)
        authorships.rows.push_back({a.pub_id, std::to_string(a.author_slot),
                                    std::to_string(a.total_authors),
                                    a.is_external() ? "-" : a.researcher_id,
                                    a.extramural_byline ? "true" : "false"});
    csv::write_file(dir / "authorships.csv", authorships);
}

namespace {

const std::vector<std::string> kScoreHeader = {
    "researcher_id", "gender", "rank",       "sds_code",   "uda_code", "university_id",
    "macro_region",  "w",      "t",          "fss",        "fss_star", "percentile",
    "top"};

std::vector<ScoreRow> sorted_rows(const ScoreTable& table) {
    std::vector<ScoreRow> rows = table.rows;
    std::sort(rows.begin(), rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
        return a.researcher_id < b.researcher_id;
    });
    return rows;
}

csv::Table score_rows_to_table(const std::vector<ScoreRow>& rows) {
    csv::Table t{kScoreHeader, {}};
    for (const auto& r : rows) {
        t.rows.push_back({r.researcher_id, to_string(r.gender), to_string(r.rank), r.sds_code,
                          r.uda_code, r.university_id, to_string(r.region),
                          format_double(r.avg_salary), format_double(r.years),
                          format_double(r.fss), format_double(r.fss_star),
                          format_double(r.percentile), r.top ? "1" : "0"});
    }
    return t;
}

} // namespace

void write_score_table(const std::filesystem::path& path, const ScoreTable& table) {
    csv::write_file(path, score_rows_to_table(sorted_rows(table)));
}

ScoreTable read_score_table(const std::filesystem::path& path) {
    const std::string file = path.filename().string();
    csv::Table t = csv::read_file(path);
    expect_header(t, kScoreHeader, file);
    ScoreTable table;
    for_each_record(t, file, [&](const Record& rec) {
        ScoreRow r;
        r.researcher_id = rec.raw(0);
        r.gender = rec.parsed(1, parse_gender, "F/M/U");
        r.rank = rec.parsed(2, parse_academic_rank, "Assistant/Associate/Full");
        r.sds_code = rec.raw(3);
        r.uda_code = rec.raw(4);
        r.university_id = rec.raw(5);
        r.region = rec.parsed(6, parse_macro_region, "North/Center/South");
        r.avg_salary = rec.number(7);
        r.years = rec.number(8);
        r.fss = rec.number(9);
        r.fss_star = rec.number(10);
        r.percentile = rec.number(11);
        r.top = rec.flag(12);
        table.rows.push_back(std::move(r));
    });
    return table;
}

namespace {

// Writes the CSV plus an aligned human-readable sidecar. sidecar_decimals
// gives the fixed decimal count per column; -1 leaves the cell as-is.
void write_table_pair(const std::filesystem::path& csv_path, const csv::Table& table,
                      const std::vector<int>& sidecar_decimals,
                      std::vector<std::filesystem::path>& files) {
    csv::write_file(csv_path, table);
    files.push_back(csv_path);

    std::filesystem::path txt_path = csv_path;
    txt_path.replace_extension(".txt");

    auto render = [&](const std::vector<std::string>& row) {
        std::vector<std::string> out = row;
        for (std::size_t i = 0; i < out.size() && i < sidecar_decimals.size(); ++i) {
            if (sidecar_decimals[i] < 0) continue;
            if (auto v = parse_double(out[i]))
                out[i] = format_fixed(*v, sidecar_decimals[i]);
        }
        return out;
    };

    std::vector<std::vector<std::string>> rendered;
    rendered.push_back(table.header);
    for (const auto& row : table.rows) rendered.push_back(render(row));

    std::vector<std::size_t> widths;
    for (const auto& row : rendered) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());
    }

    std::ofstream out(txt_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + txt_path.string());
    for (const auto& row : rendered) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << row[i];
            if (i + 1 < row.size())
                out << std::string(widths[i] - row[i].size() + 2, ' ');
        }
        out << '\n';
    }
    files.push_back(txt_path);
}

const std::vector<std::string> kCohortStatsHeader = {
    "observations",   "pct_unproductive", "mean_fss_star", "mean_percentile", "pct_bottom_10",
    "pct_bottom_20",  "pct_above_median", "pct_top_20",    "pct_top_10",      "pct_top"};

std::vector<std::string> cohort_stats_cells(const CohortStats& s) {
    return {std::to_string(s.observations),    format_double(s.pct_unproductive),
            format_double(s.mean_fss_star),    format_double(s.mean_percentile),
            format_double(s.pct_bottom_small), format_double(s.pct_bottom_large),
            format_double(s.pct_above_median), format_double(s.pct_top_large),
            format_double(s.pct_top_small),    format_double(s.pct_top)};
}

// decimals for the 10 stats columns in sidecars: counts raw, FSS* with two
// decimals, everything else one (the table style of the source domain).
const std::vector<int> kCohortStatsDecimals = {-1, 1, 2, 1, 1, 1, 1, 1, 1, 1};

std::vector<int> with_label_columns(std::size_t labels, const std::vector<int>& rest) {
    std::vector<int> out(labels, -1);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

constexpr std::array<MacroRegion, 3> kRegionOrder{MacroRegion::North, MacroRegion::Center,
                                                  MacroRegion::South};

std::vector<CohortMember> members_of(const std::vector<const ScoreRow*>& rows) {
    std::vector<CohortMember> members;
    members.reserve(rows.size());
    for (const ScoreRow* r : rows)
        members.push_back(CohortMember{r->fss_star, r->percentile, r->top});
    return members;
}

// Emits one cohort family: rows grouped by `group_of`, each group split by
// region plus a Total row.
template <typename GroupFn>
csv::Table cohort_family_table(const std::vector<ScoreRow>& rows, const ThresholdSpec& spec,
                               const std::string& group_column, GroupFn group_of) {
    std::map<std::string, std::vector<const ScoreRow*>> groups;
    for (const auto& r : rows) groups[group_of(r)].push_back(&r);

    csv::Table t;
    t.header = {group_column, "macro_region"};
    t.header.insert(t.header.end(), kCohortStatsHeader.begin(), kCohortStatsHeader.end());

    for (const auto& [group, members] : groups) {
        for (MacroRegion region : kRegionOrder) {
            std::vector<const ScoreRow*> slice;
            for (const ScoreRow* r : members)
                if (r->region == region) slice.push_back(r);
            if (slice.empty()) continue;
            auto stats = cohort_stats(members_of(slice), spec);
            std::vector<std::string> cells{group, to_string(region)};
            auto sc = cohort_stats_cells(stats);
            cells.insert(cells.end(), sc.begin(), sc.end());
            t.rows.push_back(std::move(cells));
        }
        auto stats = cohort_stats(members_of(members), spec);
        std::vector<std::string> cells{group, "Total"};
        auto sc = cohort_stats_cells(stats);
        cells.insert(cells.end(), sc.begin(), sc.end());
        t.rows.push_back(std::move(cells));
    }
    return t;
}

csv::Table gap_rows_table(const GapTable& gaps) {
    csv::Table t{{"sds_code", "n_north", "n_center", "n_south", "mean_pct_north",
                  "mean_pct_center", "mean_pct_south", "gap_north_south", "gap_north_center",
                  "gap_center_south"},
                 {}};
    for (const auto& row : gaps.rows) {
        t.rows.push_back({row.sds_code, std::to_string(row.n_north),
                          std::to_string(row.n_center), std::to_string(row.n_south),
                          format_double(row.mean_north), format_double(row.mean_center),
                          format_double(row.mean_south), format_double(row.gap_north_south),
                          format_double(row.gap_north_center),
                          format_double(row.gap_center_south)});
    }
    return t;
}

csv::Table gap_summary_table(const GapTable& gaps) {
    csv::Table t{{"comparison", "highest_gap", "highest_sds", "lowest_gap", "lowest_sds",
                  "n_gap_nonnegative", "n_gap_negative"},
                 {}};
    for (const auto& s : gaps.summary) {
        t.rows.push_back({s.comparison, format_double(s.highest.gap), s.highest.sds_code,
                          format_double(s.lowest.gap), s.lowest.sds_code,
                          std::to_string(s.n_nonnegative), std::to_string(s.n_negative)});
    }
    return t;
}

void append_exclusions(csv::Table& t, const std::string& table_name,
                       const std::vector<ExclusionRecord>& records) {
    for (const auto& r : records)
        t.rows.push_back({table_name, r.rule, r.unit_kind, r.unit_code, r.detail});
}

const std::vector<int> kGapDecimals = {-1, -1, -1, -1, 1, 1, 1, 1, 1, 1};
const std::vector<int> kGapSummaryDecimals = {-1, 1, -1, 1, -1, -1, -1};

} // namespace

ReportBundle emit_reports(const ScoreTable& table, const PipelineConfig& config,
                          const std::filesystem::path& out_dir,
                          const std::string& input_fingerprint) {
    std::filesystem::create_directories(out_dir);
    ReportBundle bundle;
    const std::vector<ScoreRow> rows = sorted_rows(table);
    json manifest_files = json::object();

    auto emit = [&](const char* name, const csv::Table& t, const std::vector<int>& decimals) {
        write_table_pair(out_dir / name, t, decimals, bundle.files);
        manifest_files[name] = t.rows.size();
    };

    if (config.reports.contains("scores")) {
        emit("researcher_scores.csv", score_rows_to_table(rows),
             with_label_columns(7, {2, 2, -1, 2, 1, -1}));
    }

    if (config.reports.contains("cohorts")) {
        auto stats_decimals = with_label_columns(2, kCohortStatsDecimals);
        emit("cohort_overall.csv",
             cohort_family_table(rows, config.thresholds, "cohort",
                                 [](const ScoreRow&) { return std::string("all"); }),
             stats_decimals);
        emit("cohort_by_gender.csv",
             cohort_family_table(rows, config.thresholds, "gender",
                                 [](const ScoreRow& r) { return std::string(to_string(r.gender)); }),
             stats_decimals);
        emit("cohort_by_rank.csv",
             cohort_family_table(rows, config.thresholds, "rank",
                                 [](const ScoreRow& r) { return std::string(to_string(r.rank)); }),
             stats_decimals);
        emit("cohort_by_uda.csv",
             cohort_family_table(rows, config.thresholds, "uda_code",
                                 [](const ScoreRow& r) { return r.uda_code; }),
             stats_decimals);
    }

    if (config.reports.contains("gaps")) {
        GapTable researcher_gaps = gap_table(rows, config.exclusions);
        GapTable university_gaps = university_gap_table(rows, config.exclusions);
        emit("gap_researchers.csv", gap_rows_table(researcher_gaps), kGapDecimals);
        emit("gap_researchers_summary.csv", gap_summary_table(researcher_gaps),
             kGapSummaryDecimals);
        emit("gap_universities.csv", gap_rows_table(university_gaps), kGapDecimals);
        emit("gap_universities_summary.csv", gap_summary_table(university_gaps),
             kGapSummaryDecimals);

        csv::Table excl{{"table", "rule", "unit_kind", "unit_code", "detail"}, {}};
        append_exclusions(excl, "gap_researchers", researcher_gaps.exclusions);
        append_exclusions(excl, "gap_universities", university_gaps.exclusions);
        emit("exclusions_gaps.csv", excl, {});
    }

    if (config.reports.contains("universities")) {
        UniversityReport uda_report =
            university_report(rows, UniversityScope::Uda, config.exclusions, config.thresholds);
        UniversityReport overall_report = university_report(rows, UniversityScope::Overall,
                                                            config.exclusions, config.thresholds);
        UniversityReport sds_report =
            university_report(rows, UniversityScope::Sds, config.exclusions, config.thresholds);

        csv::Table report{{"scope", "scope_code", "macro_region"}, {}};
        report.header.insert(report.header.end(), kCohortStatsHeader.begin(),
                             kCohortStatsHeader.end());
        // FSS^U plays the fss_star role at university level.
        report.header[5] = "mean_fss_u";
        auto add_cohorts = [&](const char* scope, const UniversityReport& r) {
            for (const auto& row : r.cohorts) {
                std::vector<std::string> cells{scope, row.scope_code, to_string(row.region)};
                auto sc = cohort_stats_cells(row.stats);
                cells.insert(cells.end(), sc.begin(), sc.end());
                report.rows.push_back(std::move(cells));
            }
        };
        add_cohorts("uda", uda_report);
        add_cohorts("overall", overall_report);
        emit("university_report.csv", report, with_label_columns(3, kCohortStatsDecimals));

        csv::Table scores{{"scope", "scope_code", "university_id", "macro_region",
                           "research_staff", "fss_u", "percentile"},
                          {}};
        auto add_scores = [&](const char* scope, const UniversityReport& r) {
            for (const auto& u : r.scores)
                scores.rows.push_back({scope, u.scope_code, u.university_id,
                                       to_string(u.region), std::to_string(u.research_staff),
                                       format_double(u.fss_u), format_double(u.percentile)});
        };
        add_scores("uda", uda_report);
        add_scores("sds", sds_report);
        add_scores("overall", overall_report);
        emit("university_scores.csv", scores, with_label_columns(5, {2, 1}));

        csv::Table excl{{"table", "rule", "unit_kind", "unit_code", "detail"}, {}};
        append_exclusions(excl, "university_report_uda", uda_report.exclusions);
        append_exclusions(excl, "university_report_sds", sds_report.exclusions);
        append_exclusions(excl, "university_report_overall", overall_report.exclusions);
        emit("exclusions_universities.csv", excl, {});
    }

    json manifest;
    manifest["engine_version"] = kVersion;
    manifest["config"] = json::parse(config_to_json(config));
    Fnv1a config_hash;
    config_hash.update(config_to_json(config));
    manifest["config_hash"] = config_hash.hex();
    manifest["input_fingerprint"] = input_fingerprint;
    manifest["researchers_scored"] = table.rows.size();
    manifest["unscored_researchers"] = table.unscored_researchers;
    manifest["files"] = manifest_files;

    auto manifest_path = out_dir / "manifest.json";
    std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + manifest_path.string());
    out << manifest.dump(2) << '\n';
    bundle.files.push_back(manifest_path);
    return bundle;
}

ReportBundle run_pipeline(const ResearchCorpus& corpus, const PipelineConfig& config,
                          const std::filesystem::path& out_dir,
                          const std::string& input_fingerprint) {
    CitationBaseline baselines = config.baselines_file
                                     ? load_baseline_file(*config.baselines_file)
                                     : build_baselines(corpus.publications);
    ScoreTable table =
        score_corpus(corpus, config.window, config.weights, baselines, config.jobs);
    return emit_reports(table, config, out_dir, input_fingerprint);
}

std::string fingerprint_directory(const std::filesystem::path& dir) {
    Fnv1a hash;
    auto feed = [&](const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) return;
        hash.update(path.filename().string());
        char buf[65536];
        while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
            hash.update(buf, static_cast<std::size_t>(in.gcount()));
    };
    for (const char* name : kCorpusFiles) feed(dir / name);
    if (std::filesystem::exists(dir / kBaselineOverrideFile)) feed(dir / kBaselineOverrideFile);
    return hash.hex();
}

} // namespace fss
