#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fss/cohort.hpp"
#include "fss/config.hpp"
#include "fss/corpus.hpp"
#include "fss/productivity.hpp"

namespace fss {

// Required corpus files inside a corpus directory.
inline constexpr const char* kCorpusFiles[] = {
    "researchers.csv", "spells.csv",       "salaries.csv",   "universities.csv",
    "fields.csv",      "publications.csv", "authorships.csv"};

inline constexpr const char* kBaselineOverrideFile = "baselines.csv";

// Parses and schema-checks the corpus files. Row-level problems throw
// Errc::SchemaError with file/row/column context; nothing is returned
// partially. Cross-reference validity is NOT enforced here — run
// validate_corpus for that.
ResearchCorpus load_corpus_files(const std::filesystem::path& dir);

// load_corpus_files + validate_corpus; any violation throws
// Errc::DanglingReference with the full violation list in the message.
ResearchCorpus load_corpus(const std::filesystem::path& dir,
                           const ObservationWindow* window = nullptr);

// Reads a baselines.csv override (year, category, mean_cited).
CitationBaseline load_baseline_file(const std::filesystem::path& path);

void write_corpus_files(const std::filesystem::path& dir, const ResearchCorpus& corpus);

// Scores CSV round-trip; the cached-scores path of the `report` verb.
void write_score_table(const std::filesystem::path& path, const ScoreTable& table);
ScoreTable read_score_table(const std::filesystem::path& path);

struct ReportBundle {
    std::vector<std::filesystem::path> files; // everything written, manifest last
};

// Emits the selected report families from a scored table plus a manifest
// with the config hash and input fingerprint. Deterministic: identical
// inputs produce byte-identical files.
ReportBundle emit_reports(const ScoreTable& table, const PipelineConfig& config,
                          const std::filesystem::path& out_dir,
                          const std::string& input_fingerprint);

// Full pipeline: baselines (corpus-derived or override), scoring, reports.
ReportBundle run_pipeline(const ResearchCorpus& corpus, const PipelineConfig& config,
                          const std::filesystem::path& out_dir,
                          const std::string& input_fingerprint);

// FNV-1a over the corpus directory's data files (name + bytes), so any
// one-byte change moves the fingerprint.
std::string fingerprint_directory(const std::filesystem::path& dir);

} // namespace fss
