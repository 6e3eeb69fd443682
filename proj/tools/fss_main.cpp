#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fss/config.hpp"
#include "fss/io.hpp"
#include "fss/numeric.hpp"
#include "fss/synth.hpp"
#include "fss/version.hpp"

namespace {

// exit codes: 0 ok, 1 validation failure, 2 schema/config/IO failure
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSchema = 2;

int classify(const fss::Error& e) {
    switch (e.code()) {
        case fss::Errc::DanglingReference:
        case fss::Errc::NoEmployment:
        case fss::Errc::UnknownSalaryKey:
        case fss::Errc::MissingBaseline:
        case fss::Errc::MissingSdsBaseline:
            return kExitValidation;
        default:
            return kExitSchema;
    }
}

struct WindowOverride {
    std::optional<int> first_year;
    std::optional<int> last_year;
};

bool parse_window_flag(const std::string& text, WindowOverride& out) {
    auto colon = text.find(':');
    if (colon == std::string::npos) return false;
    auto first = fss::parse_int(text.substr(0, colon));
    auto last = fss::parse_int(text.substr(colon + 1));
    if (!first || !last || *first > *last) return false;
    out.first_year = static_cast<int>(*first);
    out.last_year = static_cast<int>(*last);
    return true;
}

fss::PipelineConfig effective_config(const std::string& config_path, const std::string& window,
                                     std::optional<std::uint64_t> seed, int jobs) {
    fss::PipelineConfig config;
    if (!config_path.empty()) config = fss::load_config(config_path);
    if (!window.empty()) {
        WindowOverride w;
        if (!parse_window_flag(window, w))
            throw fss::Error(fss::Errc::ConfigError, "--window expects YYYY:YYYY");
        config.window.first_year = *w.first_year;
        config.window.last_year = *w.last_year;
    }
    if (seed) config.seed = *seed;
    if (jobs > 0) config.jobs = jobs;
    return config;
}

int run_compute(const std::string& corpus_dir, const std::string& config_path,
                const std::string& out_dir, const std::string& window,
                std::optional<std::uint64_t> seed, int jobs) {
    fss::PipelineConfig config = effective_config(config_path, window, seed, jobs);
    fss::ResearchCorpus corpus = fss::load_corpus(corpus_dir, &config.window);
    if (config.baselines_file && config.baselines_file->is_relative())
        config.baselines_file = std::filesystem::path(corpus_dir) / *config.baselines_file;
    std::string fingerprint = fss::fingerprint_directory(corpus_dir);
    fss::ReportBundle bundle = fss::run_pipeline(corpus, config, out_dir, fingerprint);
    std::cout << "wrote " << bundle.files.size() << " files to " << out_dir << "\n";
    return kExitOk;
}

int run_report(const std::string& scores_path, const std::string& config_path,
               const std::string& out_dir, const std::string& window,
               std::optional<std::uint64_t> seed, int jobs) {
    fss::PipelineConfig config = effective_config(config_path, window, seed, jobs);
    fss::ScoreTable table = fss::read_score_table(scores_path);
    fss::Fnv1a fingerprint;
    std::ifstream in(scores_path, std::ios::binary);
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        fingerprint.update(buf, static_cast<std::size_t>(in.gcount()));
    fss::ReportBundle bundle =
        fss::emit_reports(table, config, out_dir, fingerprint.hex());
    std::cout << "wrote " << bundle.files.size() << " files to " << out_dir << "\n";
    return kExitOk;
}

int run_validate(const std::string& corpus_dir, const std::string& window) {
    fss::ObservationWindow obs{2009, 2013, fss::Date{2014, 6, 30}};
    const fss::ObservationWindow* obs_ptr = nullptr;
    WindowOverride w;
    if (!window.empty()) {
        if (!parse_window_flag(window, w))
            throw fss::Error(fss::Errc::ConfigError, "--window expects YYYY:YYYY");
        obs.first_year = *w.first_year;
        obs.last_year = *w.last_year;
        obs_ptr = &obs;
    }
    fss::ResearchCorpus corpus = fss::load_corpus_files(corpus_dir);
    auto violations = fss::validate_corpus(corpus, obs_ptr);
    if (violations.empty()) {
        std::cout << "corpus ok: " << corpus.researchers.size() << " researchers, "
                  << corpus.publications.size() << " publications\n";
        return kExitOk;
    }
    for (const auto& v : violations)
        std::cout << to_string(v.kind) << " " << v.entity << ": " << v.detail << "\n";
    std::cout << violations.size() << " violations\n";
    return kExitValidation;
}

int run_synth(const std::string& out_dir, const std::string& profile_path,
              std::optional<std::uint64_t> seed, std::optional<int> researchers) {
    fss::SynthProfile profile;
    if (!profile_path.empty()) profile = fss::load_profile(profile_path);
    if (seed) profile.seed = *seed;
    if (researchers) profile.researchers = *researchers;
    fss::ResearchCorpus corpus = fss::generate_corpus(profile);
    fss::write_corpus_files(out_dir, corpus);
    std::cout << "wrote corpus: " << corpus.researchers.size() << " researchers, "
              << corpus.publications.size() << " publications, "
              << corpus.universities.size() << " universities -> " << out_dir << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"research productivity indicators (FSS / FSS* / FSS^U) over a bibliometric "
                 "corpus"};
    app.require_subcommand(1);

    std::string corpus_dir, config_path, out_dir = "out", window, scores_path, profile_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> researchers;
    int jobs = 0;

    auto* compute = app.add_subcommand("compute", "run the full scoring and report pipeline");
    compute->add_option("--corpus", corpus_dir, "corpus directory")->required();
    compute->add_option("--config", config_path, "pipeline config JSON");
    compute->add_option("--out", out_dir, "output directory");
    compute->add_option("--window", window, "observation window YYYY:YYYY");
    compute->add_option("--seed", seed, "seed recorded in the manifest");
    compute->add_option("--jobs", jobs, "worker threads for scoring");

    auto* report = app.add_subcommand("report", "re-emit reports from cached scores");
    report->add_option("--scores", scores_path, "researcher_scores.csv from a previous run")
        ->required();
    report->add_option("--config", config_path, "pipeline config JSON");
    report->add_option("--out", out_dir, "output directory");
    report->add_option("--window", window, "observation window YYYY:YYYY");
    report->add_option("--seed", seed, "seed recorded in the manifest");

    auto* validate = app.add_subcommand("validate", "check a corpus directory");
    validate->add_option("--corpus", corpus_dir, "corpus directory")->required();
    validate->add_option("--window", window, "observation window YYYY:YYYY");

    auto* synth = app.add_subcommand("synth", "generate a seeded synthetic corpus");
    synth->add_option("--out", out_dir, "corpus output directory");
    synth->add_option("--profile", profile_path, "synthesis profile JSON");
    synth->add_option("--seed", seed, "generator seed");
    synth->add_option("--researchers", researchers, "researcher count override");

    auto* version = app.add_subcommand("version", "print version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitSchema;
    }

    try {
        if (compute->parsed())
            return run_compute(corpus_dir, config_path, out_dir, window, seed, jobs);
        if (report->parsed())
            return run_report(scores_path, config_path, out_dir, window, seed, jobs);
        if (validate->parsed()) return run_validate(corpus_dir, window);
        if (synth->parsed()) return run_synth(out_dir, profile_path, seed, researchers);
        if (version->parsed()) {
            std::cout << "fss " << fss::kVersion << "\n";
            return kExitOk;
        }
    } catch (const fss::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    }
    return kExitOk;
}
