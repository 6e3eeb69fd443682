#include "fss/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fss/numeric.hpp"

namespace fss {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) known = true;
        if (!known)
            throw Error(Errc::ConfigError, "unknown key '" + it.key() + "' in " + where);
    }
}

double require_number(const json& obj, const char* key, double fallback, double lo, double hi,
                      const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw Error(Errc::ConfigError, where + "." + key + " must be a number");
    double x = v.get<double>();
    if (!(x >= lo && x <= hi))
        throw Error(Errc::ConfigError, where + "." + key + " out of range");
    return x;
}

WeightTriple parse_triple(const json& obj, const std::string& where, WeightTriple fallback) {
    reject_unknown_keys(obj, {"first", "last", "middle"}, where);
    WeightTriple t;
    t.first = require_number(obj, "first", fallback.first, 0.0, 1.0, where);
    t.last = require_number(obj, "last", fallback.last, 0.0, 1.0, where);
    t.middle_pool = require_number(obj, "middle", fallback.middle_pool, 0.0, 1.0, where);
    if (std::fabs(t.first + t.last + t.middle_pool - 1.0) > 1e-12)
        throw Error(Errc::ConfigError, where + " weights must sum to 1");
    return t;
}

} // namespace

PipelineConfig parse_config_json(const std::string& json_text) {
    json root = json::parse(json_text, nullptr, true, /*ignore_comments=*/false);
    if (!root.is_object()) throw Error(Errc::ConfigError, "config must be a JSON object");
    reject_unknown_keys(root,
                        {"window", "weights", "exclusions", "thresholds", "reports", "seed",
                         "baselines_file", "jobs"},
                        "config");

    PipelineConfig config;

    if (root.contains("window")) {
        const auto& w = root.at("window");
        reject_unknown_keys(w, {"first_year", "last_year", "census_date"}, "window");
        config.window.first_year = static_cast<int>(
            require_number(w, "first_year", config.window.first_year, 1900, 2999, "window"));
        config.window.last_year = static_cast<int>(
            require_number(w, "last_year", config.window.last_year, 1900, 2999, "window"));
        if (w.contains("census_date")) {
            auto d = parse_date(w.at("census_date").get<std::string>());
            if (!d) throw Error(Errc::ConfigError, "window.census_date is not a date");
            config.window.citation_census_date = *d;
        }
        if (config.window.first_year > config.window.last_year)
            throw Error(Errc::ConfigError, "window.first_year > window.last_year");
    }

    if (root.contains("weights")) {
        const auto& w = root.at("weights");
        reject_unknown_keys(w, {"intramural", "extramural"}, "weights");
        if (w.contains("intramural"))
            config.weights.intramural =
                parse_triple(w.at("intramural"), "weights.intramural", config.weights.intramural);
        if (w.contains("extramural"))
            config.weights.extramural =
                parse_triple(w.at("extramural"), "weights.extramural", config.weights.extramural);
    }

    if (root.contains("exclusions")) {
        const auto& e = root.at("exclusions");
        reject_unknown_keys(e,
                            {kRuleObsPerRegionSds, kRuleUniversitiesPerRegionSds,
                             kRuleStaffPerUniversitySds, kRuleProfessorsPerUniversityUda,
                             kRuleProfessorsPerSdsUniversityOverall},
                            "exclusions");
        auto field = [&](const char* key, int fallback) {
            return static_cast<int>(require_number(e, key, fallback, 1, 1e6, "exclusions"));
        };
        config.exclusions.min_obs_per_region_sds =
            field(kRuleObsPerRegionSds, config.exclusions.min_obs_per_region_sds);
        config.exclusions.min_universities_per_region_sds =
            field(kRuleUniversitiesPerRegionSds,
                  config.exclusions.min_universities_per_region_sds);
        config.exclusions.min_staff_per_university_sds =
            field(kRuleStaffPerUniversitySds, config.exclusions.min_staff_per_university_sds);
        config.exclusions.min_professors_per_university_uda =
            field(kRuleProfessorsPerUniversityUda,
                  config.exclusions.min_professors_per_university_uda);
        config.exclusions.min_professors_per_sds_university_overall =
            field(kRuleProfessorsPerSdsUniversityOverall,
                  config.exclusions.min_professors_per_sds_university_overall);
    }

    if (root.contains("thresholds")) {
        const auto& t = root.at("thresholds");
        reject_unknown_keys(t, {"bottom_small", "bottom_large", "top_large", "top_small",
                                "top_rule", "top_cut"},
                            "thresholds");
        auto& spec = config.thresholds;
        spec.bottom_small = require_number(t, "bottom_small", spec.bottom_small, 0, 100,
                                           "thresholds");
        spec.bottom_large = require_number(t, "bottom_large", spec.bottom_large, 0, 100,
                                           "thresholds");
        spec.top_large = require_number(t, "top_large", spec.top_large, 0, 100, "thresholds");
        spec.top_small = require_number(t, "top_small", spec.top_small, 0, 100, "thresholds");
        spec.top_cut = require_number(t, "top_cut", spec.top_cut, 0, 100, "thresholds");
        if (t.contains("top_rule")) {
            std::string rule = t.at("top_rule").get<std::string>();
            if (rule == "strict_max")
                spec.top_rule = ThresholdSpec::TopRule::StrictMax;
            else if (rule == "percentile_cut")
                spec.top_rule = ThresholdSpec::TopRule::PercentileCut;
            else
                throw Error(Errc::ConfigError, "thresholds.top_rule must be strict_max or "
                                               "percentile_cut");
        }
    }

    if (root.contains("reports")) {
        config.reports.clear();
        for (const auto& r : root.at("reports")) {
            std::string name = r.get<std::string>();
            if (!kReportFamilies.contains(name))
                throw Error(Errc::ConfigError, "unknown report family '" + name + "'");
            config.reports.insert(name);
        }
        if (config.reports.empty())
            throw Error(Errc::ConfigError, "reports must not be empty");
    }

    if (root.contains("seed")) config.seed = root.at("seed").get<std::uint64_t>();
    if (root.contains("jobs"))
        config.jobs = static_cast<int>(require_number(root, "jobs", 1, 1, 1024, "config"));
    if (root.contains("baselines_file"))
        config.baselines_file = root.at("baselines_file").get<std::string>();

    return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::MissingFile, path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_json(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ConfigError, path.string() + ": " + e.what());
    }
}

std::string config_to_json(const PipelineConfig& config) {
    json root;
    root["window"] = {{"first_year", config.window.first_year},
                      {"last_year", config.window.last_year},
                      {"census_date", format_date(config.window.citation_census_date)}};
    root["weights"] = {
        {"intramural",
         {{"first", config.weights.intramural.first},
          {"last", config.weights.intramural.last},
          {"middle", config.weights.intramural.middle_pool}}},
        {"extramural",
         {{"first", config.weights.extramural.first},
          {"last", config.weights.extramural.last},
          {"middle", config.weights.extramural.middle_pool}}}};
    root["exclusions"] = {
        {kRuleObsPerRegionSds, config.exclusions.min_obs_per_region_sds},
        {kRuleUniversitiesPerRegionSds, config.exclusions.min_universities_per_region_sds},
        {kRuleStaffPerUniversitySds, config.exclusions.min_staff_per_university_sds},
        {kRuleProfessorsPerUniversityUda, config.exclusions.min_professors_per_university_uda},
        {kRuleProfessorsPerSdsUniversityOverall,
         config.exclusions.min_professors_per_sds_university_overall}};
    root["thresholds"] = {
        {"bottom_small", config.thresholds.bottom_small},
        {"bottom_large", config.thresholds.bottom_large},
        {"top_large", config.thresholds.top_large},
        {"top_small", config.thresholds.top_small},
        {"top_rule", config.thresholds.top_rule == ThresholdSpec::TopRule::StrictMax
                         ? "strict_max"
                         : "percentile_cut"},
        {"top_cut", config.thresholds.top_cut}};
    root["reports"] = config.reports;
    root["seed"] = config.seed;
    if (config.baselines_file) root["baselines_file"] = config.baselines_file->string();
    return root.dump(2) + "\n";
}

} // namespace fss
