#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "morl/chvi.hpp"
#include "morl/csv.hpp"
#include "morl/envs/deep_sea_treasure.hpp"
#include "morl/envs/water_reservoir.hpp"
#include "morl/indicators.hpp"
#include "morl/momdp.hpp"
#include "morl/nes.hpp"
#include "morl/svg.hpp"

namespace morl {

inline constexpr const char* kVersion = "0.1.0";

/// Invalid or unusable configuration; the CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// FNV-1a over the canonical (sorted-key) JSON serialisation; embedded in
/// every emitted CSV and in the manifest for provenance.
inline std::string config_hash(const nlohmann::json& config) {
    const std::string canonical = config.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::unique_ptr<Environment> make_environment(const nlohmann::json& spec) {
    if (!spec.is_object()) throw ConfigError("environment spec must be an object");
    const std::string name = spec.value("name", "");
    if (name == "water_reservoir")
        return std::make_unique<WaterReservoirEnv>(WaterReservoirConfig::from_json(spec));
    if (name == "deep_sea_treasure") return std::make_unique<DeepSeaTreasureEnv>();
    throw ConfigError("unknown environment '" + name + "'");
}

inline UtilityPrior parse_utility_prior(const nlohmann::json& j) {
    UtilityPrior prior;
    const std::string kind = j.value("kind", "uniform_linear_simplex");
    prior.sample_count = j.value("sample_count", 10000);
    prior.seed = j.value("seed", std::uint64_t{0});
    if (kind == "uniform_linear_simplex") {
        prior.kind = UtilityPrior::Kind::uniform_linear_simplex;
    } else if (kind == "explicit") {
        std::vector<std::pair<UtilityFunction, double>> utilities;
        for (const auto& item : j.at("utilities"))
            utilities.emplace_back(UtilityFunction::parse(item.at("spec").get<std::string>()),
                                   item.at("probability").get<double>());
        return UtilityPrior::explicit_family(std::move(utilities), prior.sample_count, prior.seed);
    } else {
        throw ConfigError("unknown utility prior kind '" + kind + "'");
    }
    if (prior.sample_count < 1) throw ConfigError("utility prior sample_count must be >= 1");
    return prior;
}

inline MonesConfig parse_mones_config(const nlohmann::json& j) {
    MonesConfig c;
    c.iterations = j.value("iterations", c.iterations);
    c.population = j.value("population", c.population);
    c.evals_per_policy = j.value("evals_per_policy", c.evals_per_policy);
    c.lr_mean = j.value("lr_mean", c.lr_mean);
    c.lr_log_std = j.value("lr_log_std", c.lr_log_std);
    c.init_std = j.value("init_std", c.init_std);
    c.gamma = j.value("gamma", c.gamma);
    try {
        c.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return c;
}

struct ExperimentConfig {
    nlohmann::json raw;      // resolved config (defaults filled), hashed for provenance
    std::string algorithm;   // mones | outer_nes | chvi
    nlohmann::json environment;
    MonesConfig mones;
    double chvi_tolerance = 1e-9;
    std::optional<std::string> momdp_path;
    std::vector<std::string> metrics;
    UtilityPrior prior;
    std::uint64_t seed = 0;
    std::string output_dir;

    std::string hash() const { return config_hash(raw); }
};

/// Parses and fully validates a run config. Nothing is written to disk
/// here, so a malformed config can never leave partial outputs behind.
inline ExperimentConfig parse_experiment_config(const nlohmann::json& j,
                                                std::optional<std::uint64_t> seed_override = {}) {
    try {
        ExperimentConfig cfg;
        cfg.algorithm = j.at("algorithm").get<std::string>();
        if (cfg.algorithm != "mones" && cfg.algorithm != "outer_nes" && cfg.algorithm != "chvi")
            throw ConfigError("unknown algorithm '" + cfg.algorithm + "'");

        if (!j.contains("seed")) throw ConfigError("config must set a seed (no wall-clock seeding)");
        cfg.seed = seed_override ? *seed_override : j.at("seed").get<std::uint64_t>();
        cfg.output_dir = j.at("output_dir").get<std::string>();

        cfg.environment = j.at("environment");
        if (cfg.environment.contains("momdp_path")) {
            cfg.momdp_path = cfg.environment.at("momdp_path").get<std::string>();
            if (cfg.algorithm != "chvi")
                throw ConfigError("momdp_path environments are only usable with the chvi algorithm");
        } else {
            auto env = make_environment(cfg.environment); // validates the spec
            if (cfg.environment.value("name", "") == "water_reservoir")
                cfg.environment = WaterReservoirConfig::from_json(cfg.environment).to_json();
            else if (cfg.environment.value("name", "") == "deep_sea_treasure")
                cfg.environment = DeepSeaTreasureConfig{}.to_json();
        }

        if (j.contains("algorithm_config")) {
            cfg.mones = parse_mones_config(j.at("algorithm_config"));
            cfg.chvi_tolerance = j.at("algorithm_config").value("tolerance", cfg.chvi_tolerance);
        }

        if (j.contains("metrics")) {
            for (const auto& m : j.at("metrics")) {
                const std::string name = m.get<std::string>();
                static const std::set<std::string> known{"hypervolume", "sparsity", "eum"};
                if (!known.count(name))
                    throw ConfigError("metric '" + name +
                                      "' is not computable inside a run (it needs a reference "
                                      "front; use the metrics subcommand)");
                cfg.metrics.push_back(name);
            }
        }

        cfg.prior = j.contains("utility_prior") ? parse_utility_prior(j.at("utility_prior"))
                                                : UtilityPrior::uniform_linear(10000, 0);

        nlohmann::json resolved = j;
        resolved["seed"] = cfg.seed;
        resolved["environment"] = cfg.environment;
        if (cfg.algorithm == "chvi") {
            resolved["algorithm_config"] = {{"tolerance", cfg.chvi_tolerance}};
        } else {
            resolved["algorithm_config"] = {
                {"iterations", cfg.mones.iterations},   {"population", cfg.mones.population},
                {"evals_per_policy", cfg.mones.evals_per_policy}, {"lr_mean", cfg.mones.lr_mean},
                {"lr_log_std", cfg.mones.lr_log_std},   {"init_std", cfg.mones.init_std},
                {"gamma", cfg.mones.gamma}};
        }
        cfg.raw = std::move(resolved);
        return cfg;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

inline ExperimentConfig load_experiment_config(const std::string& path,
                                               std::optional<std::uint64_t> seed_override = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_experiment_config(j, seed_override);
}

/// Component-wise worst return across a whole training run: the reference
/// point rule for the study's hypervolume series.
inline ReferencePoint worst_return_reference(const std::vector<SolutionSet>& archive) {
    ReferencePoint ref;
    for (const auto& set : archive) {
        for (const auto& e : set.entries) {
            if (ref.components.empty()) ref.components = e.value;
            for (std::size_t i = 0; i < e.value.size(); ++i)
                ref.components[i] = std::min(ref.components[i], e.value[i]);
        }
    }
    if (ref.components.empty()) throw std::invalid_argument("worst_return_reference: empty archive");
    return ref;
}

inline nlohmann::json eum_report(const SolutionSet& front, const UtilityPrior& prior) {
    return {{"value", expected_utility_metric(front, prior)},
            {"samples", prior.sample_count},
            {"seed", prior.seed}};
}

struct RunArtifacts {
    std::vector<std::string> files;
    nlohmann::json manifest;
};

namespace detail {

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

inline std::string out_path(const ExperimentConfig& cfg, const std::string& file) {
    return (std::filesystem::path(cfg.output_dir) / file).string();
}

inline RunArtifacts run_mones_like(const ExperimentConfig& cfg) {
    RunArtifacts art;
    const std::string hash = cfg.hash();
    auto env = make_environment(cfg.environment);
    const auto names = env->objective_names();

    std::vector<SolutionSet> archive;
    SolutionSet final_raw;
    if (cfg.algorithm == "mones") {
        MonesResult res = mones_train(*env, cfg.mones, Rng(cfg.seed));
        archive = std::move(res.archive);
        if (!archive.empty()) final_raw = archive.back();
    } else {
        final_raw = outer_loop_nes(*env, cfg.prior, cfg.mones, Rng(cfg.seed));
        archive.push_back(final_raw);
    }

    write_archive_csv(out_path(cfg, "archive.csv"), archive, names, hash);
    art.files.push_back("archive.csv");

    SolutionSet front = final_raw.empty() ? final_raw : pareto_prune(final_raw);
    write_solution_set_csv(out_path(cfg, "front.csv"), front, names, hash);
    art.files.push_back("front.csv");

    nlohmann::json report;
    if (!front.empty() && !cfg.metrics.empty()) {
        std::optional<ReferencePoint> ref;
        for (const std::string& metric : cfg.metrics) {
            if (metric == "hypervolume") {
                ref = worst_return_reference(archive);
                report["hypervolume"] = hypervolume(front, *ref);
                report["ref_point"] = ref->components;
            } else if (metric == "sparsity") {
                report["sparsity"] = sparsity(front);
            } else if (metric == "eum") {
                report["eum"] = eum_report(front, cfg.prior);
            }
        }
        // per-iteration series for the metric-vs-iteration charts
        if (ref) {
            CsvWriter w(out_path(cfg, "metrics_per_iteration.csv"));
            w.meta("config_hash", hash);
            const bool with_eum =
                std::find(cfg.metrics.begin(), cfg.metrics.end(), "eum") != cfg.metrics.end();
            std::vector<std::string> header{"iteration", "hypervolume"};
            if (with_eum) header.push_back("eum");
            w.row(header);
            const auto utilities =
                with_eum ? sample_utilities(cfg.prior, front.dimension()) : std::vector<UtilityFunction>{};
            for (std::size_t t = 0; t < archive.size(); ++t) {
                SolutionSet it_front = pareto_prune(archive[t]);
                std::vector<std::string> row{std::to_string(t),
                                             format_double(hypervolume(it_front, *ref))};
                if (with_eum) row.push_back(format_double(eum_on_utilities(it_front, utilities)));
                w.row(row);
            }
            art.files.push_back("metrics_per_iteration.csv");
        }
    }
    detail::write_json_file(out_path(cfg, "report.json"), report);
    art.files.push_back("report.json");
    return art;
}

inline RunArtifacts run_chvi(const ExperimentConfig& cfg) {
    RunArtifacts art;
    const std::string hash = cfg.hash();

    std::optional<MomdpModel> model;
    std::vector<std::string> names{"v0", "v1"};
    bool is_dst = false;
    if (cfg.momdp_path) {
        model.emplace(MomdpModel::load(*cfg.momdp_path));
        for (int i = 2; i < model->num_objectives(); ++i) names.push_back("v" + std::to_string(i));
    } else if (cfg.environment.value("name", "") == "deep_sea_treasure") {
        model.emplace(dst_to_momdp());
        names = {"treasure", "time"};
        is_dst = true;
    } else {
        throw ConfigError("chvi needs a momdp_path or the deep_sea_treasure environment");
    }

    const ChviResult res = chvi(*model, cfg.chvi_tolerance);
    write_solution_set_csv(out_path(cfg, "ccs.csv"), res.root_set(*model), names, hash);
    art.files.push_back("ccs.csv");
    if (is_dst) {
        write_solution_set_csv(out_path(cfg, "true_front.csv"), dst_true_front(), names, hash);
        art.files.push_back("true_front.csv");
    }
    nlohmann::json report{{"sweeps", res.sweeps}, {"final_distance", res.final_distance}};
    detail::write_json_file(out_path(cfg, "report.json"), report);
    art.files.push_back("report.json");
    return art;
}

} // namespace detail

/**
 * Executes a fully validated run config: trains / plans, then writes the
 * archive and front CSVs, the metric report and a manifest into the output
 * directory. Identical config + seed give byte-identical artifacts.
 */
inline RunArtifacts run_experiment(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
    RunArtifacts art = (cfg.algorithm == "chvi") ? detail::run_chvi(cfg) : detail::run_mones_like(cfg);

    art.manifest = {{"config_hash", cfg.hash()},
                    {"seed", cfg.seed},
                    {"version", kVersion},
                    {"algorithm", cfg.algorithm},
                    {"outputs", art.files}};
    detail::write_json_file(detail::out_path(cfg, "manifest.json"), art.manifest);
    art.files.push_back("manifest.json");
    return art;
}

// ---------------------------------------------------------------------------
// The metrics subcommand: report cards over front CSVs
// ---------------------------------------------------------------------------

struct MetricsRequest {
    std::string front_path;
    std::optional<std::string> reference_path;
    std::optional<ValueVector> ref_point;
    std::vector<std::string> metrics;
    double coverage_eps = 0.01;
    int eum_samples = 100000;
    std::uint64_t eum_seed = 0;
};

inline nlohmann::json compute_metrics(const MetricsRequest& req) {
    const SolutionSet front = read_solution_set_csv(req.front_path);
    std::optional<SolutionSet> reference;
    if (req.reference_path) reference = read_solution_set_csv(*req.reference_path);
    if (reference && !front.empty() && !reference->empty() &&
        front.dimension() != reference->dimension())
        throw ConfigError("front and reference have different dimensions");

    const UtilityPrior prior = UtilityPrior::uniform_linear(req.eum_samples, req.eum_seed);
    nlohmann::json report;
    for (const std::string& metric : req.metrics) {
        if (metric == "hypervolume") {
            if (!req.ref_point) throw ConfigError("hypervolume requires --ref-point");
            report["hypervolume"] = hypervolume(front, ReferencePoint{*req.ref_point});
            report["ref_point"] = *req.ref_point;
        } else if (metric == "sparsity") {
            report["sparsity"] = sparsity(pareto_prune(front));
        } else if (metric == "eum") {
            report["eum"] = eum_report(front, prior);
        } else if (metric == "eps_additive" || metric == "eps_multiplicative" ||
                   metric == "coverage_ratio" || metric == "mul") {
            if (!reference) throw ConfigError(metric + " requires --reference");
            if (metric == "eps_additive")
                report["eps_additive"] = epsilon_additive(front, *reference);
            else if (metric == "eps_multiplicative")
                report["eps_multiplicative"] = epsilon_multiplicative(front, *reference);
            else if (metric == "coverage_ratio") {
                const CoverageRatio cr = coverage_ratio(front, *reference, req.coverage_eps);
                report["coverage_ratio"] = {{"precision", cr.precision},
                                            {"recall", cr.recall},
                                            {"f_score", cr.f_score},
                                            {"eps", req.coverage_eps}};
            } else {
                report["mul"] = maximum_utility_loss(front, *reference, prior);
            }
        } else {
            throw ConfigError("unknown metric '" + metric + "'");
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// The plot subcommand: CSVs -> SVG
// ---------------------------------------------------------------------------

/// Front / archive CSVs become scatter series (one per file); per-iteration
/// metric CSVs become line series. Axis labels come from the CSV headers.
inline void plot_csvs(const std::vector<std::string>& csv_paths, const std::string& out_path) {
    if (csv_paths.empty()) throw ConfigError("plot: no input CSVs");
    std::vector<PlotSeries> series;
    std::string x_label, y_label;
    bool lines = false;
    for (const auto& path : csv_paths) {
        const CsvTable table = read_csv(path);
        if (table.rows.empty()) throw ConfigError("plot: " + path + " has no data rows");
        PlotSeries s;
        s.label = std::filesystem::path(path).stem().string();
        if (table.has_column("iteration") && !table.has_column("policy_index")) {
            // per-iteration metric log: iteration on x, first metric column on y
            const std::size_t xcol = table.column("iteration");
            const std::size_t ycol = xcol == 0 ? 1 : 0;
            if (table.header.size() < 2) throw ConfigError("plot: " + path + " has no metric column");
            x_label = table.header[xcol];
            y_label = table.header[ycol];
            for (const auto& row : table.rows)
                s.points.emplace_back(std::stod(row[xcol]), std::stod(row[ycol]));
            lines = true;
        } else {
            // solution set or archive: scatter of the two objective columns
            std::vector<std::size_t> value_cols;
            for (std::size_t i = 0; i < table.header.size(); ++i)
                if (table.header[i] != "policy_id" && table.header[i] != "iteration" &&
                    table.header[i] != "policy_index")
                    value_cols.push_back(i);
            if (value_cols.size() < 2) throw ConfigError("plot: " + path + " has fewer than 2 objectives");
            x_label = table.header[value_cols[0]];
            y_label = table.header[value_cols[1]];
            for (const auto& row : table.rows)
                s.points.emplace_back(std::stod(row[value_cols[0]]), std::stod(row[value_cols[1]]));
        }
        series.push_back(std::move(s));
    }
    write_svg_chart(out_path, series, x_label, y_label, lines);
}

} // namespace morl
