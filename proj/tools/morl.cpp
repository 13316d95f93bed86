// morl: config-driven runner for multi-objective sequential decision making
// experiments. Subcommands: run (train/plan and emit artifacts), metrics
// (report cards over front CSVs), plot (CSVs -> SVG).

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "morl/experiment.hpp"

namespace {

std::optional<std::uint64_t> seed_from_env() {
    const char* v = std::getenv("MORL_SEED");
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::strtoull(v, nullptr, 10);
}

morl::ValueVector parse_point(const std::string& text) {
    morl::ValueVector point;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) point.push_back(std::stod(item));
    if (point.size() < 2) throw morl::ConfigError("--ref-point needs at least 2 components");
    return point;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-objective decision making toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "execute an experiment config");
    run->add_option("config", config_path, "experiment config (JSON)")->required();

    std::string front_path, reference_path, ref_point_text, metrics_out;
    std::vector<std::string> metric_names;
    double coverage_eps = 0.01;
    int eum_samples = 100000;
    std::uint64_t eum_seed = 0;
    CLI::App* metrics = app.add_subcommand("metrics", "compute quality indicators for front CSVs");
    metrics->add_option("--front", front_path, "solution set CSV")->required();
    metrics->add_option("--reference", reference_path, "reference front CSV");
    metrics->add_option("--ref-point", ref_point_text, "hypervolume reference point, e.g. 0,0");
    metrics->add_option("--metric", metric_names, "metric name (repeatable)")->required();
    metrics->add_option("--coverage-eps", coverage_eps, "epsilon for coverage_ratio");
    metrics->add_option("--eum-samples", eum_samples, "utility samples for eum/mul");
    metrics->add_option("--eum-seed", eum_seed, "utility sample seed for eum/mul");
    metrics->add_option("-o,--output", metrics_out, "write the report JSON here instead of stdout");

    std::vector<std::string> plot_inputs;
    std::string plot_out;
    CLI::App* plot = app.add_subcommand("plot", "render CSVs as an SVG chart");
    plot->add_option("csv", plot_inputs, "input CSVs")->required();
    plot->add_option("-o,--output", plot_out, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            const morl::ExperimentConfig cfg =
                morl::load_experiment_config(config_path, seed_from_env());
            const morl::RunArtifacts art = morl::run_experiment(cfg);
            std::cout << "wrote " << art.files.size() << " artifacts to " << cfg.output_dir << "\n";
        } else if (metrics->parsed()) {
            morl::MetricsRequest req;
            req.front_path = front_path;
            if (!reference_path.empty()) req.reference_path = reference_path;
            if (!ref_point_text.empty()) req.ref_point = parse_point(ref_point_text);
            req.metrics = metric_names;
            req.coverage_eps = coverage_eps;
            req.eum_samples = eum_samples;
            req.eum_seed = eum_seed;
            const nlohmann::json report = morl::compute_metrics(req);
            if (metrics_out.empty()) {
                std::cout << report.dump(2) << "\n";
            } else {
                std::ofstream out(metrics_out, std::ios::binary);
                out << report.dump(2) << "\n";
            }
        } else if (plot->parsed()) {
            morl::plot_csvs(plot_inputs, plot_out);
        }
    } catch (const morl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
