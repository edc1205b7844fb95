#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "streamlabel/config.hpp"
#include "streamlabel/harness.hpp"
#include "streamlabel/outputs.hpp"
#include "streamlabel/repro.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw streamlabel::ConfigError("bad grid value '" + item + "'");
        }
        grid.push_back(v);
    }
    if (grid.empty()) throw streamlabel::ConfigError("empty lambda grid");
    return grid;
}

int report(const std::vector<streamlabel::TrialResult>& results, const std::string& where) {
    int failed = 0;
    for (const auto& r : results) {
        if (!r.ok()) {
            std::cerr << where << ": trial seed " << r.seed << " aborted: " << *r.error << "\n";
            ++failed;
        }
    }
    return failed ? kRuntimeError : 0;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace streamlabel;
    CLI::App app{"Cost-aware streaming label acquisition experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::size_t trials = 0;
    std::uint64_t seed_base = 0;
    auto* run = app.add_subcommand("run", "Run one experiment config");
    run->add_option("--config", config_path, "Experiment JSON")->required();
    run->add_option("--out", out_dir, "Output directory (default: config output_dir)");
    auto* trials_opt = run->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
    auto* seed_opt = run->add_option("--seed-base", seed_base, "First trial seed");

    std::string figure, data, data_lopsided, repro_out = "repro_out";
    std::size_t repro_trials = 0, repro_horizon = 0;
    auto* repro = app.add_subcommand("repro", "Run a canned figure");
    repro->add_option("figure-id", figure, "One of fig2, fig3, fig4, fig5, ablation-discrete, ablation-branin")
        ->required();
    repro->add_option("--out", repro_out, "Output directory");
    repro->add_option("--data", data, "Dataset CSV for fig4/fig5");
    repro->add_option("--data-lopsided", data_lopsided, "Lopsided subset CSV for fig4");
    auto* rtrials = repro->add_option("--trials", repro_trials, "Override trial count")->check(CLI::PositiveNumber);
    auto* rhorizon = repro->add_option("--horizon", repro_horizon, "Override horizon")->check(CLI::PositiveNumber);
    auto* rseed = repro->add_option("--seed-base", seed_base, "First trial seed");

    std::string grid_text, ablate_out;
    auto* ablate = app.add_subcommand("ablate-lambda", "Sweep lambda for one config");
    ablate->add_option("--config", config_path, "Experiment JSON")->required();
    ablate->add_option("--grid", grid_text, "Comma-separated lambda values")->required();
    ablate->add_option("--out", ablate_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*run) {
            ExperimentConfig c = load_config(config_path);
            if (*trials_opt || *seed_opt) {
                const std::size_t n = *trials_opt ? trials : c.trial_seeds.size();
                const std::uint64_t base = *seed_opt ? seed_base : c.trial_seeds.front();
                c.trial_seeds = seed_range(base, n);
            }
            if (!out_dir.empty()) c.output_dir = out_dir;
            const auto results = run_experiment(c);
            emit_outputs(results, c, c.output_dir);
            std::cout << "wrote " << c.output_dir.string() << "\n";
            return report(results, c.name);
        }
        if (*repro) {
            ReproOptions o;
            if (!data.empty()) o.data = data;
            if (!data_lopsided.empty()) o.data_lopsided = data_lopsided;
            if (*rtrials) o.trials = repro_trials;
            if (*rhorizon) o.horizon = repro_horizon;
            if (*rseed) o.seed_base = seed_base;
            const auto panels = repro_panels(figure, o);
            const auto outcomes = run_panels(panels, repro_out);
            int code = 0;
            for (const auto& oc : outcomes) code = std::max(code, report(oc.results, oc.panel + "/" + oc.method));
            std::cout << "wrote " << repro_out << "\n";
            return code;
        }
        if (*ablate) {
            const ExperimentConfig c = load_config(config_path);
            const ReproPanel panel = lambda_ablation(c, parse_grid(grid_text));
            const std::filesystem::path dir = ablate_out.empty() ? c.output_dir : std::filesystem::path(ablate_out);
            const auto outcomes = run_panels({panel}, dir);
            int code = 0;
            for (const auto& oc : outcomes) code = std::max(code, report(oc.results, oc.method));
            std::cout << "wrote " << (dir / panel.name).string() << "\n";
            return code;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const CsvParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kRuntimeError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return 0;
}
