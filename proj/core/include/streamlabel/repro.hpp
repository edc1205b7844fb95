#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "streamlabel/config.hpp"
#include "streamlabel/harness.hpp"

namespace streamlabel {

// A set of methods drawn on one chart, e.g. all policies for K=10, B=10.
struct ReproPanel {
    std::string name;
    std::vector<ExperimentConfig> methods;
};

struct ReproOptions {
    std::optional<std::filesystem::path> data;           // real-data figures
    std::optional<std::filesystem::path> data_lopsided;  // fig4 lopsided subset
    std::optional<std::size_t> trials;
    std::optional<std::size_t> horizon;  // shortens every run (smoke tests)
    std::uint64_t seed_base = 1;
};

// fig2, fig3, fig4, fig5, ablation-discrete, ablation-branin
std::vector<std::string> repro_figure_ids();

// Throws ConfigError for an unknown id or a missing dataset path.
std::vector<ReproPanel> repro_panels(std::string_view figure_id, const ReproOptions& options);

// One panel sweeping lambda over `grid`, everything else from `base`.
ReproPanel lambda_ablation(const ExperimentConfig& base, const std::vector<double>& grid);

struct PanelOutcome {
    std::string panel;
    std::string method;
    std::vector<TrialResult> results;
};

// Runs each method, writes its outputs to dir/<panel>/<method>/ and an overlay
// of all methods to dir/<panel>/loss.svg and error.svg.
std::vector<PanelOutcome> run_panels(const std::vector<ReproPanel>& panels, const std::filesystem::path& dir);

}  // namespace streamlabel
