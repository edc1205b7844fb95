#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "streamlabel/kernels.hpp"
#include "streamlabel/policies.hpp"
#include "streamlabel/streams.hpp"

namespace streamlabel {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TaskKind { DiscreteGaussian, Branin, Hartmann6, Csv };
enum class ArrivalKind { Uniform, Lopsided, Custom, Replay };

struct TaskSpec {
    TaskKind kind = TaskKind::DiscreteGaussian;
    std::size_t num_types = 10;
    std::optional<double> noise_sigma;  // defaults to the experiment's sigma
    // csv
    std::filesystem::path csv_path;
    std::vector<std::string> feature_columns;
    std::string label_column;
    bool normalize = true;
    // Fixed row order when set; otherwise each trial shuffles from its own seed.
    std::optional<std::uint64_t> shuffle_seed;
};

struct ArrivalSpec {
    ArrivalKind kind = ArrivalKind::Uniform;
    double heavy_fraction = 0.2;
    double heavy_mass = 0.8;
    // Native task coordinates. Default: first 20% of the first coordinate.
    std::optional<Box> heavy_region;
    std::vector<double> weights;  // custom
};

struct PolicySpec {
    PolicyKind kind = PolicyKind::Algorithm1;
    double label_probability = 0.5;
    KernelFamily kernel = KernelFamily::SquaredExponential;
    double initial_lengthscale = 0.3;
    std::optional<std::size_t> init_label_count;  // default 5 d
    std::vector<double> lengthscale_grid = default_lengthscale_grid();
    bool standardize_labels = true;
};

struct ExperimentConfig {
    std::string name = "experiment";
    TaskSpec task;
    ArrivalSpec arrival;
    PolicySpec policy;
    double cost_B = 10.0;
    double lambda = 1.0;
    double sigma = 0.1;
    double delta = 0.05;
    std::size_t horizon_T = 1000;
    std::vector<std::uint64_t> trial_seeds{1};
    std::filesystem::path output_dir = "out";

    // Throws ConfigError.
    void validate() const;
    double task_noise_sigma() const noexcept { return task.noise_sigma.value_or(sigma); }
    bool discrete_task() const noexcept { return task.kind == TaskKind::DiscreteGaussian; }
};

// Seeds base, base + 1, ..., base + n - 1.
std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t n);

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
// Canonical JSON form; parse_config(to_json(c)) reproduces c.
std::string to_json(const ExperimentConfig& config);

std::string_view to_string(TaskKind kind) noexcept;
std::string_view to_string(ArrivalKind kind) noexcept;

}  // namespace streamlabel
