#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "streamlabel/kernels.hpp"

namespace streamlabel {

struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dimension() const noexcept { return lower.size(); }
    bool contains(std::span<const double> x) const noexcept;
    bool contains(const Box& inner) const noexcept;
    void validate() const;

    static Box unit(std::size_t dimension);
};

// Maps x from `box` onto [0,1]^d.
Point normalize_to_unit(const Box& box, std::span<const double> x);

// ---- arrival patterns -------------------------------------------------------

struct UniformDiscrete {
    std::size_t num_types = 0;
};

// ceil(heavy_fraction * K) leading types share heavy_mass of the arrivals.
struct LopsidedDiscrete {
    std::size_t num_types = 0;
    double heavy_fraction = 0.2;
    double heavy_mass = 0.8;

    std::size_t heavy_count() const noexcept;
};

struct CustomDiscrete {
    std::vector<double> weights;
};

struct UniformBox {
    Box bounds;
};

// heavy_mass of the points land uniformly in heavy_region, the rest uniformly
// in bounds outside it.
struct LopsidedBox {
    Box bounds;
    Box heavy_region;
    double heavy_mass = 0.8;
};

struct Replay {
    std::vector<Point> points;
};

using ArrivalPattern =
    std::variant<UniformDiscrete, LopsidedDiscrete, CustomDiscrete, UniformBox, LopsidedBox, Replay>;

void validate(const ArrivalPattern& pattern);
bool is_discrete(const ArrivalPattern& pattern) noexcept;

// One arrival. Discrete patterns set `index` to the type; box patterns set
// `point`; Replay sets both (index = position in the replay list).
struct Arrival {
    std::size_t index = 0;
    Point point;
};

class ArrivalStream {
public:
    explicit ArrivalStream(ArrivalPattern pattern);

    // std::nullopt once a Replay pattern is exhausted; other patterns never end.
    std::optional<Arrival> next(std::mt19937_64& rng);

    const ArrivalPattern& pattern() const noexcept { return pattern_; }

private:
    ArrivalPattern pattern_;
    std::size_t cursor_ = 0;
    std::optional<std::discrete_distribution<std::size_t>> custom_;
};

// ---- ground-truth tasks -----------------------------------------------------

struct DiscreteGaussian {
    std::vector<double> means;
    double noise_sigma = 0.1;
};

struct ContinuousFunction {
    std::string name;
    std::function<double(std::span<const double>)> f;
    double noise_sigma = 0.0;
    Box bounds;
};

struct CsvReplay {
    std::vector<Point> points;
    std::vector<double> labels;  // noiseless values as stored in the file
    double noise_sigma = 0.0;
    std::vector<std::string> feature_names;
};

using GroundTruthTask = std::variant<DiscreteGaussian, ContinuousFunction, CsvReplay>;

// mu_k ~ Uniform[0,1] for k < num_types.
DiscreteGaussian make_discrete_gaussian(std::size_t num_types, double noise_sigma,
                                        std::mt19937_64& rng);

// Standard Branin on [-5,10] x [0,15]; global minimum 0.397887.
double branin(std::span<const double> x);
// Six-dimensional Hartmann on [0,1]^6; global minimum -3.32237.
double hartmann6(std::span<const double> x);

ContinuousFunction make_branin_task(double noise_sigma);
ContinuousFunction make_hartmann6_task(double noise_sigma);

// Noiseless value at the arrival. Harness-only: never passed to a policy.
double true_value(const GroundTruthTask& task, const Arrival& x);

// true_value plus independent N(0, sigma^2) noise.
double query_label(const GroundTruthTask& task, const Arrival& x, std::mt19937_64& rng);

// Input dimension (0 for discrete tasks).
std::size_t task_dimension(const GroundTruthTask& task) noexcept;

// Box used to normalize inputs to [0,1]^d before they reach a policy.
Box task_bounds(const GroundTruthTask& task);

// ---- CSV streaming ----------------------------------------------------------

class CsvParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CsvStream {
    CsvReplay task;
    Replay pattern;
};

struct CsvStreamOptions {
    std::vector<std::string> feature_columns;
    std::string label_column;
    bool normalize_to_unit_box = true;
    double noise_sigma = 0.0;
    std::uint64_t shuffle_seed = 0;
    bool shuffle = true;
};

// Reads a header-first, comma-separated numeric file. Rows are optionally
// min-max normalized per feature, then permuted by shuffle_seed.
CsvStream load_csv_stream(const std::filesystem::path& path, const CsvStreamOptions& options);

}  // namespace streamlabel
