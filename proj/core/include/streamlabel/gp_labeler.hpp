#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "streamlabel/discrete.hpp"
#include "streamlabel/gp.hpp"
#include "streamlabel/kernels.hpp"

namespace streamlabel {

// tau(t) = lambda * sqrt(2 sigma^2) * B^{1/e} * t^{-1/e}
// with e = d + 3 for the SE kernel and e = 2d + 3 for Matern kernels.
double threshold_gp(KernelFamily family, double cost, std::size_t t, std::size_t dimension,
                    double sigma, double lambda);

std::vector<double> default_lengthscale_grid();

struct GpModelConfig {
    KernelSpec kernel;                 // starting kernel; lengthscale replaced after tuning
    double noise_sigma = 1.0;          // label noise scale in label units
    std::optional<std::size_t> init_label_count;  // default 5 d
    std::vector<double> lengthscale_grid = default_lengthscale_grid();
    // Fit the GP to (y - offset) / scale with offset/scale taken from the
    // initialization labels. Predictions and stddevs are reported in label units.
    bool standardize_labels = true;

    std::size_t resolved_init_count() const noexcept;
    void validate() const;
};

// GP predictor shared by the threshold labeler and the GP-side baselines:
// forced labels for the first init rounds, one lengthscale tuning pass when
// that phase ends, then plain incremental conditioning.
class GpStreamModel {
public:
    explicit GpStreamModel(GpModelConfig config);

    // Rounds still inside the forced-label phase.
    bool in_initialization() const noexcept { return observed_ < init_count_; }

    // Posterior in label units.
    Prediction predict(std::span<const double> x) const;

    void observe(std::span<const double> x, double y);

    const GpModelConfig& config() const noexcept { return config_; }
    const GpPosterior& posterior() const noexcept { return posterior_; }
    double label_offset() const noexcept { return offset_; }
    double label_scale() const noexcept { return scale_; }
    bool tuned() const noexcept { return tuned_; }

private:
    void rebuild();

    GpModelConfig config_;
    std::size_t init_count_;
    std::size_t observed_ = 0;
    double offset_ = 0.0;
    double scale_ = 1.0;
    bool tuned_ = false;
    std::vector<Point> xs_;
    std::vector<double> ys_;
    GpPosterior posterior_;
};

struct GpLabelerConfig {
    double cost = 1.0;
    double lambda = 1.0;
    GpModelConfig model;
};

struct GpStep {
    bool labeled = false;
    bool forced = false;      // initialization round
    double prediction = 0.0;
    double stddev = 0.0;      // sigma_{t-1}(x_t), label units
    double threshold = 0.0;   // tau(t)
};

// Label x_t when the posterior stddev strictly exceeds tau(t); predict with the
// posterior mean after any update. t counts every round, initialization included.
class GpLabeler {
public:
    explicit GpLabeler(GpLabelerConfig config);

    GpStep step(std::span<const double> x, const LabelOracle& oracle);

    std::size_t round() const noexcept { return round_; }
    std::size_t label_count() const noexcept { return labels_; }
    const GpStreamModel& model() const noexcept { return model_; }
    const GpLabelerConfig& config() const noexcept { return config_; }

private:
    GpLabelerConfig config_;
    GpStreamModel model_;
    std::size_t round_ = 0;
    std::size_t labels_ = 0;
};

}  // namespace streamlabel
