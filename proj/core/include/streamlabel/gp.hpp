#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "streamlabel/kernels.hpp"

namespace streamlabel {

// Raised when the regularized Gram matrix cannot be factorized even after jitter.
class NumericalSingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Prediction {
    double mean = 0.0;
    double stddev = 1.0;
};

inline constexpr double kCholeskyJitter = 1e-10;
inline constexpr double kPivotFloor = 1e-12;
inline constexpr double kVarianceFloor = 1e-12;

// Zero-mean GP posterior with a lower Cholesky factor L of (K + sigma^2 I).
//
// The factor grows by one bordered row per observation, so an update and a
// prediction are both O(n^2). Alongside L we keep w = L^{-1} y, which turns the
// posterior mean into a single dot product:
//   v = L^{-1} k(x),   mean = v . w,   var = k(x, x) - v . v
class GpPosterior {
public:
    GpPosterior(KernelSpec kernel, double noise_variance);

    // Builds the posterior with a single dense factorization.
    static GpPosterior from_data(KernelSpec kernel, double noise_variance,
                                 std::span<const Point> inputs, std::span<const double> labels);

    Prediction predict(std::span<const double> x) const;

    // Appends (x, y). Falls back to a full jittered refactorization when the new
    // pivot underflows; throws NumericalSingularityError if that also fails.
    void update(std::span<const double> x, double y);

    std::size_t size() const noexcept { return inputs_.size(); }
    const KernelSpec& kernel() const noexcept { return kernel_; }
    double noise_variance() const noexcept { return noise_variance_; }
    double jitter() const noexcept { return jitter_; }
    const std::vector<Point>& inputs() const noexcept { return inputs_; }
    const std::vector<double>& labels() const noexcept { return labels_; }

    // Copy of the active n x n lower factor.
    Eigen::MatrixXd factor() const;
    // K + (sigma^2 + jitter) I over the stored inputs.
    Eigen::MatrixXd regularized_gram() const;

private:
    void check_dimension(std::span<const double> x) const;
    Eigen::VectorXd cross_kernel(std::span<const double> x) const;
    void reserve(std::size_t n);
    void refactorize(double jitter);

    KernelSpec kernel_;
    double noise_variance_;
    double jitter_ = 0.0;
    std::vector<Point> inputs_;
    std::vector<double> labels_;
    Eigen::MatrixXd chol_;       // top-left size() x size() block is live
    Eigen::VectorXd whitened_;   // L^{-1} y, first size() entries live
};

// Regularized Gram matrix K + sigma^2 I for a point set.
Eigen::MatrixXd regularized_gram(const KernelSpec& kernel, double noise_variance,
                                 std::span<const Point> inputs);

// -1/2 y^T (K + s^2 I)^{-1} y - 1/2 log det(K + s^2 I) - n/2 log(2 pi)
double log_marginal_likelihood(std::span<const Point> inputs, std::span<const double> labels,
                               const KernelSpec& kernel, double noise_variance);

// Returns `base` with the lengthscale from `grid` that maximizes the log
// marginal likelihood. Equal likelihoods resolve to the smaller lengthscale.
KernelSpec tune_hyperparams(std::span<const Point> inputs, std::span<const double> labels,
                            double noise_variance, std::span<const double> lengthscale_grid,
                            const KernelSpec& base);

// Upper bound on the posterior variance anywhere inside a cell of L2 diameter
// D that holds s labeled points (noise variance eta^2):
//   SE:      D^2 / l^2 + eta^2 / s
//   Matern:  2 L_M D + eta^2 / s
// +inf when s == 0.
double posterior_variance_bound(const KernelSpec& kernel, double noise_variance,
                                double cell_diameter, std::size_t points_in_cell);

// Whether the posterior variance at `probe` stays under the cell bound (+1e-8).
bool variance_bound_check(const GpPosterior& gp, double cell_diameter,
                          std::size_t points_in_cell, std::span<const double> probe);

}  // namespace streamlabel
