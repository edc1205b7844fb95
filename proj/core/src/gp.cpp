#include "streamlabel/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace streamlabel {

GpPosterior::GpPosterior(KernelSpec kernel, double noise_variance)
    : kernel_(kernel), noise_variance_(noise_variance) {
    kernel_.validate();
    if (!(noise_variance_ > 0.0) || !std::isfinite(noise_variance_)) {
        throw std::invalid_argument("GP noise variance must be positive and finite");
    }
}

GpPosterior GpPosterior::from_data(KernelSpec kernel, double noise_variance,
                                   std::span<const Point> inputs, std::span<const double> labels) {
    if (inputs.size() != labels.size()) {
        throw std::invalid_argument("inputs and labels differ in length");
    }
    GpPosterior gp(kernel, noise_variance);
    for (const auto& x : inputs) gp.check_dimension(x);
    gp.inputs_.assign(inputs.begin(), inputs.end());
    gp.labels_.assign(labels.begin(), labels.end());
    gp.refactorize(0.0);
    return gp;
}

void GpPosterior::check_dimension(std::span<const double> x) const {
    if (x.size() != kernel_.dimension) {
        throw std::invalid_argument("GP point has dimension " + std::to_string(x.size()) +
                                    ", expected " + std::to_string(kernel_.dimension));
    }
}

Eigen::VectorXd GpPosterior::cross_kernel(std::span<const double> x) const {
    Eigen::VectorXd k(static_cast<Eigen::Index>(inputs_.size()));
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
        k[static_cast<Eigen::Index>(i)] = kernel_eval(kernel_, x, inputs_[i]);
    }
    return k;
}

void GpPosterior::reserve(std::size_t n) {
    const auto cap = static_cast<std::size_t>(chol_.rows());
    if (n <= cap) return;
    const auto new_cap = static_cast<Eigen::Index>(std::max<std::size_t>(n, std::max<std::size_t>(16, 2 * cap)));
    chol_.conservativeResize(new_cap, new_cap);
    whitened_.conservativeResize(new_cap);
}

Prediction GpPosterior::predict(std::span<const double> x) const {
    check_dimension(x);
    const double prior = kernel_eval(kernel_, x, x);
    const auto n = static_cast<Eigen::Index>(inputs_.size());
    if (n == 0) return {0.0, std::sqrt(prior)};
    const Eigen::VectorXd v =
        chol_.topLeftCorner(n, n).triangularView<Eigen::Lower>().solve(cross_kernel(x));
    const double mean = v.dot(whitened_.head(n));
    const double var = std::max(prior - v.squaredNorm(), kVarianceFloor);
    return {mean, std::sqrt(var)};
}

void GpPosterior::update(std::span<const double> x, double y) {
    check_dimension(x);
    const auto n = static_cast<Eigen::Index>(inputs_.size());
    reserve(inputs_.size() + 1);

    const Eigen::VectorXd k = cross_kernel(x);
    Eigen::VectorXd row = n > 0
        ? Eigen::VectorXd(chol_.topLeftCorner(n, n).triangularView<Eigen::Lower>().solve(k))
        : Eigen::VectorXd();
    const double pivot = kernel_eval(kernel_, x, x) + noise_variance_ + jitter_ - row.squaredNorm();

    inputs_.emplace_back(x.begin(), x.end());
    labels_.push_back(y);

    if (!(pivot >= kPivotFloor)) {
        refactorize(std::max(jitter_, kCholeskyJitter));
        return;
    }
    const double diag = std::sqrt(pivot);
    chol_.block(n, 0, 1, n) = row.transpose();
    chol_.block(0, n, n, 1).setZero();
    chol_(n, n) = diag;
    whitened_[n] = (y - (n > 0 ? row.dot(whitened_.head(n)) : 0.0)) / diag;
}

void GpPosterior::refactorize(double jitter) {
    const auto n = static_cast<Eigen::Index>(inputs_.size());
    reserve(inputs_.size());
    Eigen::MatrixXd gram = streamlabel::regularized_gram(kernel_, noise_variance_, inputs_);
    gram.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success && jitter < kCholeskyJitter) {
        jitter = kCholeskyJitter;
        gram.diagonal().array() += jitter;
        llt.compute(gram);
    }
    if (llt.info() != Eigen::Success) {
        throw NumericalSingularityError("GP Gram matrix is numerically singular at n = " +
                                        std::to_string(n));
    }
    jitter_ = jitter;
    chol_.topLeftCorner(n, n) = llt.matrixL();
    const Eigen::Map<const Eigen::VectorXd> y(labels_.data(), n);
    whitened_.head(n) = chol_.topLeftCorner(n, n).triangularView<Eigen::Lower>().solve(y);
}

Eigen::MatrixXd GpPosterior::factor() const {
    const auto n = static_cast<Eigen::Index>(inputs_.size());
    Eigen::MatrixXd l = chol_.topLeftCorner(n, n);
    return l.triangularView<Eigen::Lower>();
}

Eigen::MatrixXd GpPosterior::regularized_gram() const {
    Eigen::MatrixXd g = streamlabel::regularized_gram(kernel_, noise_variance_, inputs_);
    g.diagonal().array() += jitter_;
    return g;
}

Eigen::MatrixXd regularized_gram(const KernelSpec& kernel, double noise_variance,
                                 std::span<const Point> inputs) {
    const auto n = static_cast<Eigen::Index>(inputs.size());
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        g(i, i) = kernel_eval(kernel, inputs[i], inputs[i]) + noise_variance;
        for (Eigen::Index j = 0; j < i; ++j) {
            g(i, j) = g(j, i) = kernel_eval(kernel, inputs[i], inputs[j]);
        }
    }
    return g;
}

double log_marginal_likelihood(std::span<const Point> inputs, std::span<const double> labels,
                               const KernelSpec& kernel, double noise_variance) {
    if (inputs.size() != labels.size()) {
        throw std::invalid_argument("inputs and labels differ in length");
    }
    const auto n = static_cast<Eigen::Index>(inputs.size());
    if (n == 0) return 0.0;
    Eigen::MatrixXd gram = regularized_gram(kernel, noise_variance, inputs);
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        gram.diagonal().array() += kCholeskyJitter;
        llt.compute(gram);
        if (llt.info() != Eigen::Success) {
            throw NumericalSingularityError("Gram matrix singular in log marginal likelihood");
        }
    }
    const Eigen::Map<const Eigen::VectorXd> y(labels.data(), n);
    const Eigen::VectorXd w = llt.matrixL().solve(y);
    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return -0.5 * w.squaredNorm() - 0.5 * log_det -
           0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

KernelSpec tune_hyperparams(std::span<const Point> inputs, std::span<const double> labels,
                            double noise_variance, std::span<const double> lengthscale_grid,
                            const KernelSpec& base) {
    if (lengthscale_grid.empty()) throw std::invalid_argument("lengthscale grid is empty");
    KernelSpec best = base;
    double best_lml = -std::numeric_limits<double>::infinity();
    bool have_best = false;
    for (const double l : lengthscale_grid) {
        if (!(l > 0.0)) throw std::invalid_argument("lengthscale grid entries must be positive");
        KernelSpec candidate = base;
        candidate.lengthscale = l;
        const double lml = log_marginal_likelihood(inputs, labels, candidate, noise_variance);
        const bool better = lml > best_lml || (lml == best_lml && l < best.lengthscale);
        if (!have_best || better) {
            best = candidate;
            best_lml = lml;
            have_best = true;
        }
    }
    return best;
}

double posterior_variance_bound(const KernelSpec& kernel, double noise_variance,
                                 double cell_diameter, std::size_t points_in_cell) {
    if (points_in_cell == 0) return std::numeric_limits<double>::infinity();
    const double averaging = noise_variance / static_cast<double>(points_in_cell);
    if (kernel.family == KernelFamily::SquaredExponential) {
        const double l = kernel.lengthscale;
        return cell_diameter * cell_diameter / (l * l) + averaging;
    }
    return 2.0 * matern_lipschitz_constant(kernel) * cell_diameter + averaging;
}

bool variance_bound_check(const GpPosterior& gp, double cell_diameter,
                          std::size_t points_in_cell, std::span<const double> probe) {
    const double sd = gp.predict(probe).stddev;
    const double bound =
        posterior_variance_bound(gp.kernel(), gp.noise_variance(), cell_diameter, points_in_cell);
    return sd * sd <= bound + 1e-8;
}

}  // namespace streamlabel
