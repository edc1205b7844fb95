#include "streamlabel/gp_labeler.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace streamlabel {

double threshold_gp(KernelFamily family, double cost, std::size_t t, std::size_t dimension,
                    double sigma, double lambda) {
    if (!(cost > 0.0) || t == 0 || dimension == 0 || !(sigma > 0.0) || !(lambda > 0.0)) {
        throw std::invalid_argument("threshold_gp: all arguments must be positive");
    }
    const double d = static_cast<double>(dimension);
    const double exponent = family == KernelFamily::SquaredExponential ? d + 3.0 : 2.0 * d + 3.0;
    return lambda * std::sqrt(2.0 * sigma * sigma) *
           std::pow(cost / static_cast<double>(t), 1.0 / exponent);
}

std::vector<double> default_lengthscale_grid() { return {0.05, 0.1, 0.2, 0.3, 0.5, 1.0}; }

std::size_t GpModelConfig::resolved_init_count() const noexcept {
    return init_label_count.value_or(5 * kernel.dimension);
}

void GpModelConfig::validate() const {
    kernel.validate();
    if (!(noise_sigma > 0.0) || !std::isfinite(noise_sigma)) {
        throw std::invalid_argument("GP noise sigma must be positive and finite");
    }
    for (double l : lengthscale_grid) {
        if (!(l > 0.0)) throw std::invalid_argument("lengthscale grid entries must be positive");
    }
}

GpStreamModel::GpStreamModel(GpModelConfig config)
    : config_((config.validate(), std::move(config))),
      init_count_(config_.resolved_init_count()),
      posterior_(config_.kernel, config_.noise_sigma * config_.noise_sigma) {}

Prediction GpStreamModel::predict(std::span<const double> x) const {
    const Prediction p = posterior_.predict(x);
    return {offset_ + scale_ * p.mean, scale_ * p.stddev};
}

void GpStreamModel::observe(std::span<const double> x, double y) {
    ++observed_;
    if (tuned_ || (init_count_ == 0 && !config_.standardize_labels)) {
        xs_.emplace_back(x.begin(), x.end());
        ys_.push_back(y);
        posterior_.update(x, (y - offset_) / scale_);
        return;
    }
    xs_.emplace_back(x.begin(), x.end());
    ys_.push_back(y);
    if (observed_ >= init_count_) {
        // End of the forced phase: fix the label transform, tune once.
        rebuild();
        if (!config_.lengthscale_grid.empty() && init_count_ > 0) {
            std::vector<double> z(ys_.size());
            for (std::size_t i = 0; i < ys_.size(); ++i) z[i] = (ys_[i] - offset_) / scale_;
            config_.kernel = tune_hyperparams(xs_, z, posterior_.noise_variance(),
                                              config_.lengthscale_grid, config_.kernel);
            rebuild();
        }
        tuned_ = true;
        return;
    }
    rebuild();
}

void GpStreamModel::rebuild() {
    if (config_.standardize_labels && !ys_.empty()) {
        const double n = static_cast<double>(ys_.size());
        offset_ = std::accumulate(ys_.begin(), ys_.end(), 0.0) / n;
        double ss = 0.0;
        for (double y : ys_) ss += (y - offset_) * (y - offset_);
        const double sd = ys_.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        scale_ = sd > 0.0 ? sd : 1.0;
    }
    std::vector<double> z(ys_.size());
    for (std::size_t i = 0; i < ys_.size(); ++i) z[i] = (ys_[i] - offset_) / scale_;
    const double noise_var = (config_.noise_sigma / scale_) * (config_.noise_sigma / scale_);
    posterior_ = GpPosterior::from_data(config_.kernel, noise_var, xs_, z);
}

GpLabeler::GpLabeler(GpLabelerConfig config)
    : config_(std::move(config)), model_(config_.model) {
    if (!(config_.cost > 0.0)) throw std::invalid_argument("labeling cost must be positive");
    if (!(config_.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
}

GpStep GpLabeler::step(std::span<const double> x, const LabelOracle& oracle) {
    ++round_;
    GpStep out;
    const auto& mc = config_.model;
    out.stddev = model_.predict(x).stddev;
    out.threshold = threshold_gp(mc.kernel.family, config_.cost, round_, mc.kernel.dimension,
                                 mc.noise_sigma, config_.lambda);
    out.forced = model_.in_initialization();
    out.labeled = out.forced || out.stddev > out.threshold;
    if (out.labeled) {
        model_.observe(x, oracle());
        ++labels_;
    }
    out.prediction = model_.predict(x).mean;
    return out;
}

}  // namespace streamlabel
