#include "streamlabel/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace streamlabel {

double TypeStats::mean_estimate() const noexcept {
    return labels > 0 ? label_sum / static_cast<double>(labels) : 0.0;
}

double confidence_radius(const TypeStats& stats, std::size_t total_labels, double delta,
                         double sigma) {
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("confidence delta must lie in (0, 1]");
    }
    if (!(sigma >= 0.0)) {
        throw std::invalid_argument("sigma must be >= 0");
    }
    if (stats.labels == 0) return std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(std::max<std::size_t>(total_labels, 1));
    // log(2 n^3 / delta) written as a sum to keep n^3 from overflowing.
    const double log_term = std::log(2.0 / delta) + 3.0 * std::log(n);
    return std::sqrt(2.0 * sigma * sigma * log_term / static_cast<double>(stats.labels));
}

double threshold_discrete(double cost, std::size_t arrivals, double lambda) {
    if (!(cost > 0.0) || arrivals == 0 || !(lambda > 0.0)) {
        throw std::invalid_argument("threshold_discrete: cost, arrivals and lambda must be positive");
    }
    return lambda * std::cbrt(cost / static_cast<double>(arrivals));
}

DiscretePolicy::DiscretePolicy(DiscreteParams params) : params_(params) {
    if (params_.num_types == 0) throw std::invalid_argument("num_types must be positive");
    if (!(params_.cost > 0.0)) throw std::invalid_argument("labeling cost must be positive");
    if (!(params_.delta > 0.0 && params_.delta <= 1.0)) {
        throw std::invalid_argument("confidence delta must lie in (0, 1]");
    }
    if (!(params_.sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
    if (!(params_.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    stats_.resize(params_.num_types);
}

DiscreteStep DiscretePolicy::step(std::size_t type, const LabelOracle& oracle) {
    if (type >= params_.num_types) {
        throw std::invalid_argument("type index " + std::to_string(type) + " out of range [0, " +
                                    std::to_string(params_.num_types) + ")");
    }
    auto& s = stats_[type];
    ++s.arrivals;
    ++rounds_;

    DiscreteStep out;
    // The log term uses the label count from before this round.
    out.radius = confidence_radius(s, total_labels_, params_.delta, params_.sigma);
    out.threshold = threshold_discrete(params_.cost, s.arrivals, params_.lambda);
    out.labeled = out.radius > out.threshold;
    if (out.labeled) {
        const double y = oracle();
        s.label_sum += y;
        ++s.labels;
        ++total_labels_;
    }
    out.prediction = s.mean_estimate();
    return out;
}

}  // namespace streamlabel
