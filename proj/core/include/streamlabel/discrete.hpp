#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace streamlabel {

// Draws one noisy label for the current input. Only invoked when a policy
// decides to pay for it.
using LabelOracle = std::function<double()>;

// Per-type counters for the K-type setting.
struct TypeStats {
    std::size_t arrivals = 0;  // M_{t,k}
    std::size_t labels = 0;    // N_{t,k}
    double label_sum = 0.0;

    bool has_estimate() const noexcept { return labels > 0; }
    // Sample mean of the labels; 0 before the first label.
    double mean_estimate() const noexcept;
};

// Sub-Gaussian confidence half-width around a type's sample mean:
//   sqrt(2 sigma^2 log(2 max(N,1)^3 / delta) / labels),  +inf when labels == 0.
// `total_labels` is the label count over all types (N) entering the log.
// delta must lie in (0, 1], sigma >= 0.
double confidence_radius(const TypeStats& stats, std::size_t total_labels, double delta,
                         double sigma);

// lambda * B^{1/3} * M^{-1/3}
double threshold_discrete(double cost, std::size_t arrivals, double lambda);

struct DiscreteParams {
    std::size_t num_types = 0;
    double cost = 1.0;
    double delta = 0.05;
    double sigma = 1.0;  // known sub-Gaussian parameter of the labels
    double lambda = 1.0;
};

struct DiscreteStep {
    bool labeled = false;
    double prediction = 0.0;
    double radius = 0.0;     // uncertainty before the decision
    double threshold = 0.0;
};

// Threshold labeling over K discrete types: label x_t when the confidence
// radius of its sample mean strictly exceeds lambda B^{1/3} M^{-1/3}, then
// predict with the sample mean. Types are 0-based.
class DiscretePolicy {
public:
    explicit DiscretePolicy(DiscreteParams params);

    DiscreteStep step(std::size_t type, const LabelOracle& oracle);

    const DiscreteParams& params() const noexcept { return params_; }
    const std::vector<TypeStats>& type_stats() const noexcept { return stats_; }
    std::size_t total_labels() const noexcept { return total_labels_; }
    std::size_t rounds() const noexcept { return rounds_; }

private:
    DiscreteParams params_;
    std::vector<TypeStats> stats_;
    std::size_t total_labels_ = 0;
    std::size_t rounds_ = 0;
};

}  // namespace streamlabel
