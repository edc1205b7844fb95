#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "streamlabel/config.hpp"
#include "streamlabel/ledger.hpp"
#include "streamlabel/policies.hpp"
#include "streamlabel/streams.hpp"

namespace streamlabel {

struct RoundLog {
    RoundRecord record;
    std::string x_repr;
    double uncertainty = 0.0;
    double threshold = 0.0;
};

struct TrialResult {
    std::uint64_t seed = 0;
    std::vector<RoundLog> rounds;
    std::size_t final_labels = 0;
    std::optional<std::string> error;  // set when the trial aborted early

    bool ok() const noexcept { return !error.has_value(); }
    std::vector<double> cumulative_loss() const;
    std::vector<double> average_loss() const;   // L_t / t
    std::vector<double> average_error() const;  // (1/t) sum_{s<=t} |f(x_s) - p_s|
    std::vector<double> label_counts() const;   // N_t
};

// Harness-side view of one stream. `label` and `truth` see the raw arrival;
// `to_policy` builds what the policy is allowed to see.
struct StreamHooks {
    std::function<double(const Arrival&)> label;
    std::function<double(const Arrival&)> truth;
    std::function<Arrival(const Arrival&)> to_policy;
    std::function<std::string(const Arrival&)> describe;
};

// Runs a policy over a fixed arrival list. Exceptions from the policy are
// caught and stored in the result's error field.
TrialResult run_policy_on_stream(Policy& policy, const std::vector<Arrival>& arrivals,
                                 double labeling_cost, const StreamHooks& hooks);

// Builds task, arrivals, policy and noise from the trial seed's named substreams.
TrialResult run_trial(const ExperimentConfig& config, std::uint64_t seed);

// One result per seed, in seed order. Trials run concurrently up to the
// STREAMLABEL_THREADS limit (0 or unset: hardware concurrency).
std::vector<TrialResult> run_experiment(const ExperimentConfig& config);

std::size_t worker_count(std::size_t jobs);

struct Band {
    std::vector<double> mean;
    std::vector<double> half_width;  // 1.96 * sample sd / sqrt(n)
};

// Pointwise mean and 95% band. Throws std::invalid_argument on no curves or
// unequal lengths.
Band aggregate(const std::vector<std::vector<double>>& curves);

struct Summary {
    Band avg_loss;
    Band avg_error;
    std::vector<double> mean_labels;
    std::size_t trials = 0;  // successful trials that were aggregated
};

// Aggregates the trials without an error. Throws if none succeeded.
Summary summarize(const std::vector<TrialResult>& trials);

// Least-squares slope of log y against log x over the points with
// lo <= x <= hi (x is the 1-based index into y).
double loglog_slope(const std::vector<double>& y, std::size_t lo, std::size_t hi);

}  // namespace streamlabel
