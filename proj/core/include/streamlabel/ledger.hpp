#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace streamlabel {

// One round of the stream as seen by the harness. true_value is never handed
// to a policy; it exists only so the harness can score predictions.
struct RoundRecord {
    std::size_t t = 0;  // 1-based
    bool labeled = false;
    double prediction = 0.0;
    double true_value = 0.0;
    std::optional<double> observed_label;
    double prediction_error = 0.0;
    double cumulative_loss = 0.0;
};

// Running total of labeling cost plus absolute prediction error:
//   L_t = B * N_t + sum_{s<=t} |f(x_s) - p_s|
class LossLedger {
public:
    explicit LossLedger(double labeling_cost);

    // Returns the cumulative loss after this round.
    // Throws std::invalid_argument on a negative or NaN error.
    double record_round(bool labeled, double prediction_error);

    double labeling_cost() const noexcept { return cost_; }
    std::size_t label_count() const noexcept { return labels_; }
    std::size_t rounds() const noexcept { return rounds_; }
    double error_sum() const noexcept { return error_sum_; }
    double total_loss() const noexcept;

private:
    double cost_;
    std::size_t labels_ = 0;
    std::size_t rounds_ = 0;
    double error_sum_ = 0.0;
};

// Builds a fully populated record and advances the ledger.
RoundRecord record_round(LossLedger& ledger, std::size_t t, bool labeled, double prediction,
                         double true_value, std::optional<double> observed_label);

// Recomputes L_T from a record list alone.
double replay_total_loss(double labeling_cost, std::span<const RoundRecord> records);

// L_t / t for every prefix, recomputed from the records.
std::vector<double> average_loss_curve(std::span<const RoundRecord> records);

}  // namespace streamlabel
