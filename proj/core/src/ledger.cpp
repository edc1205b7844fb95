#include "streamlabel/ledger.hpp"

#include <cmath>
#include <stdexcept>

namespace streamlabel {

LossLedger::LossLedger(double labeling_cost) : cost_(labeling_cost) {
    if (!(labeling_cost >= 0.0) || !std::isfinite(labeling_cost)) {
        throw std::invalid_argument("labeling cost must be finite and >= 0");
    }
}

double LossLedger::record_round(bool labeled, double prediction_error) {
    if (!(prediction_error >= 0.0)) {
        throw std::invalid_argument("prediction error must be >= 0");
    }
    ++rounds_;
    if (labeled) ++labels_;
    error_sum_ += prediction_error;
    return total_loss();
}

double LossLedger::total_loss() const noexcept {
    return cost_ * static_cast<double>(labels_) + error_sum_;
}

RoundRecord record_round(LossLedger& ledger, std::size_t t, bool labeled, double prediction,
                         double true_value, std::optional<double> observed_label) {
    if (labeled != observed_label.has_value()) {
        throw std::invalid_argument("observed label must be present iff the round was labeled");
    }
    RoundRecord rec;
    rec.t = t;
    rec.labeled = labeled;
    rec.prediction = prediction;
    rec.true_value = true_value;
    rec.observed_label = observed_label;
    rec.prediction_error = std::abs(true_value - prediction);
    rec.cumulative_loss = ledger.record_round(labeled, rec.prediction_error);
    return rec;
}

double replay_total_loss(double labeling_cost, std::span<const RoundRecord> records) {
    std::size_t labels = 0;
    double errors = 0.0;
    for (const auto& r : records) {
        if (r.labeled) ++labels;
        errors += r.prediction_error;
    }
    return labeling_cost * static_cast<double>(labels) + errors;
}

std::vector<double> average_loss_curve(std::span<const RoundRecord> records) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        out.push_back(r.cumulative_loss / static_cast<double>(r.t));
    }
    return out;
}

}  // namespace streamlabel
