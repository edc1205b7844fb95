#include "streamlabel/policies.hpp"

#include <stdexcept>
#include <string>

namespace streamlabel {

std::string_view to_string(PolicyKind kind) noexcept {
    switch (kind) {
        case PolicyKind::Algorithm1: return "algorithm1";
        case PolicyKind::Algorithm2: return "algorithm2";
        case PolicyKind::NaiveDiscretized: return "naive_discretized";
        case PolicyKind::RandomSelect: return "random_select";
        case PolicyKind::VarUncertainty: return "var_uncertainty";
    }
    return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
    for (auto k : {PolicyKind::Algorithm1, PolicyKind::Algorithm2, PolicyKind::NaiveDiscretized,
                   PolicyKind::RandomSelect, PolicyKind::VarUncertainty}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

std::size_t halving_cell(std::span<const double> unit_point) {
    if (unit_point.size() >= 8 * sizeof(std::size_t)) throw std::invalid_argument("dimension too large");
    std::size_t cell = 0;
    for (std::size_t i = 0; i < unit_point.size(); ++i) {
        if (unit_point[i] >= 0.5) cell |= std::size_t{1} << i;
    }
    return cell;
}

namespace {

PolicyStep from_discrete(const DiscreteStep& s) {
    return {s.labeled, s.prediction, s.radius, s.threshold};
}

class Algorithm1Policy final : public Policy {
public:
    explicit Algorithm1Policy(DiscreteParams p) : policy_(p) {}
    PolicyStep step(const Arrival& input, const LabelOracle& oracle) override {
        return from_discrete(policy_.step(input.index, oracle));
    }

private:
    DiscretePolicy policy_;
};

class NaiveDiscretizedPolicy final : public Policy {
public:
    explicit NaiveDiscretizedPolicy(DiscreteParams p) : policy_(p) {}
    PolicyStep step(const Arrival& input, const LabelOracle& oracle) override {
        return from_discrete(policy_.step(halving_cell(input.point), oracle));
    }

private:
    DiscretePolicy policy_;
};

class Algorithm2Policy final : public Policy {
public:
    explicit Algorithm2Policy(GpLabelerConfig c) : labeler_(std::move(c)) {}
    PolicyStep step(const Arrival& input, const LabelOracle& oracle) override {
        const GpStep s = labeler_.step(input.point, oracle);
        return {s.labeled, s.prediction, s.stddev, s.threshold};
    }

private:
    GpLabeler labeler_;
};

// Shared sample-mean bookkeeping for the discrete baselines. A type's first
// arrival is always labeled because the sample mean is undefined without one.
class DiscreteBaseline : public Policy {
public:
    DiscreteBaseline(const PolicySettings& s) : settings_(s), stats_(s.num_types) {
        if (s.num_types == 0) throw std::invalid_argument("num_types must be positive");
    }

    PolicyStep step(const Arrival& input, const LabelOracle& oracle) final {
        if (input.index >= stats_.size()) throw std::invalid_argument("type index out of range");
        auto& s = stats_[input.index];
        ++s.arrivals;
        PolicyStep out;
        out.uncertainty = confidence_radius(s, total_labels_, settings_.delta, settings_.sigma);
        out.labeled = s.has_estimate() ? decide(out.uncertainty, out.threshold) : true;
        if (out.labeled) {
            s.label_sum += oracle();
            ++s.labels;
            ++total_labels_;
        }
        out.prediction = s.mean_estimate();
        return out;
    }

protected:
    virtual bool decide(double uncertainty, double& threshold) = 0;
    const PolicySettings settings_;

private:
    std::vector<TypeStats> stats_;
    std::size_t total_labels_ = 0;
};

class DiscreteRandomSelect final : public DiscreteBaseline {
public:
    explicit DiscreteRandomSelect(const PolicySettings& s)
        : DiscreteBaseline(s), rng_(s.coin_seed) {}

protected:
    bool decide(double, double& threshold) override {
        threshold = settings_.label_probability;
        return random_select_step(settings_.label_probability, rng_);
    }

private:
    std::mt19937_64 rng_;
};

class DiscreteVarUncertainty final : public DiscreteBaseline {
public:
    using DiscreteBaseline::DiscreteBaseline;

protected:
    bool decide(double uncertainty, double& threshold) override {
        threshold = state_.theta;
        const auto r = var_uncertainty_step(state_, uncertainty);
        state_ = r.next;
        return r.labeled;
    }

private:
    VarUncertaintyState state_;
};

// GP-side baselines share the labeler's predictor, including the forced
// initialization phase and the one-off lengthscale tuning.
class GpBaseline : public Policy {
public:
    explicit GpBaseline(const PolicySettings& s) : settings_(s), model_(s.gp) {}

    PolicyStep step(const Arrival& input, const LabelOracle& oracle) final {
        PolicyStep out;
        out.uncertainty = model_.predict(input.point).stddev;
        if (model_.in_initialization()) {
            out.labeled = true;
            out.threshold = 0.0;
        } else {
            out.labeled = decide(out.uncertainty, out.threshold);
        }
        if (out.labeled) model_.observe(input.point, oracle());
        out.prediction = model_.predict(input.point).mean;
        return out;
    }

protected:
    virtual bool decide(double uncertainty, double& threshold) = 0;
    const PolicySettings settings_;

private:
    GpStreamModel model_;
};

class GpRandomSelect final : public GpBaseline {
public:
    explicit GpRandomSelect(const PolicySettings& s) : GpBaseline(s), rng_(s.coin_seed) {}

protected:
    bool decide(double, double& threshold) override {
        threshold = settings_.label_probability;
        return random_select_step(settings_.label_probability, rng_);
    }

private:
    std::mt19937_64 rng_;
};

class GpVarUncertainty final : public GpBaseline {
public:
    using GpBaseline::GpBaseline;

protected:
    bool decide(double uncertainty, double& threshold) override {
        threshold = state_.theta;
        const auto r = var_uncertainty_step(state_, uncertainty);
        state_ = r.next;
        return r.labeled;
    }

private:
    VarUncertaintyState state_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(const PolicySettings& s) {
    const bool discrete = s.num_types > 0;
    DiscreteParams dp{s.num_types, s.cost, s.delta, s.sigma, s.lambda};
    switch (s.kind) {
        case PolicyKind::Algorithm1:
            if (!discrete) throw std::invalid_argument("algorithm1 needs a discrete task");
            return std::make_unique<Algorithm1Policy>(dp);
        case PolicyKind::NaiveDiscretized:
            if (discrete || s.dimension == 0) {
                throw std::invalid_argument("naive_discretized needs a continuous task");
            }
            dp.num_types = std::size_t{1} << s.dimension;
            return std::make_unique<NaiveDiscretizedPolicy>(dp);
        case PolicyKind::Algorithm2:
            if (discrete) throw std::invalid_argument("algorithm2 needs a continuous task");
            return std::make_unique<Algorithm2Policy>(GpLabelerConfig{s.cost, s.lambda, s.gp});
        case PolicyKind::RandomSelect:
            if (!(s.label_probability >= 0.0 && s.label_probability <= 1.0)) {
                throw std::invalid_argument("label probability must lie in [0, 1]");
            }
            if (discrete) return std::make_unique<DiscreteRandomSelect>(s);
            return std::make_unique<GpRandomSelect>(s);
        case PolicyKind::VarUncertainty:
            if (discrete) return std::make_unique<DiscreteVarUncertainty>(s);
            return std::make_unique<GpVarUncertainty>(s);
    }
    throw std::invalid_argument("unhandled policy kind");
}

}  // namespace streamlabel
