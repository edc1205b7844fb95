#include "streamlabel/baselines.hpp"

#include <stdexcept>

namespace streamlabel {

bool random_select_step(double label_probability, std::mt19937_64& rng) {
    if (!(label_probability >= 0.0 && label_probability <= 1.0)) {
        throw std::invalid_argument("label probability must lie in [0, 1]");
    }
    // One draw per call regardless of p, so the stream position never depends on p.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return unit(rng) < label_probability;
}

VarUncertaintyStep var_uncertainty_step(VarUncertaintyState state, double uncertainty) {
    if (!(uncertainty >= 0.0)) throw std::invalid_argument("uncertainty must be >= 0");
    VarUncertaintyStep out;
    out.labeled = uncertainty < state.theta;
    out.next.theta = out.labeled ? state.theta / 2.0 : state.theta * 2.0;
    return out;
}

}  // namespace streamlabel
