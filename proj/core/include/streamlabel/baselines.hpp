#pragma once

#include <random>

namespace streamlabel {

// Bernoulli(p) labeling, independent of everything the policy has observed.
bool random_select_step(double label_probability, std::mt19937_64& rng);

// Multiplicatively adapted threshold: label when the uncertainty is below
// theta, then halve theta; otherwise double it.
struct VarUncertaintyState {
    double theta = 1.0;
};

struct VarUncertaintyStep {
    bool labeled = false;
    VarUncertaintyState next;
};

VarUncertaintyStep var_uncertainty_step(VarUncertaintyState state, double uncertainty);

}  // namespace streamlabel
