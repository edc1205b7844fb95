#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "streamlabel/baselines.hpp"
#include "streamlabel/discrete.hpp"
#include "streamlabel/gp_labeler.hpp"
#include "streamlabel/streams.hpp"

namespace streamlabel {

enum class PolicyKind {
    Algorithm1,        // threshold labeling over discrete types
    Algorithm2,        // GP posterior-stddev threshold labeling
    NaiveDiscretized,  // Algorithm1 over the 2^d half-cells of [0,1]^d
    RandomSelect,
    VarUncertainty,
};

std::string_view to_string(PolicyKind kind) noexcept;
PolicyKind parse_policy_kind(std::string_view name);

struct PolicyStep {
    bool labeled = false;
    double prediction = 0.0;
    double uncertainty = 0.0;  // radius or posterior stddev seen before deciding
    double threshold = 0.0;    // value the uncertainty was compared against
};

// A labeling policy sees only the (normalized) input and, if it asks, a label.
class Policy {
public:
    virtual ~Policy() = default;
    virtual PolicyStep step(const Arrival& input, const LabelOracle& oracle) = 0;
};

// Everything needed to build a policy for one trial.
struct PolicySettings {
    PolicyKind kind = PolicyKind::Algorithm1;
    double cost = 10.0;
    double lambda = 1.0;
    double sigma = 0.1;
    double delta = 0.05;
    double label_probability = 0.5;  // RandomSelect
    std::size_t num_types = 0;       // discrete setting
    std::size_t dimension = 0;       // continuous setting
    GpModelConfig gp;                // continuous setting
    std::uint64_t coin_seed = 0;     // RandomSelect generator
};

std::unique_ptr<Policy> make_policy(const PolicySettings& settings);

// Cell of a point in [0,1]^d after halving every coordinate at 0.5.
std::size_t halving_cell(std::span<const double> unit_point);

}  // namespace streamlabel
