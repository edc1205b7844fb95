#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace streamlabel {

using Point = std::vector<double>;

enum class KernelFamily {
    SquaredExponential,
    Matern12,
    Matern32,
    Matern52,
};

// Unit-amplitude stationary kernel: k(x, x) == 1 for every family.
//
// With d = ||x - x'|| and l the lengthscale:
//   SquaredExponential  exp(-d^2 / (2 l^2))
//   Matern12            exp(-r)                  r = d / l
//   Matern32            (1 + r) exp(-r)          r = sqrt(3) d / l
//   Matern52            (1 + r + r^2/3) exp(-r)  r = sqrt(5) d / l
// All three Matern scalings are r = sqrt(2 nu) d / l.
struct KernelSpec {
    KernelFamily family = KernelFamily::SquaredExponential;
    double lengthscale = 1.0;
    std::size_t dimension = 1;

    void validate() const;
};

bool is_matern(KernelFamily family) noexcept;

// Smoothness nu of a Matern family (0.5, 1.5, 2.5); throws for SE.
double matern_nu(KernelFamily family);

std::string_view to_string(KernelFamily family) noexcept;
KernelFamily parse_kernel_family(std::string_view name);

// Kernel as a function of the Euclidean distance only.
double kernel_from_distance(const KernelSpec& spec, double distance) noexcept;

// Throws std::invalid_argument when either point's size differs from spec.dimension.
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

// Smallest L with k(0) - k(d) <= L * d for all d >= 0 (Matern families only).
double matern_lipschitz_constant(const KernelSpec& spec);

}  // namespace streamlabel
