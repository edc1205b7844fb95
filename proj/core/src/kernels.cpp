#include "streamlabel/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace streamlabel {

void KernelSpec::validate() const {
    if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
        throw std::invalid_argument("kernel lengthscale must be positive and finite");
    }
    if (dimension == 0) throw std::invalid_argument("kernel dimension must be >= 1");
}

bool is_matern(KernelFamily family) noexcept {
    return family != KernelFamily::SquaredExponential;
}

double matern_nu(KernelFamily family) {
    switch (family) {
        case KernelFamily::Matern12: return 0.5;
        case KernelFamily::Matern32: return 1.5;
        case KernelFamily::Matern52: return 2.5;
        case KernelFamily::SquaredExponential: break;
    }
    throw std::invalid_argument("squared exponential kernel has no Matern smoothness");
}

std::string_view to_string(KernelFamily family) noexcept {
    switch (family) {
        case KernelFamily::SquaredExponential: return "se";
        case KernelFamily::Matern12: return "matern12";
        case KernelFamily::Matern32: return "matern32";
        case KernelFamily::Matern52: return "matern52";
    }
    return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
    if (name == "se" || name == "squared_exponential") return KernelFamily::SquaredExponential;
    if (name == "matern12") return KernelFamily::Matern12;
    if (name == "matern32") return KernelFamily::Matern32;
    if (name == "matern52") return KernelFamily::Matern52;
    throw std::invalid_argument("unknown kernel family '" + std::string(name) + "'");
}

double kernel_from_distance(const KernelSpec& spec, double distance) noexcept {
    const double l = spec.lengthscale;
    switch (spec.family) {
        case KernelFamily::SquaredExponential:
            return std::exp(-distance * distance / (2.0 * l * l));
        case KernelFamily::Matern12:
            return std::exp(-distance / l);
        case KernelFamily::Matern32: {
            const double r = std::numbers::sqrt3 * distance / l;
            return (1.0 + r) * std::exp(-r);
        }
        case KernelFamily::Matern52: {
            const double r = std::sqrt(5.0) * distance / l;
            return (1.0 + r + r * r / 3.0) * std::exp(-r);
        }
    }
    return 0.0;
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
    if (x.size() != spec.dimension || y.size() != spec.dimension) {
        throw std::invalid_argument("kernel_eval: point dimension does not match kernel dimension " +
                                    std::to_string(spec.dimension));
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - y[i];
        sq += diff * diff;
    }
    if (spec.family == KernelFamily::SquaredExponential) {
        return std::exp(-sq / (2.0 * spec.lengthscale * spec.lengthscale));
    }
    return kernel_from_distance(spec, std::sqrt(sq));
}

double matern_lipschitz_constant(const KernelSpec& spec) {
    const double l = spec.lengthscale;
    switch (spec.family) {
        case KernelFamily::Matern12:
            // -dk/dd = exp(-d/l)/l, largest at d = 0.
            return 1.0 / l;
        case KernelFamily::Matern32:
            // -dk/dr = r e^{-r}, largest at r = 1.
            return std::numbers::sqrt3 / l * std::exp(-1.0);
        case KernelFamily::Matern52: {
            // -dk/dr = r (1 + r) e^{-r} / 3, largest at r = golden ratio.
            const double r = std::numbers::phi;
            return std::sqrt(5.0) / l * r * (1.0 + r) * std::exp(-r) / 3.0;
        }
        case KernelFamily::SquaredExponential: break;
    }
    throw std::invalid_argument("Lipschitz constant is only defined for Matern kernels here");
}

}  // namespace streamlabel
