#pragma once

#include <cmath>
#include <string>
#include <type_traits>
#include <variant>

#include "rwl1/errors.hpp"
#include "rwl1/rng.hpp"

namespace rwl1 {

namespace dist {

struct Normal {
    double mu = 0.0;
    double sigma = 1.0;
    friend bool operator==(const Normal&, const Normal&) = default;
};
struct Poisson {
    double lambda = 2.0;
    friend bool operator==(const Poisson&, const Poisson&) = default;
};
/// Parameterized by its mean.
struct Exponential {
    double mean = 5.0;
    friend bool operator==(const Exponential&, const Exponential&) = default;
};
/// Fisher–Snedecor F(alpha, beta) with integer degrees of freedom.
struct FDist {
    int alpha = 1;
    int beta = 6;
    friend bool operator==(const FDist&, const FDist&) = default;
};
/// Shape–scale parameterization.
struct Gamma {
    double shape = 5.0;
    double scale = 10.0;
    friend bool operator==(const Gamma&, const Gamma&) = default;
};
/// Continuous uniform on (0, upper).
struct Uniform {
    double upper = 10.0;
    friend bool operator==(const Uniform&, const Uniform&) = default;
};

} // namespace dist

using DistributionSpec =
    std::variant<dist::Normal, dist::Poisson, dist::Exponential, dist::FDist, dist::Gamma, dist::Uniform>;

inline std::string distribution_name(const DistributionSpec& d) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, dist::Normal>) return "normal";
            else if constexpr (std::is_same_v<T, dist::Poisson>) return "poisson";
            else if constexpr (std::is_same_v<T, dist::Exponential>) return "exponential";
            else if constexpr (std::is_same_v<T, dist::FDist>) return "f";
            else if constexpr (std::is_same_v<T, dist::Gamma>) return "gamma";
            else return "uniform";
        },
        d);
}

/// Distribution with the benchmark's default parameters for the given name.
inline DistributionSpec default_distribution(const std::string& name) {
    if (name == "normal") return dist::Normal{};
    if (name == "poisson") return dist::Poisson{};
    if (name == "exponential") return dist::Exponential{};
    if (name == "f") return dist::FDist{};
    if (name == "gamma") return dist::Gamma{};
    if (name == "uniform") return dist::Uniform{};
    throw InputError("unknown distribution '" + name +
                     "' (expected normal, poisson, exponential, f, gamma, uniform)");
}

inline void validate(const DistributionSpec& d) {
    auto fail = [](const std::string& msg) { throw InputError("distribution: " + msg); };
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, dist::Normal>) {
                if (!(v.sigma > 0.0) || !std::isfinite(v.mu)) fail("normal needs sigma > 0");
            } else if constexpr (std::is_same_v<T, dist::Poisson>) {
                if (!(v.lambda > 0.0) || v.lambda > 700.0) fail("poisson needs 0 < lambda <= 700");
            } else if constexpr (std::is_same_v<T, dist::Exponential>) {
                if (!(v.mean > 0.0)) fail("exponential needs mean > 0");
            } else if constexpr (std::is_same_v<T, dist::FDist>) {
                if (v.alpha < 1 || v.beta < 1) fail("F needs integer alpha, beta >= 1");
            } else if constexpr (std::is_same_v<T, dist::Gamma>) {
                if (!(v.shape > 0.0) || !(v.scale > 0.0)) fail("gamma needs shape > 0 and scale > 0");
            } else {
                if (!(v.upper > 0.0)) fail("uniform needs N > 0");
            }
        },
        d);
}

namespace detail {

// Marsaglia–Tsang for shape >= 1; smaller shapes use the U^(1/a) boost.
inline double sample_gamma(double shape, double scale, SeededRng& rng) {
    if (shape < 1.0) {
        const double g = sample_gamma(shape + 1.0, 1.0, rng);
        return scale * g * std::pow(rng.uniform_open(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z = 0.0;
        double v = 0.0;
        do {
            z = rng.standard_normal();
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform_open();
        if (u < 1.0 - 0.0331 * z * z * z * z) return scale * d * v;
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
}

} // namespace detail

inline double sample(const DistributionSpec& d, SeededRng& rng) {
    return std::visit(
        [&rng](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, dist::Normal>) {
                return v.mu + v.sigma * rng.standard_normal();
            } else if constexpr (std::is_same_v<T, dist::Poisson>) {
                // Knuth's product method.
                const double limit = std::exp(-v.lambda);
                double prod = 1.0;
                int k = -1;
                do {
                    ++k;
                    prod *= rng.uniform_open();
                } while (prod > limit);
                return static_cast<double>(k);
            } else if constexpr (std::is_same_v<T, dist::Exponential>) {
                return -v.mean * std::log(1.0 - rng.uniform_open());
            } else if constexpr (std::is_same_v<T, dist::FDist>) {
                const double g1 = detail::sample_gamma(0.5 * v.alpha, 2.0, rng);
                const double g2 = detail::sample_gamma(0.5 * v.beta, 2.0, rng);
                return (g1 / v.alpha) / (g2 / v.beta);
            } else if constexpr (std::is_same_v<T, dist::Gamma>) {
                return detail::sample_gamma(v.shape, v.scale, rng);
            } else {
                return v.upper * rng.uniform_open();
            }
        },
        d);
}

} // namespace rwl1
