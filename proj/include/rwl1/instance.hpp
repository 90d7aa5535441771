#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "rwl1/distributions.hpp"
#include "rwl1/errors.hpp"
#include "rwl1/linalg.hpp"
#include "rwl1/rng.hpp"

namespace rwl1 {

/// Smallest magnitude of a planted nonzero.
inline constexpr double kMinPlantedMagnitude = 0.1;

struct ProblemInstance {
    DenseMatrix a;
    DenseVector b;
    DenseVector x_true;
    std::size_t k = 0;
    DistributionSpec dist = dist::Normal{};
    std::uint64_t seed = 0;

    std::size_t m() const noexcept { return a.rows(); }
    std::size_t n() const noexcept { return a.cols(); }

    friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

/// Generates A entry-by-entry in row-major order, then a uniform k-subset
/// support (Fisher–Yates prefix), then signed values ±(0.1 + |g|), g ~ N(0,1).
inline ProblemInstance make_instance(const DistributionSpec& d, std::size_t m, std::size_t n,
                                     std::size_t k, std::uint64_t seed) {
    validate(d);
    if (k < 1 || k > m) {
        throw InputError("make_instance: need 1 <= k <= m, got k=" + std::to_string(k) +
                         ", m=" + std::to_string(m));
    }
    if (m >= n) {
        throw InputError("make_instance: need m < n, got m=" + std::to_string(m) +
                         ", n=" + std::to_string(n));
    }
    SeededRng rng(seed);

    std::vector<double> entries(m * n);
    for (double& e : entries) e = sample(d, rng);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(perm[i], perm[j]);
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const double g = rng.standard_normal();
        const double sign = (rng.next_u64() >> 63) != 0 ? -1.0 : 1.0;
        x[perm[i]] = sign * (kMinPlantedMagnitude + std::abs(g));
    }

    ProblemInstance inst;
    inst.a = DenseMatrix(m, n, std::move(entries));
    inst.x_true = DenseVector(std::move(x));
    inst.b = mat_vec(inst.a, inst.x_true);
    inst.k = k;
    inst.dist = d;
    inst.seed = seed;
    return inst;
}

} // namespace rwl1
