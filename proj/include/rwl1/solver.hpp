#pragma once

// Iteratively reweighted l1 minimization. Starting from the plain l1
// solution, each pass linearizes the chosen merit at the current iterate and
// solves the resulting weighted l1 LP.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rwl1/errors.hpp"
#include "rwl1/linalg.hpp"
#include "rwl1/merit.hpp"
#include "rwl1/simplex.hpp"

namespace rwl1 {

enum class EpsilonRule { Fixed, Halving, CWBRule };

inline const char* to_string(EpsilonRule r) {
    switch (r) {
    case EpsilonRule::Fixed: return "fixed";
    case EpsilonRule::Halving: return "halving";
    case EpsilonRule::CWBRule: return "cwb";
    }
    return "unknown";
}

inline EpsilonRule parse_epsilon_rule(const std::string& name) {
    if (name == "fixed") return EpsilonRule::Fixed;
    if (name == "halving") return EpsilonRule::Halving;
    if (name == "cwb") return EpsilonRule::CWBRule;
    throw InputError("unknown epsilon rule '" + name + "' (expected fixed, halving, cwb)");
}

struct EpsilonSchedule {
    EpsilonRule rule = EpsilonRule::Halving;
    double eps0 = 1.0;
    double cwb_floor = 0.001;

    static EpsilonSchedule fixed(double eps = 0.01) { return {EpsilonRule::Fixed, eps, 0.001}; }
    static EpsilonSchedule halving(double eps0 = 1.0) { return {EpsilonRule::Halving, eps0, 0.001}; }
    static EpsilonSchedule cwb(double eps0 = 1.0, double floor = 0.001) {
        return {EpsilonRule::CWBRule, eps0, floor};
    }

    void validate() const {
        if (!(eps0 > 0.0) || !std::isfinite(eps0)) throw InputError("eps0 must be positive");
        if (!(cwb_floor > 0.0)) throw InputError("cwb_floor must be positive");
    }

    friend bool operator==(const EpsilonSchedule&, const EpsilonSchedule&) = default;
};

struct SolverConfig {
    EpsilonSchedule schedule = EpsilonSchedule::halving(1.0);
    std::size_t max_iter = 10;
    double x_change_tol = 1e-8;
    WeightClampMode clamp = WeightClampMode::absolute_value();
    double feas_tol = 1e-9;

    void validate() const {
        schedule.validate();
        if (max_iter < 1) throw InputError("max_iter must be at least 1");
        if (!(x_change_tol > 0.0)) throw InputError("x_change_tol must be positive");
        if (!(feas_tol > 0.0)) throw InputError("feas_tol must be positive");
    }
};

/// CWB ε rule index i₀ = round(m / (4 ln(n/m))) clamped into [1, n].
inline std::size_t cwb_rank(std::size_t m, std::size_t n) {
    if (m >= n) throw InputError("CWB epsilon rule requires m < n");
    const double raw = static_cast<double>(m) /
                       (4.0 * std::log(static_cast<double>(n) / static_cast<double>(m)));
    const double r = std::round(raw);
    return static_cast<std::size_t>(std::clamp(r, 1.0, static_cast<double>(n)));
}

inline double epsilon_update(const EpsilonSchedule& schedule, double eps_current,
                             const DenseVector& x_current, std::size_t m, std::size_t n) {
    if (!(eps_current > 0.0)) throw InputError("epsilon_update: current epsilon must be positive");
    switch (schedule.rule) {
    case EpsilonRule::Fixed: return schedule.eps0;
    case EpsilonRule::Halving: return 0.5 * eps_current;
    case EpsilonRule::CWBRule: {
        if (x_current.empty()) throw InputError("epsilon_update: empty iterate");
        const std::size_t i0 = std::min(cwb_rank(m, n), x_current.size());
        std::vector<double> mags(x_current.size());
        std::transform(x_current.begin(), x_current.end(), mags.begin(),
                       [](double v) { return std::abs(v); });
        std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(i0 - 1),
                         mags.end(), std::greater<>());
        return std::max(mags[i0 - 1], schedule.cwb_floor);
    }
    }
    return eps_current;
}

inline constexpr double kSupportTol = 1e-6;

struct IterationRecord {
    double eps = 0.0;                    // ε used to weight from this iterate
    std::size_t support = 0;             // ‖x‖₀ at tolerance 1e-6
    std::optional<double> merit;         // F_ε(x), nullopt when undefined
    double lp_objective = 0.0;           // Σ w_i |x_i| of the LP that produced x
    double residual = 0.0;               // ‖A x − b‖_∞
    std::size_t pivots = 0;
};

struct ReweightedResult {
    DenseVector x_hat;
    std::size_t iterations_used = 0;     // reweighted LP solves after the l1 start
    std::vector<IterationRecord> history; // history[0] is the plain l1 solution
    std::size_t total_pivots = 0;
};

namespace detail {

inline IterationRecord make_record(const WeightScheme& scheme, const DenseMatrix& a,
                                   const DenseVector& b, const WeightedL1Result& lp, double eps) {
    IterationRecord rec;
    rec.eps = eps;
    rec.support = count_nonzeros(lp.x, kSupportTol);
    rec.merit = merit_value(scheme, lp.x, eps);
    rec.lp_objective = lp.objective;
    rec.residual = residual_inf(a, lp.x, b);
    rec.pivots = lp.pivots;
    return rec;
}

} // namespace detail

inline ReweightedResult reweighted_l1(const DenseMatrix& a, const DenseVector& b,
                                      const WeightScheme& scheme, const SolverConfig& config) {
    config.validate();
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m > n) throw InputError("reweighted_l1: system must have at least as many columns as rows");
    if (b.size() != m) throw InputError("reweighted_l1: rhs length mismatch");

    auto solve_at = [&](const DenseVector& w, std::size_t iteration) {
        try {
            return weighted_l1_lp_detailed(w, a, b, config.feas_tol);
        } catch (const SolverError& e) {
            throw SolverError(e.kind(), "iteration " + std::to_string(iteration) + ": " + e.what());
        }
    };

    ReweightedResult result;
    WeightedL1Result current = solve_at(DenseVector(std::vector<double>(n, 1.0)), 0);
    result.total_pivots += current.pivots;

    double eps = config.schedule.eps0;
    if (config.schedule.rule == EpsilonRule::CWBRule) {
        eps = epsilon_update(config.schedule, eps, current.x, m, n);
    }
    result.history.push_back(detail::make_record(scheme, a, b, current, eps));

    if (scheme.tag() != SchemeTag::UniformL1) {
        for (std::size_t l = 1; l <= config.max_iter; ++l) {
            const DenseVector w = weights(scheme, current.x, eps, config.clamp);
            WeightedL1Result next = solve_at(w, l);
            result.total_pivots += next.pivots;
            result.iterations_used = l;

            double change = 0.0;
            for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(next.x[i] - current.x[i]));
            current = std::move(next);

            eps = epsilon_update(config.schedule, eps, current.x, m, n);
            result.history.push_back(detail::make_record(scheme, a, b, current, eps));
            if (change < config.x_change_tol) break;
        }
    }
    result.x_hat = current.x;
    return result;
}

} // namespace rwl1
