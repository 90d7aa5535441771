#pragma once

// Concave merit functions approximating ‖x‖₀ and the reweighting vectors
// obtained from their gradients.
//
// With s = |x_i| + ε the separable terms are
//
//   UniformL1  |x_i|                               weight 1
//   CWB        log s                               weight 1 / s
//   ZL         log s + s^p                         weight (1 + p s^p) / s
//   W1         log(log t),       t = s + s^p       weight (1 + p s^(p-1)) / (t log t)
//   W2         (1/p)(log t)^p,   t = s + s^q       weight (log t)^(p-1) (1 + q s^(q-1)) / t
//
// W1 and W2 are only real-valued where t > 1. Below that the raw weight is
// negative (W1) or non-real (W2); WeightClampMode decides what the solver sees.

#include <cmath>
#include <cstddef>
#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rwl1/errors.hpp"
#include "rwl1/linalg.hpp"

namespace rwl1 {

enum class SchemeTag { UniformL1, CWB, ZL, W1, W2 };

inline const char* to_string(SchemeTag tag) {
    switch (tag) {
    case SchemeTag::UniformL1: return "l1";
    case SchemeTag::CWB: return "cwb";
    case SchemeTag::ZL: return "zl";
    case SchemeTag::W1: return "w1";
    case SchemeTag::W2: return "w2";
    }
    return "unknown";
}

inline SchemeTag parse_scheme_tag(const std::string& name) {
    if (name == "l1" || name == "l1-min") return SchemeTag::UniformL1;
    if (name == "cwb") return SchemeTag::CWB;
    if (name == "zl") return SchemeTag::ZL;
    if (name == "w1") return SchemeTag::W1;
    if (name == "w2") return SchemeTag::W2;
    throw InputError("unknown scheme '" + name + "' (expected l1, cwb, zl, w1, w2)");
}

inline constexpr double kDefaultExponent = 0.05;

class WeightScheme {
public:
    WeightScheme() = default;

    static WeightScheme uniform_l1() { return WeightScheme(SchemeTag::UniformL1, kDefaultExponent, kDefaultExponent); }
    static WeightScheme cwb() { return WeightScheme(SchemeTag::CWB, kDefaultExponent, kDefaultExponent); }
    static WeightScheme zl(double p = kDefaultExponent) { return WeightScheme(SchemeTag::ZL, p, kDefaultExponent); }
    static WeightScheme w1(double p = kDefaultExponent) { return WeightScheme(SchemeTag::W1, p, kDefaultExponent); }
    static WeightScheme w2(double p = kDefaultExponent, double q = kDefaultExponent) {
        return WeightScheme(SchemeTag::W2, p, q);
    }
    static WeightScheme make(SchemeTag tag, double p, double q) { return WeightScheme(tag, p, q); }

    SchemeTag tag() const noexcept { return tag_; }
    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    bool uses_p() const noexcept {
        return tag_ == SchemeTag::ZL || tag_ == SchemeTag::W1 || tag_ == SchemeTag::W2;
    }
    bool uses_q() const noexcept { return tag_ == SchemeTag::W2; }

    friend bool operator==(const WeightScheme&, const WeightScheme&) = default;

private:
    WeightScheme(SchemeTag tag, double p, double q) : tag_(tag), p_(p), q_(q) {
        if (uses_p() && !(p > 0.0 && p < 1.0)) {
            throw InputError("p = " + std::to_string(p) + " is outside the valid range (0,1)");
        }
        if (uses_q() && !(q > 0.0 && q < 1.0)) {
            throw InputError("q = " + std::to_string(q) + " is outside the valid range (0,1)");
        }
    }

    SchemeTag tag_ = SchemeTag::UniformL1;
    double p_ = kDefaultExponent;
    double q_ = kDefaultExponent;
};

class WeightClampMode {
public:
    enum class Kind { AbsoluteValue, FloorAt, None };

    static WeightClampMode absolute_value() { return WeightClampMode(Kind::AbsoluteValue, 0.0); }
    static WeightClampMode none() { return WeightClampMode(Kind::None, 0.0); }
    static WeightClampMode floor_at(double omega_min) {
        if (!(omega_min > 0.0)) throw InputError("FloorAt requires a positive floor");
        return WeightClampMode(Kind::FloorAt, omega_min);
    }

    Kind kind() const noexcept { return kind_; }
    double floor() const noexcept { return floor_; }

    double apply(double raw) const {
        switch (kind_) {
        case Kind::AbsoluteValue: return std::abs(raw);
        case Kind::FloorAt: return std::isnan(raw) ? floor_ : std::max(raw, floor_);
        case Kind::None: return raw;
        }
        return raw;
    }

    friend bool operator==(const WeightClampMode&, const WeightClampMode&) = default;

private:
    WeightClampMode(Kind k, double f) : kind_(k), floor_(f) {}
    Kind kind_ = Kind::AbsoluteValue;
    double floor_ = 0.0;
};

namespace detail {

inline void require_positive_eps(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw InputError("epsilon must be positive and finite, got " + std::to_string(eps));
    }
}

// Unclamped per-coordinate weight. For W2 below t = 1 the real extension
// −|log t|^(p−1)·t'/t is used, mirroring the sign W1 takes there.
inline double raw_weight(const WeightScheme& scheme, double magnitude, double eps) {
    const double s = magnitude + eps;
    switch (scheme.tag()) {
    case SchemeTag::UniformL1: return 1.0;
    case SchemeTag::CWB: return 1.0 / s;
    case SchemeTag::ZL: {
        const double p = scheme.p();
        return (1.0 + std::pow(s, p) * p) / s;
    }
    case SchemeTag::W1: {
        const double p = scheme.p();
        const double sp = std::pow(s, p);
        const double t = s + sp;
        return (1.0 + sp * p / s) / (t * std::log(t));
    }
    case SchemeTag::W2: {
        const double p = scheme.p();
        const double q = scheme.q();
        const double sq = std::pow(s, q);
        const double t = s + sq;
        const double lt = std::log(t);
        const double dt = 1.0 + sq * q / s;
        const double mag = std::pow(std::abs(lt), p - 1.0) * dt / t;
        return lt >= 0.0 ? mag : -mag;
    }
    }
    return 1.0;
}

// Per-coordinate merit term; nullopt where it is undefined over the reals.
inline std::optional<double> merit_term(const WeightScheme& scheme, double magnitude, double eps) {
    const double s = magnitude + eps;
    switch (scheme.tag()) {
    case SchemeTag::UniformL1: return magnitude;
    case SchemeTag::CWB: return std::log(s);
    case SchemeTag::ZL: return std::log(s) + std::pow(s, scheme.p());
    case SchemeTag::W1: {
        const double t = s + std::pow(s, scheme.p());
        if (!(t > 1.0)) return std::nullopt;
        return std::log(std::log(t));
    }
    case SchemeTag::W2: {
        const double t = s + std::pow(s, scheme.q());
        const double lt = std::log(t);
        if (!(lt > 0.0)) return std::nullopt;
        return std::pow(lt, scheme.p()) / scheme.p();
    }
    }
    return std::nullopt;
}

} // namespace detail

/// Reweighting vector ω = ∇F_ε(|x|), clamped per `clamp`.
inline DenseVector weights(const WeightScheme& scheme, const DenseVector& x, double eps,
                           const WeightClampMode& clamp = WeightClampMode::absolute_value()) {
    detail::require_positive_eps(eps);
    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        w[i] = scheme.tag() == SchemeTag::UniformL1
                   ? 1.0
                   : clamp.apply(detail::raw_weight(scheme, std::abs(x[i]), eps));
    }
    // DenseVector rejects non-finite weights (log t == 0 exactly).
    return DenseVector(std::move(w));
}

/// F_ε(x), or nullopt where the merit is not real-valued.
inline std::optional<double> merit_value(const WeightScheme& scheme, std::span<const double> x,
                                         double eps) {
    detail::require_positive_eps(eps);
    double total = 0.0;
    for (double xi : x) {
        const auto term = detail::merit_term(scheme, std::abs(xi), eps);
        if (!term) return std::nullopt;
        total += *term;
    }
    return total;
}

inline std::optional<double> merit_value(const WeightScheme& scheme, const DenseVector& x,
                                         double eps) {
    return merit_value(scheme, x.values(), eps);
}

/// Largest relative deviation between the unclamped analytic weights and a
/// central finite difference of merit_value with step h.
inline double gradient_check(const WeightScheme& scheme, const DenseVector& x, double eps,
                             double h) {
    detail::require_positive_eps(eps);
    if (!(h > 0.0)) throw InputError("gradient_check: h must be positive");
    std::vector<double> probe(x.begin(), x.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < probe.size(); ++i) {
        if (!(probe[i] > h)) {
            throw InputError("gradient_check: coordinate " + std::to_string(i) +
                             " must exceed the step h");
        }
        const double xi = probe[i];
        probe[i] = xi + h;
        const auto fp = merit_value(scheme, probe, eps);
        probe[i] = xi - h;
        const auto fm = merit_value(scheme, probe, eps);
        probe[i] = xi;
        if (!fp || !fm) {
            throw InputError("gradient_check: merit undefined at a probe point of coordinate " +
                             std::to_string(i));
        }
        const double fd = (*fp - *fm) / (2.0 * h);
        const double analytic = detail::raw_weight(scheme, xi, eps);
        const double err = std::abs(analytic - fd) / std::max(std::abs(analytic), 1e-300);
        worst = std::max(worst, err);
    }
    return worst;
}

} // namespace rwl1
