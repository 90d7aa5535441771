#pragma once

// Two-phase revised simplex for standard-form LPs:
//
//   minimize c·z  subject to  A z = b,  z >= 0.
//
// The basis inverse is kept explicitly and updated with elementary row
// operations after every pivot; it is rebuilt from an LU factorization of the
// basis every `refactor_every` pivots and before optimality is declared.
// Entering and leaving variables follow Bland's smallest-index rule. Each
// phase runs on a slightly perturbed right-hand side to avoid long degenerate
// stretches; the perturbation is then removed and any basic value that went
// negative is repaired with dual simplex pivots.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rwl1/errors.hpp"
#include "rwl1/linalg.hpp"
#include "rwl1/rng.hpp"

namespace rwl1 {

struct LPProblem {
    DenseVector c;
    DenseMatrix a_eq;
    DenseVector b_eq;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LPStatus s) {
    switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    DenseVector z;  // meaningful only when Optimal
    double objective = 0.0;
    std::size_t pivots = 0;
};

struct SimplexOptions {
    double feas_tol = 1e-9;
    std::size_t max_pivots = 0;  // 0 selects 50·(M+N)
    double pivot_tol = 1e-9;  // relative to max(1, largest |entry|) of the pivot column
    std::size_t refactor_every = 50;
    double perturbation = 1e-7;  // relative shift of basic values in phase II; 0 disables
};

namespace detail {

class RevisedSimplex {
public:
    RevisedSimplex(const LPProblem& p, const SimplexOptions& opt)
        : m_(p.a_eq.rows()), n_(p.a_eq.cols()), ncols_(n_ + m_), opt_(opt) {
        if (opt_.max_pivots == 0) opt_.max_pivots = 50 * (m_ + n_);

        // Column-major copy of [A | I] with rows flipped so that b >= 0.
        cols_.assign(ncols_ * m_, 0.0);
        rhs_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            const double sign = p.b_eq[i] < 0.0 ? -1.0 : 1.0;
            rhs_[i] = sign * p.b_eq[i];
            const auto row = p.a_eq.row(i);
            for (std::size_t j = 0; j < n_; ++j) cols_[j * m_ + i] = sign * row[j];
            cols_[(n_ + i) * m_ + i] = 1.0;
        }
        cost_.assign(ncols_, 0.0);
        allowed_.assign(ncols_, true);
        basic_pos_.assign(ncols_, kNotBasic);
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            basis_[i] = n_ + i;
            basic_pos_[n_ + i] = i;
        }
        binv_.assign(m_ * m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
        xb_ = rhs_;
        y_.resize(m_);
        alpha_.resize(m_);
    }

    LPSolution run(const LPProblem& p) {
        LPSolution out;

        // Phase I: minimize the sum of artificials.
        for (std::size_t j = n_; j < ncols_; ++j) cost_[j] = 1.0;
        const std::vector<double> original_rhs = rhs_;
        perturb(true);
        iterate(false);
        restore(original_rhs, false);
        refactor();
        double infeasibility = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (is_artificial(basis_[i])) infeasibility += std::max(xb_[i], 0.0);
        }
        if (infeasibility > opt_.feas_tol) {
            out.status = LPStatus::Infeasible;
            out.pivots = pivots_;
            return out;
        }
        drive_out_artificials();

        // Phase II on the original costs; artificials may not re-enter.
        for (std::size_t j = 0; j < n_; ++j) cost_[j] = p.c[j];
        for (std::size_t j = n_; j < ncols_; ++j) {
            cost_[j] = 0.0;
            allowed_[j] = false;
        }
        perturb(false);
        if (!iterate(true) || !restore(original_rhs, true)) {
            out.status = LPStatus::Unbounded;
            out.pivots = pivots_;
            return out;
        }

        std::vector<double> z(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) z[basis_[i]] = xb_[i];
        }
        certify(p, z);
        out.status = LPStatus::Optimal;
        out.objective = 0.0;
        for (std::size_t j = 0; j < n_; ++j) out.objective += p.c[j] * z[j];
        out.z = DenseVector(std::move(z));
        out.pivots = pivots_;
        return out;
    }

private:
    static constexpr std::size_t kNotBasic = std::numeric_limits<std::size_t>::max();

    bool is_artificial(std::size_t j) const { return j >= n_; }
    const double* column(std::size_t j) const { return cols_.data() + j * m_; }

    // Runs simplex pivots on the current costs until optimal. Returns false
    // when an unbounded ray is found (only meaningful in Phase II).
    bool iterate(bool phase_two) {
        std::size_t since_refactor = 0;
        for (;;) {
            std::size_t entering = price();
            if (entering == kNotBasic) {
                if (since_refactor == 0) return true;
                refactor();
                since_refactor = 0;
                entering = price();
                if (entering == kNotBasic) return true;
            }
            ftran(entering);
            const std::size_t leave = ratio_test();
            if (leave == kNotBasic) {
                if (phase_two) return false;
                throw SolverError(SolverError::Kind::Numerical,
                                  "simplex: unbounded direction in phase I");
            }
            pivot(leave, entering);
            if (++since_refactor >= opt_.refactor_every) {
                refactor();
                since_refactor = 0;
            }
        }
    }

    void compute_duals() {
        std::fill(y_.begin(), y_.end(), 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost_[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = binv_.data() + i * m_;
            for (std::size_t k = 0; k < m_; ++k) y_[k] += cb * row[k];
        }
    }

    // Bland: the lowest-index admissible column with negative reduced cost.
    std::size_t price() {
        compute_duals();
        for (std::size_t j = 0; j < ncols_; ++j) {
            if (!allowed_[j] || basic_pos_[j] != kNotBasic) continue;
            if (reduced_cost(j) < -opt_.feas_tol) return j;
        }
        return kNotBasic;
    }

    double reduced_cost(std::size_t j) const {
        const double* col = column(j);
        double d = cost_[j];
        for (std::size_t k = 0; k < m_; ++k) d -= y_[k] * col[k];
        return d;
    }

    void ftran(std::size_t j) {
        const double* col = column(j);
        for (std::size_t i = 0; i < m_; ++i) {
            const double* row = binv_.data() + i * m_;
            double acc = 0.0;
            for (std::size_t k = 0; k < m_; ++k) acc += row[k] * col[k];
            alpha_[i] = acc;
        }
    }

    // Minimum ratio; near-ties go to the smallest basic variable index.
    std::size_t ratio_test() const {
        double scale = 1.0;
        for (double a : alpha_) scale = std::max(scale, std::abs(a));
        const double tol = opt_.pivot_tol * scale;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m_; ++i) {
            if (alpha_[i] > tol) best = std::min(best, std::max(xb_[i], 0.0) / alpha_[i]);
        }
        if (!std::isfinite(best)) return kNotBasic;
        const double tie = 1e-12 * std::max(1.0, best);
        std::size_t leave = kNotBasic;
        for (std::size_t i = 0; i < m_; ++i) {
            if (alpha_[i] <= tol) continue;
            if (std::max(xb_[i], 0.0) / alpha_[i] <= best + tie &&
                (leave == kNotBasic || basis_[i] < basis_[leave])) {
                leave = i;
            }
        }
        return leave;
    }

    void pivot(std::size_t r, std::size_t entering) {
        if (++pivots_ > opt_.max_pivots) {
            throw SolverError(SolverError::Kind::Stalled,
                              "simplex: pivot budget of " + std::to_string(opt_.max_pivots) +
                                  " exhausted");
        }
        const double ar = alpha_[r];
        const double theta = xb_[r] / ar;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i != r) xb_[i] -= theta * alpha_[i];
        }
        xb_[r] = theta;

        double* prow = binv_.data() + r * m_;
        const double inv = 1.0 / ar;
        for (std::size_t k = 0; k < m_; ++k) prow[k] *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || alpha_[i] == 0.0) continue;
            const double f = alpha_[i];
            double* row = binv_.data() + i * m_;
            for (std::size_t k = 0; k < m_; ++k) row[k] -= f * prow[k];
        }
        basic_pos_[basis_[r]] = kNotBasic;
        basis_[r] = entering;
        basic_pos_[entering] = r;
    }

    void refactor() {
        std::vector<double> bmat(m_ * m_);
        for (std::size_t i = 0; i < m_; ++i) {
            std::copy_n(column(basis_[i]), m_, bmat.begin() + static_cast<std::ptrdiff_t>(i * m_));
        }
        if (!lu_.factor(bmat, m_)) {
            throw SolverError(SolverError::Kind::Numerical, "simplex: basis matrix is singular");
        }
        std::vector<double> e(m_);
        for (std::size_t k = 0; k < m_; ++k) {
            std::fill(e.begin(), e.end(), 0.0);
            e[k] = 1.0;
            lu_.solve(e);
            for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + k] = e[i];
        }
        // x_B = B⁻¹b with one step of iterative refinement.
        xb_ = rhs_;
        lu_.solve(xb_);
        std::vector<double> r(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            long double acc = rhs_[i];
            for (std::size_t k = 0; k < m_; ++k) {
                acc -= static_cast<long double>(bmat[k * m_ + i]) * xb_[k];
            }
            r[i] = static_cast<double>(acc);
        }
        lu_.solve(r);
        for (std::size_t i = 0; i < m_; ++i) xb_[i] += r[i];
    }

    // Shifts every structural basic value up by a small deterministic amount
    // (via the right-hand side) so phase II sees no ratio ties.
    void perturb(bool include_artificials) {
        if (opt_.perturbation <= 0.0) return;
        for (std::size_t i = 0; i < m_; ++i) {
            if (!include_artificials && is_artificial(basis_[i])) continue;
            const double u = static_cast<double>(splitmix64_hash(i) >> 11) * 0x1.0p-53;
            const double delta = opt_.perturbation * (1.0 + std::abs(xb_[i])) * (0.5 + u);
            const double* col = column(basis_[i]);
            for (std::size_t k = 0; k < m_; ++k) rhs_[k] += delta * col[k];
        }
        refactor();
    }

    // Withdraws the perturbation and restores primal feasibility.
    bool restore(const std::vector<double>& original_rhs, bool phase_two) {
        if (rhs_ == original_rhs) return true;
        rhs_ = original_rhs;
        refactor();
        dual_cleanup();
        return iterate(phase_two);
    }

    // Dual simplex on a dual-feasible basis: removes the negative basic values
    // left after the perturbation is withdrawn.
    void dual_cleanup() {
        std::size_t since_refactor = 0;
        for (;;) {
            std::size_t r = kNotBasic;
            for (std::size_t i = 0; i < m_; ++i) {
                if (xb_[i] < -opt_.feas_tol && (r == kNotBasic || xb_[i] < xb_[r])) r = i;
            }
            if (r == kNotBasic) {
                if (since_refactor == 0) return;
                refactor();
                since_refactor = 0;
                continue;
            }
            compute_duals();
            const double* rho = binv_.data() + r * m_;
            std::vector<double> row(ncols_, 0.0);
            double scale = 1.0;
            for (std::size_t j = 0; j < ncols_; ++j) {
                if (!allowed_[j] || basic_pos_[j] != kNotBasic) continue;
                const double* col = column(j);
                for (std::size_t k = 0; k < m_; ++k) row[j] += rho[k] * col[k];
                scale = std::max(scale, std::abs(row[j]));
            }
            std::size_t entering = kNotBasic;
            double best = std::numeric_limits<double>::infinity();
            double best_alpha = 0.0;
            for (std::size_t j = 0; j < ncols_; ++j) {
                if (!allowed_[j] || basic_pos_[j] != kNotBasic) continue;
                const double a = -row[j];
                if (a <= opt_.pivot_tol * scale) continue;
                const double ratio = std::max(reduced_cost(j), 0.0) / a;
                if (ratio < best - 1e-12 || (ratio <= best + 1e-12 && a > best_alpha)) {
                    best = ratio;
                    best_alpha = a;
                    entering = j;
                }
            }
            if (entering == kNotBasic) {
                throw SolverError(SolverError::Kind::Numerical,
                                  "simplex: no entering column while restoring feasibility");
            }
            ftran(entering);
            pivot(r, entering);
            if (++since_refactor >= opt_.refactor_every) {
                refactor();
                since_refactor = 0;
            }
        }
    }

    // Replace zero-level artificials with structural columns where possible.
    // Artificials left in the basis mark redundant rows.
    void drive_out_artificials() {
        for (std::size_t r = 0; r < m_; ++r) {
            if (!is_artificial(basis_[r])) continue;
            const double* rho = binv_.data() + r * m_;
            std::size_t best_j = kNotBasic;
            double best_v = 1e-9;
            for (std::size_t j = 0; j < n_; ++j) {
                if (basic_pos_[j] != kNotBasic) continue;
                const double* col = column(j);
                double v = 0.0;
                for (std::size_t k = 0; k < m_; ++k) v += rho[k] * col[k];
                if (std::abs(v) > best_v) {
                    best_v = std::abs(v);
                    best_j = j;
                }
            }
            if (best_j == kNotBasic) continue;
            ftran(best_j);
            pivot(r, best_j);
        }
        refactor();
    }

    void certify(const LPProblem& p, const std::vector<double>& z) {
        const double tol = opt_.feas_tol;
        for (std::size_t j = 0; j < n_; ++j) {
            if (z[j] < -tol) {
                throw SolverError(SolverError::Kind::Numerical,
                                  "simplex: basic variable " + std::to_string(j) +
                                      " is negative at optimum");
            }
        }
        for (std::size_t i = 0; i < m_; ++i) {
            const auto row = p.a_eq.row(i);
            long double acc = -static_cast<long double>(p.b_eq[i]);
            for (std::size_t j = 0; j < n_; ++j) acc += static_cast<long double>(row[j]) * z[j];
            if (std::abs(static_cast<double>(acc)) > tol) {
                throw SolverError(SolverError::Kind::Numerical,
                                  "simplex: primal residual " +
                                      std::to_string(static_cast<double>(acc)) + " in row " +
                                      std::to_string(i) + " exceeds tolerance");
            }
        }
        // Reduced costs were re-priced against a fresh factorization in iterate().
        for (std::size_t j = 0; j < ncols_; ++j) {
            if (!allowed_[j] || basic_pos_[j] != kNotBasic) continue;
            if (reduced_cost(j) < -tol) {
                throw SolverError(SolverError::Kind::Numerical,
                                  "simplex: negative reduced cost at declared optimum");
            }
        }
    }

    std::size_t m_, n_, ncols_;
    SimplexOptions opt_;
    std::vector<double> cols_;
    std::vector<double> rhs_;
    std::vector<double> cost_;
    std::vector<bool> allowed_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> basic_pos_;
    std::vector<double> binv_;  // row-major M×M
    std::vector<double> xb_;
    std::vector<double> y_;
    std::vector<double> alpha_;
    LuFactor lu_;
    std::size_t pivots_ = 0;
};

} // namespace detail

inline void validate(const LPProblem& p) {
    const auto m = p.a_eq.rows();
    const auto n = p.a_eq.cols();
    if (p.c.size() != n) {
        throw InputError("LPProblem: cost length " + std::to_string(p.c.size()) +
                         " != column count " + std::to_string(n));
    }
    if (p.b_eq.size() != m) {
        throw InputError("LPProblem: rhs length " + std::to_string(p.b_eq.size()) +
                         " != row count " + std::to_string(m));
    }
    if (m > n) throw InputError("LPProblem: more rows than columns");
}

inline LPSolution solve_standard_form(const LPProblem& p, const SimplexOptions& opt) {
    validate(p);
    if (!(opt.feas_tol > 0.0)) throw InputError("solve_standard_form: feas_tol must be positive");
    if (p.a_eq.rows() == 0) {
        // Only z = 0 is basic; bounded iff no cost is negative.
        for (double cj : p.c) {
            if (cj < 0.0) return LPSolution{LPStatus::Unbounded, {}, 0.0, 0};
        }
        return LPSolution{LPStatus::Optimal, DenseVector::zeros(p.a_eq.cols()), 0.0, 0};
    }
    detail::RevisedSimplex simplex(p, opt);
    return simplex.run(p);
}

inline LPSolution solve_standard_form(const LPProblem& p, double feas_tol = 1e-9,
                                      std::size_t max_pivots = 0) {
    SimplexOptions opt;
    opt.feas_tol = feas_tol;
    opt.max_pivots = max_pivots;
    return solve_standard_form(p, opt);
}

struct WeightedL1Result {
    DenseVector x;
    double objective = 0.0;
    std::size_t pivots = 0;
};

/// Minimizes Σ w_i |x_i| subject to A x = b through the split x = u − v with
/// u, v >= 0. Weights are rescaled to unit maximum before the LP solve so the
/// reduced-cost tolerance is relative; the reported objective uses the
/// original weights.
inline WeightedL1Result weighted_l1_lp_detailed(const DenseVector& w, const DenseMatrix& a,
                                                const DenseVector& b, double feas_tol = 1e-9) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (w.size() != n) {
        throw InputError("weighted_l1_lp: weight length " + std::to_string(w.size()) +
                         " != column count " + std::to_string(n));
    }
    if (b.size() != m) throw InputError("weighted_l1_lp: rhs length mismatch");
    double wmax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!(w[j] > 0.0)) {
            throw InputError("weighted_l1_lp: weight " + std::to_string(j) +
                             " is not strictly positive");
        }
        wmax = std::max(wmax, w[j]);
    }

    std::vector<double> cost(2 * n);
    for (std::size_t j = 0; j < n; ++j) cost[j] = cost[n + j] = w[j] / wmax;
    std::vector<double> split(m * 2 * n);
    for (std::size_t i = 0; i < m; ++i) {
        const auto row = a.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            split[i * 2 * n + j] = row[j];
            split[i * 2 * n + n + j] = -row[j];
        }
    }
    const LPProblem lp{DenseVector(std::move(cost)), DenseMatrix(m, 2 * n, std::move(split)), b};
    const LPSolution sol = solve_standard_form(lp, feas_tol);
    if (sol.status == LPStatus::Infeasible) {
        throw SolverError(SolverError::Kind::Infeasible, "weighted_l1_lp: Ax = b is infeasible");
    }
    if (sol.status == LPStatus::Unbounded) {
        throw SolverError(SolverError::Kind::Unbounded, "weighted_l1_lp: LP is unbounded");
    }
    std::vector<double> x(n);
    double objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = sol.z[j] - sol.z[n + j];
        objective += w[j] * std::abs(x[j]);
    }
    return WeightedL1Result{DenseVector(std::move(x)), objective, sol.pivots};
}

inline DenseVector weighted_l1_lp(const DenseVector& w, const DenseMatrix& a, const DenseVector& b,
                                  double feas_tol = 1e-9) {
    return weighted_l1_lp_detailed(w, a, b, feas_tol).x;
}

} // namespace rwl1
