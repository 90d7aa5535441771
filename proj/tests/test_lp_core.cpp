#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lp_oracle.hpp"
#include "rwl1/instance.hpp"
#include "rwl1/linalg.hpp"
#include "rwl1/simplex.hpp"

using namespace rwl1;

namespace {

LPProblem to_problem(const oracle::SmallLp& lp) {
    return LPProblem{DenseVector(lp.c), DenseMatrix(lp.m, lp.n, lp.a), DenseVector(lp.b)};
}

void expect_certified(const LPProblem& p, const LPSolution& sol, double tol) {
    ASSERT_EQ(sol.status, LPStatus::Optimal);
    for (double v : sol.z) EXPECT_GE(v, -tol);
    EXPECT_LE(residual_inf(p.a_eq, sol.z, p.b_eq), tol);
}

} // namespace

TEST(linalg, mat_vec_identity) {
    const auto y = mat_vec(DenseMatrix::identity(2), DenseVector{3.0, -1.0});
    EXPECT_EQ(y, (DenseVector{3.0, -1.0}));
}

TEST(linalg, mat_vec_row_vector) {
    const auto y = mat_vec(DenseMatrix(1, 2, {1.0, 1.0}), DenseVector{1.0, 0.0});
    EXPECT_EQ(y, DenseVector{1.0});
}

TEST(linalg, mat_vec_zero_matrix) {
    const auto y = mat_vec(DenseMatrix::zeros(2, 3), DenseVector{4.0, -2.0, 7.5});
    EXPECT_EQ(y, (DenseVector{0.0, 0.0}));
}

TEST(linalg, mat_vec_dimension_mismatch) {
    EXPECT_THROW(mat_vec(DenseMatrix::zeros(2, 3), DenseVector{1.0, 2.0}), InputError);
}

TEST(linalg, rejects_non_finite_entries) {
    EXPECT_THROW(DenseVector({1.0, std::nan("")}), InputError);
    EXPECT_THROW(DenseMatrix(1, 1, {INFINITY}), InputError);
    EXPECT_THROW(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), InputError);
}

TEST(linalg, count_nonzeros_examples) {
    EXPECT_EQ(count_nonzeros(DenseVector{0.0, 0.0, 3.0}, 1e-6), 1u);
    EXPECT_EQ(count_nonzeros(DenseVector{1e-8, 2.0}, 1e-6), 1u);
    EXPECT_EQ(count_nonzeros(DenseVector{1.0, -1.0, 0.5}, 1e-6), 3u);
    EXPECT_THROW(count_nonzeros(DenseVector{1.0}, 0.0), InputError);
}

TEST(simplex, all_feasible_points_share_objective) {
    const LPProblem p{DenseVector{1.0, 1.0}, DenseMatrix(1, 2, {1.0, 1.0}), DenseVector{1.0}};
    const auto sol = solve_standard_form(p);
    expect_certified(p, sol, 1e-9);
    EXPECT_NEAR(sol.objective, 1.0, 1e-12);
}

TEST(simplex, detects_unbounded_ray) {
    const LPProblem p{DenseVector{-1.0, 0.0}, DenseMatrix(1, 2, {1.0, -1.0}), DenseVector{0.0}};
    EXPECT_EQ(solve_standard_form(p).status, LPStatus::Unbounded);
}

TEST(simplex, detects_infeasibility) {
    const LPProblem p{DenseVector{1.0}, DenseMatrix(1, 1, {1.0}), DenseVector{-1.0}};
    EXPECT_EQ(solve_standard_form(p).status, LPStatus::Infeasible);
}

TEST(simplex, rejects_bad_input) {
    const LPProblem wrong_cost{DenseVector{1.0}, DenseMatrix(1, 2, {1.0, 1.0}), DenseVector{1.0}};
    EXPECT_THROW(solve_standard_form(wrong_cost), InputError);
    const LPProblem ok{DenseVector{1.0, 1.0}, DenseMatrix(1, 2, {1.0, 1.0}), DenseVector{1.0}};
    EXPECT_THROW(solve_standard_form(ok, 0.0), InputError);
}

TEST(simplex, pivot_budget_exhaustion_is_reported) {
    const auto lp = oracle::random_bounded_lp(7, 5, 8);
    try {
        solve_standard_form(to_problem(lp), 1e-9, 1);
        FAIL() << "expected stalled error";
    } catch (const SolverError& e) {
        EXPECT_EQ(e.kind(), SolverError::Kind::Stalled);
    }
}

TEST(simplex, redundant_rows_are_handled) {
    // Second row duplicates the first.
    const LPProblem p{DenseVector{1.0, 2.0, 3.0},
                      DenseMatrix(2, 3, {1.0, 1.0, 1.0, 1.0, 1.0, 1.0}), DenseVector{2.0, 2.0}};
    const auto sol = solve_standard_form(p);
    expect_certified(p, sol, 1e-9);
    EXPECT_NEAR(sol.objective, 2.0, 1e-12);
}

TEST(simplex, matches_vertex_enumeration_on_random_lps) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t m = 1 + seed % 5;
        const std::size_t n = m + 1 + (seed / 5) % (9 - m - 1);
        const auto lp = oracle::random_bounded_lp(1000 + seed, m, n, seed % 4 == 0);
        const auto expected = oracle::enumerate_vertices(lp);
        ASSERT_TRUE(expected.has_value()) << "seed " << seed;
        const LPProblem p = to_problem(lp);
        const auto sol = solve_standard_form(p);
        expect_certified(p, sol, 1e-9);
        EXPECT_NEAR(sol.objective, *expected, 1e-8) << "seed " << seed << " m=" << m << " n=" << n;
    }
}

TEST(simplex, four_by_seven_against_oracle) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto lp = oracle::random_bounded_lp(5000 + seed, 4, 7);
        const auto expected = oracle::enumerate_vertices(lp);
        ASSERT_TRUE(expected.has_value());
        EXPECT_NEAR(solve_standard_form(to_problem(lp)).objective, *expected, 1e-8);
    }
}

TEST(simplex, terminates_at_benchmark_scale) {
    // 60×450: the largest size the pivot budget must cover.
    std::mt19937_64 gen(99);
    std::normal_distribution<double> g;
    const std::size_t m = 60, n = 450;
    std::vector<double> a(m * n), z0(n, 0.0), c(n);
    for (auto& v : a) v = g(gen);
    for (std::size_t j = 0; j < n; j += 7) z0[j] = std::abs(g(gen));
    for (auto& v : c) v = 0.1 + std::abs(g(gen));
    std::vector<double> b(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) b[i] += a[i * n + j] * z0[j];
    const LPProblem p{DenseVector(c), DenseMatrix(m, n, a), DenseVector(b)};
    const auto sol = solve_standard_form(p, 1e-9, 50 * (m + n));
    expect_certified(p, sol, 1e-9);
    EXPECT_LE(sol.pivots, 50 * (m + n));
}

TEST(weighted_l1, picks_cheaper_vertex) {
    const auto r = weighted_l1_lp_detailed(DenseVector{1.0, 2.0}, DenseMatrix(1, 2, {1.0, 1.0}),
                                           DenseVector{1.0});
    EXPECT_NEAR(r.x[0], 1.0, 1e-12);
    EXPECT_NEAR(r.x[1], 0.0, 1e-12);
    EXPECT_NEAR(r.objective, 1.0, 1e-12);
}

TEST(weighted_l1, unique_feasible_point) {
    const auto x = weighted_l1_lp(DenseVector{0.3, 7.0}, DenseMatrix::identity(2), DenseVector{3.0, -4.0});
    EXPECT_NEAR(x[0], 3.0, 1e-12);
    EXPECT_NEAR(x[1], -4.0, 1e-12);
}

TEST(weighted_l1, tied_vertices_fix_only_objective) {
    const auto r = weighted_l1_lp_detailed(DenseVector{1.0, 1.0}, DenseMatrix(1, 2, {1.0, 1.0}),
                                           DenseVector{1.0});
    EXPECT_NEAR(r.objective, 1.0, 1e-12);
}

TEST(weighted_l1, rejects_nonpositive_weights) {
    EXPECT_THROW(weighted_l1_lp(DenseVector{1.0, 0.0}, DenseMatrix(1, 2, {1.0, 1.0}), DenseVector{1.0}),
                 InputError);
    EXPECT_THROW(weighted_l1_lp(DenseVector{1.0, -2.0}, DenseMatrix(1, 2, {1.0, 1.0}), DenseVector{1.0}),
                 InputError);
}

TEST(weighted_l1, infeasible_system_propagates) {
    // x1 + x2 = 1 and x1 + x2 = 2.
    try {
        weighted_l1_lp(DenseVector{1.0, 1.0}, DenseMatrix(2, 2, {1.0, 1.0, 1.0, 1.0}), DenseVector{1.0, 2.0});
        FAIL() << "expected infeasible";
    } catch (const SolverError& e) {
        EXPECT_EQ(e.kind(), SolverError::Kind::Infeasible);
    }
}

TEST(weighted_l1, matches_split_oracle_on_random_instances) {
    // The split LP [A, −A] with cost (w, w) is small enough to enumerate.
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::uniform_real_distribution<double> weight(0.1, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 1 + static_cast<std::size_t>(trial) % 5;
        const std::size_t n = m + 1 + static_cast<std::size_t>(trial / 5) % (8 - m);
        std::vector<double> a(m * n), w(n), x0(n);
        for (auto& v : a) v = entry(gen);
        for (auto& v : w) v = weight(gen);
        for (auto& v : x0) v = entry(gen);
        std::vector<double> b(m, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) b[i] += a[i * n + j] * x0[j];

        oracle::SmallLp split;
        split.m = m;
        split.n = 2 * n;
        split.a.resize(m * 2 * n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                split.a[i * 2 * n + j] = a[i * n + j];
                split.a[i * 2 * n + n + j] = -a[i * n + j];
            }
        split.b = b;
        split.c.resize(2 * n);
        for (std::size_t j = 0; j < n; ++j) split.c[j] = split.c[n + j] = w[j];
        const auto expected = oracle::enumerate_vertices(split);
        ASSERT_TRUE(expected.has_value());

        const DenseMatrix am(m, n, a);
        const auto r = weighted_l1_lp_detailed(DenseVector(w), am, DenseVector(b));
        EXPECT_NEAR(r.objective, *expected, 1e-8) << "trial " << trial;
        EXPECT_LE(residual_inf(am, r.x, DenseVector(b)), 1e-9);
    }
}

TEST(weighted_l1, objective_scales_with_weights) {
    std::mt19937_64 gen(77);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> weight(0.1, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t m = 8, n = 20;
        std::vector<double> a(m * n), w(n), b(m);
        for (auto& v : a) v = g(gen);
        for (auto& v : w) v = weight(gen);
        for (auto& v : b) v = g(gen);
        const DenseMatrix am(m, n, a);
        const auto base = weighted_l1_lp_detailed(DenseVector(w), am, DenseVector(b));
        for (double lambda : {10.0, 0.25}) {
            std::vector<double> ws(w);
            for (auto& v : ws) v *= lambda;
            const auto scaled = weighted_l1_lp_detailed(DenseVector(ws), am, DenseVector(b));
            EXPECT_NEAR(scaled.objective / lambda, base.objective, 1e-9 * (1.0 + base.objective));
            // The scaled problem's minimizer is also optimal for the original weights.
            double obj = 0.0;
            for (std::size_t j = 0; j < n; ++j) obj += w[j] * std::abs(scaled.x[j]);
            EXPECT_NEAR(obj, base.objective, 1e-9 * (1.0 + base.objective));
        }
    }
}

TEST(lu, solves_random_systems) {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> g;
    const std::size_t n = 12;
    std::vector<double> mcol(n * n), x(n), rhs(n, 0.0);
    for (auto& v : mcol) v = g(gen);
    for (auto& v : x) v = g(gen);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rhs[i] += mcol[j * n + i] * x[j];
    detail::LuFactor lu;
    ASSERT_TRUE(lu.factor(mcol, n));
    lu.solve(rhs);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(rhs[i], x[i], 1e-10);
    EXPECT_FALSE(lu.factor(std::vector<double>(n * n, 1.0), n));
}

TEST(weighted_l1, one_sparse_nonnegative_matrices) {
    // b is a multiple of one column of an entrywise-positive matrix: both
    // phases are heavily degenerate and the bases poorly conditioned.
    for (const auto& d : {DistributionSpec{dist::Uniform{}}, DistributionSpec{dist::Poisson{}},
                          DistributionSpec{dist::Gamma{}}, DistributionSpec{dist::FDist{}}}) {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const auto inst = make_instance(d, 50, 200, 1, 1000 + seed);
            const auto x = weighted_l1_lp(DenseVector(std::vector<double>(200, 1.0)), inst.a, inst.b);
            EXPECT_LE(residual_inf(inst.a, x, inst.b), 1e-9);
            EXPECT_LE(norm1(x.values()), norm1(inst.x_true.values()) + 1e-9);
        }
    }
}
