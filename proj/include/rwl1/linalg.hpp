#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rwl1/errors.hpp"

namespace rwl1 {

namespace detail {

inline void require_finite(std::span<const double> values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw InputError(std::string(what) + ": non-finite entry at index " +
                             std::to_string(i));
        }
    }
}

} // namespace detail

/// Real vector with finite entries.
class DenseVector {
public:
    DenseVector() = default;

    explicit DenseVector(std::vector<double> values) : data_(std::move(values)) {
        detail::require_finite(data_, "DenseVector");
    }

    DenseVector(std::initializer_list<double> values)
        : DenseVector(std::vector<double>(values)) {}

    static DenseVector zeros(std::size_t n) { return DenseVector(std::vector<double>(n, 0.0)); }

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    double operator[](std::size_t i) const { return data_[i]; }
    std::span<const double> values() const noexcept { return data_; }
    const std::vector<double>& vector() const noexcept { return data_; }

    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    friend bool operator==(const DenseVector&, const DenseVector&) = default;

private:
    std::vector<double> data_;
};

/// Row-major real matrix with finite entries.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw InputError("DenseMatrix: data length " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(rows_) + "x" +
                             std::to_string(cols_));
        }
        detail::require_finite(data_, "DenseMatrix");
    }

    static DenseMatrix zeros(std::size_t rows, std::size_t cols) {
        return DenseMatrix(rows, cols, std::vector<double>(rows * cols, 0.0));
    }

    static DenseMatrix identity(std::size_t n) {
        std::vector<double> data(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) data[i * n + i] = 1.0;
        return DenseMatrix(n, n, std::move(data));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data_).subspan(i * cols_, cols_);
    }
    std::span<const double> values() const noexcept { return data_; }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline DenseVector mat_vec(const DenseMatrix& a, const DenseVector& x) {
    if (x.size() != a.cols()) {
        throw InputError("mat_vec: matrix has " + std::to_string(a.cols()) +
                         " columns but vector has length " + std::to_string(x.size()));
    }
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        const auto row = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) acc += row[j] * x[j];
        out[i] = acc;
    }
    return DenseVector(std::move(out));
}

/// Number of entries with |x_i| > tol.
inline std::size_t count_nonzeros(std::span<const double> x, double tol) {
    if (!(tol > 0.0)) throw InputError("count_nonzeros: tol must be positive");
    return static_cast<std::size_t>(
        std::count_if(x.begin(), x.end(), [tol](double v) { return std::abs(v) > tol; }));
}

inline std::size_t count_nonzeros(const DenseVector& x, double tol) {
    return count_nonzeros(x.values(), tol);
}

inline double norm_inf(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

inline double norm1(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
}

/// ‖a·x − b‖_∞
inline double residual_inf(const DenseMatrix& a, const DenseVector& x, const DenseVector& b) {
    const DenseVector ax = mat_vec(a, x);
    if (b.size() != ax.size()) throw InputError("residual_inf: b length mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) m = std::max(m, std::abs(ax[i] - b[i]));
    return m;
}

namespace detail {

/// LU factorization with partial pivoting of a square column-major matrix.
/// Used by the simplex for basis refactorization and final solves.
class LuFactor {
public:
    LuFactor() = default;

    /// Returns false when a pivot falls below `singular_tol` (matrix numerically singular).
    bool factor(std::vector<double> col_major, std::size_t n, double singular_tol = 1e-13) {
        n_ = n;
        lu_ = std::move(col_major);
        perm_.resize(n);
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        double scale = 0.0;
        for (double v : lu_) scale = std::max(scale, std::abs(v));
        const double tol = singular_tol * std::max(scale, 1.0);
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            double best = std::abs(at(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                if (std::abs(at(i, k)) > best) {
                    best = std::abs(at(i, k));
                    piv = i;
                }
            }
            if (best <= tol) return false;
            if (piv != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
                std::swap(perm_[k], perm_[piv]);
            }
            const double inv = 1.0 / at(k, k);
            for (std::size_t i = k + 1; i < n; ++i) at(i, k) *= inv;
            for (std::size_t j = k + 1; j < n; ++j) {
                const double ukj = at(k, j);
                if (ukj == 0.0) continue;
                for (std::size_t i = k + 1; i < n; ++i) at(i, j) -= at(i, k) * ukj;
            }
        }
        return true;
    }

    /// Solves M·x = rhs in place.
    void solve(std::span<double> rhs) const {
        std::vector<double> y(n_);
        for (std::size_t i = 0; i < n_; ++i) y[i] = rhs[perm_[i]];
        for (std::size_t j = 0; j < n_; ++j) {
            const double yj = y[j];
            if (yj == 0.0) continue;
            for (std::size_t i = j + 1; i < n_; ++i) y[i] -= at(i, j) * yj;
        }
        for (std::size_t jj = n_; jj-- > 0;) {
            y[jj] /= at(jj, jj);
            const double yj = y[jj];
            if (yj == 0.0) continue;
            for (std::size_t i = 0; i < jj; ++i) y[i] -= at(i, jj) * yj;
        }
        std::copy(y.begin(), y.end(), rhs.begin());
    }

    std::size_t size() const noexcept { return n_; }

private:
    double& at(std::size_t i, std::size_t j) { return lu_[j * n_ + i]; }
    double at(std::size_t i, std::size_t j) const { return lu_[j * n_ + i]; }

    std::size_t n_ = 0;
    std::vector<double> lu_;
    std::vector<std::size_t> perm_;
};

} // namespace detail

} // namespace rwl1
