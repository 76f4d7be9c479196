#pragma once

// Dense complex matrices and the small set of operations the detectors need.
// Sizes here are tiny (K x K systems with K <= 64), so a straightforward
// row-major implementation with a Cholesky solver is all that is required.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "quplink/errors.hpp"

namespace quplink {

using cxd = std::complex<double>;

class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix eye(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            eye(i, i) = 1.0;
        }
        return eye;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cxd& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cxd& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    cxd* row(std::size_t r) { return data_.data() + r * cols_; }
    const cxd* row(std::size_t r) const { return data_.data() + r * cols_; }

    cxd* data() { return data_.data(); }
    const cxd* data() const { return data_.data(); }

    std::string shape_string() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cxd> data_;
};

inline ComplexMatrix hermitian_transpose(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            out(c, r) = std::conj(a(r, c));
        }
    }
    return out;
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: incompatible shapes " + a.shape_string() + " and " +
                             b.shape_string());
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cxd aik = a(i, k);
            const cxd* brow = b.row(k);
            cxd* orow = out.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                orow[j] += aik * brow[j];
            }
        }
    }
    return out;
}

// H^H H, symmetrized so the result is exactly Hermitian despite rounding.
inline ComplexMatrix gram(const ComplexMatrix& h) {
    const std::size_t k = h.cols();
    ComplexMatrix g(k, k);
    for (std::size_t m = 0; m < h.rows(); ++m) {
        const cxd* hrow = h.row(m);
        for (std::size_t i = 0; i < k; ++i) {
            const cxd hmi = std::conj(hrow[i]);
            for (std::size_t j = i; j < k; ++j) {
                g(i, j) += hmi * hrow[j];
            }
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        g(i, i) = cxd(g(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < k; ++j) {
            const cxd upper = g(i, j);
            g(i, j) = upper;
            g(j, i) = std::conj(upper);
        }
    }
    return g;
}

// Solves A X = B for Hermitian positive definite A via Cholesky (A = L L^H).
// Only the lower triangle of A is read.
inline ComplexMatrix solve_hpd(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.rows();
    if (a.cols() != n) {
        throw DimensionError("solve_hpd: matrix is not square, shape " + a.shape_string());
    }
    if (b.rows() != n) {
        throw DimensionError("solve_hpd: right-hand side has " + std::to_string(b.rows()) +
                             " rows, expected " + std::to_string(n));
    }

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_diag = std::max(max_diag, std::abs(a(i, i).real()));
    }
    const double pivot_floor = 1e-12 * max_diag;

    ComplexMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) {
            d -= std::norm(l(j, k));
        }
        if (!(d > pivot_floor)) {
            throw NotPositiveDefiniteError(
                "solve_hpd: matrix is not positive definite (pivot " + std::to_string(d) +
                " at index " + std::to_string(j) + ")");
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cxd s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l(i, k) * std::conj(l(j, k));
            }
            l(i, j) = s / ljj;
        }
    }

    // Forward substitution L Y = B, then back substitution L^H X = Y.
    ComplexMatrix x = b;
    for (std::size_t col = 0; col < b.cols(); ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            cxd s = x(i, col);
            for (std::size_t k = 0; k < i; ++k) {
                s -= l(i, k) * x(k, col);
            }
            x(i, col) = s / l(i, i).real();
        }
        for (std::size_t ii = n; ii-- > 0;) {
            cxd s = x(ii, col);
            for (std::size_t k = ii + 1; k < n; ++k) {
                s -= std::conj(l(k, ii)) * x(k, col);
            }
            x(ii, col) = s / l(ii, ii).real();
        }
    }
    return x;
}

inline double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("max_abs_difference: shapes " + a.shape_string() + " and " +
                             b.shape_string() + " differ");
    }
    double worst = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
        }
    }
    return worst;
}

}  // namespace quplink
