#ifndef SU3BETHE_LINALG_HPP
#define SU3BETHE_LINALG_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "su3bethe/scalar.hpp"

namespace su3bethe {

template <Scalar S>
class Matrix {
  public:
    Matrix() : n_(0) {}
    explicit Matrix(std::size_t n) : n_(n), data_(n * n, scalar_traits<S>::zero()) {}

    std::size_t size() const { return n_; }
    S& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  private:
    std::size_t n_;
    std::vector<S> data_;
};

namespace detail {

// Fraction-free (Bareiss) elimination; every division is exact, so rational
// inputs give the exact determinant.
template <Scalar S>
S determinant_bareiss(Matrix<S> a) {
    const std::size_t n = a.size();
    if (n == 0) return scalar_traits<S>::one();
    int sign = 1;
    S prev = scalar_traits<S>::one();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (is_zero(a(k, k))) {
            std::size_t p = k + 1;
            while (p < n && is_zero(a(p, k))) ++p;
            if (p == n) return scalar_traits<S>::zero();
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(k, k) * a(i, j) - a(i, k) * a(k, j)) / prev;
            a(i, k) = scalar_traits<S>::zero();
        }
        prev = a(k, k);
    }
    S det = a(n - 1, n - 1);
    return sign < 0 ? -det : det;
}

// LU with implicit row-scaled partial pivoting. A scaled pivot below 1e-13
// before the last elimination step flags the matrix as numerically singular;
// a tiny final pivot is an honest near-zero determinant and is returned.
template <Scalar S>
S determinant_lu(Matrix<S> a) {
    const std::size_t n = a.size();
    if (n == 0) return scalar_traits<S>::one();
    std::vector<double> row_scale(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            row_scale[i] = std::max(row_scale[i], scalar_traits<S>::approx_abs(a(i, j)));
        if (row_scale[i] == 0.0) return scalar_traits<S>::zero();
    }
    S det = scalar_traits<S>::one();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = scalar_traits<S>::approx_abs(a(k, k)) / row_scale[k];
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = scalar_traits<S>::approx_abs(a(i, k)) / row_scale[i];
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0) return scalar_traits<S>::zero();
        if (best < 1e-13 && k + 1 < n)
            throw SingularError("determinant: scaled pivot below 1e-13");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(row_scale[k], row_scale[p]);
            det = -det;
        }
        det = det * a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            S m = a(i, k) / a(k, k);
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) = a(i, j) - m * a(k, j);
        }
    }
    return det;
}

} // namespace detail

template <Scalar S>
S determinant(const Matrix<S>& a) {
    if constexpr (scalar_traits<S>::is_exact)
        return detail::determinant_bareiss(a);
    else
        return detail::determinant_lu(a);
}

} // namespace su3bethe

#endif
