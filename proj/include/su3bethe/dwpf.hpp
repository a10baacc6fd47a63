#ifndef SU3BETHE_DWPF_HPP
#define SU3BETHE_DWPF_HPP

#include "su3bethe/kernels.hpp"
#include "su3bethe/linalg.hpp"

namespace su3bethe {

// Domain-wall partition function
//   K_n(x|y) = Delta'_n(x) Delta_n(y) h(x,y) det_n t(x_j, y_k),   K_0 = 1,
// symmetric in x and in y separately.

/// Delta'_n = prod_{j>k} g(x_j, x_k)
template <Scalar S>
S delta_prime(const VarSet<S>& xs, const S& c) {
    S acc = scalar_traits<S>::one();
    for (std::size_t j = 0; j < xs.size(); ++j)
        for (std::size_t k = 0; k < j; ++k) acc = acc * kernel::g(xs[j], xs[k], c);
    return acc;
}

/// Delta_n = prod_{j<k} g(x_j, x_k)
template <Scalar S>
S delta_plain(const VarSet<S>& xs, const S& c) {
    S acc = scalar_traits<S>::one();
    for (std::size_t j = 0; j < xs.size(); ++j)
        for (std::size_t k = j + 1; k < xs.size(); ++k) acc = acc * kernel::g(xs[j], xs[k], c);
    return acc;
}

template <Scalar S>
S delta_products(const VarSet<S>& xs, bool primed, const S& c) {
    return primed ? delta_prime(xs, c) : delta_plain(xs, c);
}

template <Scalar S>
S dwpf(const VarSet<S>& xs, const VarSet<S>& ys, const S& c) {
    if (xs.size() != ys.size()) throw CardinalityError("dwpf: |x| != |y|");
    const std::size_t n = xs.size();
    if (n == 0) return scalar_traits<S>::one();
    // The h(x,y) row products are folded into the determinant, turning the
    // entries into g(x_j,y_k) prod_{k'!=k} h(x_j,y_k'). The apparent t-pole
    // at x_j - y_k = -c cancels against its own h factor, so K_n is defined
    // everywhere except at the genuine poles x_j = y_k.
    Matrix<S> m(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<S> hrow(n);
        for (std::size_t k = 0; k < n; ++k) hrow[k] = kernel::h(xs[j], ys[k], c);
        for (std::size_t k = 0; k < n; ++k) {
            S entry = kernel::g(xs[j], ys[k], c);
            for (std::size_t k2 = 0; k2 < n; ++k2)
                if (k2 != k) entry = entry * hrow[k2];
            m(j, k) = entry;
        }
    }
    return delta_prime(xs, c) * delta_plain(ys, c) * determinant(m);
}

} // namespace su3bethe

#endif
