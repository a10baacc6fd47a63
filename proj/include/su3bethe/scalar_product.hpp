#ifndef SU3BETHE_SCALAR_PRODUCT_HPP
#define SU3BETHE_SCALAR_PRODUCT_HPP

#include <optional>
#include <utility>
#include <vector>

#include "su3bethe/identities.hpp"

namespace su3bethe {

// Scalar product S_{a,b} of an on-shell Bethe vector (sets uB, vB) with a
// twisted on-shell dual vector (sets uC, vC, twist kappa), in the generalized
// model where r1, r3 are free functional parameters known only at the 2a+2b
// Bethe points. Two independent evaluations are provided: the partition-sum
// oracle and the block-determinant representation, plus the intermediate
// sums of the derivation chain.

template <Scalar S>
S pow_int(const S& x, int n) {
    S acc = scalar_traits<S>::one();
    for (int i = 0; i < n; ++i) acc = acc * x;
    return acc;
}

template <Scalar S>
struct BetheData {
    VarSet<S> uC, uB, vC, vB;
    // r-values aligned with the sets above; empty when the instance is used
    // only for r-free constructions (explicit block matrix, omega tests).
    std::vector<S> r1_uC, r1_uB, r3_vC, r3_vB;
    S kappa{};
    S c{};

    int a() const { return static_cast<int>(uB.size()); }
    int b() const { return static_cast<int>(vB.size()); }

    bool has_rvalues() const {
        return r1_uC.size() == uC.size() && r1_uB.size() == uB.size() &&
               r3_vC.size() == vC.size() && r3_vB.size() == vB.size();
    }
};

namespace detail {

// Single-root Bethe systems. The B-sets satisfy the untwisted system, the
// C-sets the kappa-twisted one; in the generalized model these simply define
// the r-values at each point.
template <Scalar S>
S bethe_r1(const VarSet<S>& u, std::size_t j, const VarSet<S>& v, const S& kappa, const S& c) {
    S acc = kappa;
    for (std::size_t l = 0; l < u.size(); ++l) {
        if (l == j) continue;
        acc = acc * kernel::f(u[j], u[l], c) / kernel::f(u[l], u[j], c);
    }
    for (const auto& vm : v) acc = acc * kernel::f(vm, u[j], c);
    return acc;
}

template <Scalar S>
S bethe_r3(const VarSet<S>& v, std::size_t m, const VarSet<S>& u, const S& kappa, const S& c) {
    S acc = kappa;
    for (std::size_t n = 0; n < v.size(); ++n) {
        if (n == m) continue;
        acc = acc * kernel::f(v[n], v[m], c) / kernel::f(v[m], v[n], c);
    }
    for (const auto& uj : u) acc = acc * kernel::f(v[m], uj, c);
    return acc;
}

/// g^{-1}(A, y) = prod (a - y)/c: polynomial, safe at every coincidence.
template <Scalar S>
S ginv(const VarSet<S>& A, const S& y, const S& c) {
    S acc = scalar_traits<S>::one();
    for (const auto& a : A) acc = acc * (a - y) / c;
    return acc;
}

template <Scalar S>
S ginv(const S& x, const VarSet<S>& B, const S& c) {
    S acc = scalar_traits<S>::one();
    for (const auto& b : B) acc = acc * (x - b) / c;
    return acc;
}

} // namespace detail

/// Declare arbitrary root sets on-shell (B) / twisted on-shell (C) by
/// computing the r-values the Bethe systems require at every point.
template <Scalar S>
BetheData<S> make_onshell_data(const VarSet<S>& uB, const VarSet<S>& vB, const VarSet<S>& uC,
                               const VarSet<S>& vC, const S& kappa, const S& c) {
    if (uB.size() != uC.size() || vB.size() != vC.size())
        throw CardinalityError("make_onshell_data: |uB| != |uC| or |vB| != |vC|");
    BetheData<S> d;
    d.uC = uC;
    d.uB = uB;
    d.vC = vC;
    d.vB = vB;
    d.kappa = kappa;
    d.c = c;
    const S one = scalar_traits<S>::one();
    for (std::size_t j = 0; j < uB.size(); ++j) d.r1_uB.push_back(detail::bethe_r1(uB, j, vB, one, c));
    for (std::size_t m = 0; m < vB.size(); ++m) d.r3_vB.push_back(detail::bethe_r3(vB, m, uB, one, c));
    for (std::size_t j = 0; j < uC.size(); ++j) d.r1_uC.push_back(detail::bethe_r1(uC, j, vC, kappa, c));
    for (std::size_t m = 0; m < vC.size(); ++m) d.r3_vC.push_back(detail::bethe_r3(vC, m, uC, kappa, c));
    // r1, r3 are single functions; a point shared between a B-set and a
    // C-set must receive one value.
    for (std::size_t j = 0; j < uB.size(); ++j)
        for (std::size_t k = 0; k < uC.size(); ++k)
            if (is_zero(uB[j] - uC[k]) && !is_zero(d.r1_uB[j] - d.r1_uC[k]))
                throw ConflictError("make_onshell_data: inconsistent r1 at a shared u-point");
    for (std::size_t m = 0; m < vB.size(); ++m)
        for (std::size_t n = 0; n < vC.size(); ++n)
            if (is_zero(vB[m] - vC[n]) && !is_zero(d.r3_vB[m] - d.r3_vC[n]))
                throw ConflictError("make_onshell_data: inconsistent r3 at a shared v-point");
    return d;
}

// ---------------------------------------------------------------------------
// Partition-sum oracle (the Reshetikhin sum over four set partitions).
// ---------------------------------------------------------------------------

inline constexpr int kOracleSizeCap = 5;

template <Scalar S>
S scalar_product_oracle(const BetheData<S>& d) {
    const int a = d.a();
    const int b = d.b();
    if (a > kOracleSizeCap || b > kOracleSizeCap)
        throw SizeError("scalar_product_oracle: a,b capped at 5");
    if (!d.has_rvalues()) throw Error("scalar_product_oracle: r-values missing");
    const S& c = d.c;
    S total = scalar_traits<S>::zero();
    for (int k = 0; k <= a; ++k) {
        for (int n = 0; n <= b; ++n) {
            for_each_split(a, k, [&](const std::vector<int>& uCI, const std::vector<int>& uCII) {
                VarSet<S> uC_I = select(d.uC, uCI), uC_II = select(d.uC, uCII);
                S r1_uCII = scalar_traits<S>::one();
                for (int i : uCII) r1_uCII = r1_uCII * d.r1_uC[static_cast<std::size_t>(i)];
                S fu_C = set_product(Kernel::F, uC_I, uC_II, c);
                for_each_split(a, k, [&](const std::vector<int>& uBI, const std::vector<int>& uBII) {
                    VarSet<S> uB_I = select(d.uB, uBI), uB_II = select(d.uB, uBII);
                    S r1_uBI = scalar_traits<S>::one();
                    for (int i : uBI) r1_uBI = r1_uBI * d.r1_uB[static_cast<std::size_t>(i)];
                    S fu_B = set_product(Kernel::F, uB_II, uB_I, c);
                    for_each_split(b, n, [&](const std::vector<int>& vCI, const std::vector<int>& vCII) {
                        VarSet<S> vC_I = select(d.vC, vCI), vC_II = select(d.vC, vCII);
                        S r3_vCII = scalar_traits<S>::one();
                        for (int i : vCII) r3_vCII = r3_vCII * d.r3_vC[static_cast<std::size_t>(i)];
                        S fv_C = set_product(Kernel::F, vC_II, vC_I, c);
                        for_each_split(b, n, [&](const std::vector<int>& vBI, const std::vector<int>& vBII) {
                            VarSet<S> vB_I = select(d.vB, vBI), vB_II = select(d.vB, vBII);
                            S r3_vBI = scalar_traits<S>::one();
                            for (int i : vBI) r3_vBI = r3_vBI * d.r3_vB[static_cast<std::size_t>(i)];
                            S term = r1_uBI * r1_uCII * r3_vBI * r3_vCII * fu_C * fu_B * fv_C *
                                     set_product(Kernel::F, vB_I, vB_II, c) *
                                     set_product(Kernel::F, vC_I, uC_I, c) *
                                     set_product(Kernel::F, vB_II, uB_II, c) *
                                     highest_coeff_first(uC_II, uB_II, vC_I, vB_I, c) *
                                     highest_coeff_second(uB_I, uC_I, vB_II, vC_II, c);
                            total = total + term;
                        });
                    });
                });
            });
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Block matrix N of the determinant representation.
// Columns 0..a-1 sit at the uB points, columns a..a+b-1 at the vC points.
// Rows 0..a-1 are labeled by uC, rows a..a+b-1 by vB.
// ---------------------------------------------------------------------------

enum class BlockConstruction { Explicit, Jacobian };

namespace detail {

// Explicit entries: the Bethe equations are already substituted, so only the
// root sets and kappa enter. Arranged through g^{-1} so that the spurious
// coincidences v_C - u_B in {0, -c} stay finite.
template <Scalar S>
struct ExplicitBlocks {
    const BetheData<S>& d;

    S upper_uB(std::size_t j, std::size_t k) const {
        const S& c = d.c;
        const S& w = d.uB[k];
        S term1 = kprod(Kernel::H, d.vC, w, c) * kprod(Kernel::H, w, d.uC, c) * d.kappa *
                  kernel::t(w, d.uC[j], c);
        S term2 = kernel::t(d.uC[j], w, c) * kprod(Kernel::F, d.vB, w, c) * ginv(d.vC, w, c) *
                  kprod(Kernel::H, d.uC, w, c) * kprod(Kernel::H, w, d.uB, c) /
                  kprod(Kernel::H, d.uB, w, c);
        return term1 + term2;
    }

    S upper_vC(std::size_t j, std::size_t k) const {
        const S& c = d.c;
        const S& w = d.vC[k];
        return d.kappa * kernel::t(w, d.uC[j], c) * kprod(Kernel::H, w, d.uC, c) *
               kprod(Kernel::H, d.vC, w, c);
    }

    S lower_uB(std::size_t j, std::size_t k) const {
        const S& c = d.c;
        const S& w = d.uB[k];
        return kernel::t(d.vB[j], w, c) * kprod(Kernel::H, d.vB, w, c) * kprod(Kernel::H, w, d.uB, c);
    }

    S lower_vC(std::size_t j, std::size_t k) const {
        const S& c = d.c;
        const S& w = d.vC[k];
        S term1 = kprod(Kernel::H, w, d.uB, c) * kprod(Kernel::H, d.vB, w, c) *
                  kernel::t(d.vB[j], w, c);
        S term2 = d.kappa * kernel::t(w, d.vB[j], c) * kprod(Kernel::F, w, d.uC, c) *
                  ginv(w, d.uB, c) * kprod(Kernel::H, d.vC, w, c) * kprod(Kernel::H, w, d.vB, c) /
                  kprod(Kernel::H, w, d.vC, c);
        return term1 + term2;
    }
};

// Jacobian entries: partial derivatives of the (twisted) transfer-matrix
// eigenvalue with r1, r3 kept as free functions, evaluated at the column
// point; the r-values enter through the data maps.
template <Scalar S>
struct JacobianBlocks {
    const BetheData<S>& d;
    S sign_a;
    S sign_b;

    explicit JacobianBlocks(const BetheData<S>& data) : d(data) {
        sign_a = (d.a() % 2 == 0) ? -scalar_traits<S>::one() : scalar_traits<S>::one(); // (-1)^{a+1}
        sign_b = (d.b() % 2 == 0) ? -scalar_traits<S>::one() : scalar_traits<S>::one(); // (-1)^{b+1}
    }

    S upper(std::size_t j, const S& w, const S* r1_at_w) const {
        const S& c = d.c;
        S entry = d.kappa * kernel::t(w, d.uC[j], c) * kprod(Kernel::H, w, d.uC, c) *
                  kprod(Kernel::H, d.vC, w, c);
        if (r1_at_w != nullptr)
            entry = entry + sign_a * (*r1_at_w) * kernel::t(d.uC[j], w, c) *
                                kprod(Kernel::H, d.uC, w, c) * ginv(d.vC, w, c);
        return entry;
    }

    S lower(std::size_t j, const S& w, const S* r3_at_w) const {
        const S& c = d.c;
        S entry = kernel::t(d.vB[j], w, c) * kprod(Kernel::H, d.vB, w, c) *
                  kprod(Kernel::H, w, d.uB, c);
        if (r3_at_w != nullptr)
            entry = entry + sign_b * (*r3_at_w) * kernel::t(w, d.vB[j], c) *
                                kprod(Kernel::H, w, d.vB, c) * ginv(w, d.uB, c);
        return entry;
    }
};

} // namespace detail

template <Scalar S>
Matrix<S> build_block_matrix(const BetheData<S>& d, BlockConstruction construction) {
    const std::size_t a = d.uB.size();
    const std::size_t b = d.vB.size();
    Matrix<S> m(a + b);
    if (construction == BlockConstruction::Explicit) {
        detail::ExplicitBlocks<S> e{d};
        for (std::size_t j = 0; j < a; ++j) {
            for (std::size_t k = 0; k < a; ++k) m(j, k) = e.upper_uB(j, k);
            for (std::size_t k = 0; k < b; ++k) m(j, a + k) = e.upper_vC(j, k);
        }
        for (std::size_t j = 0; j < b; ++j) {
            for (std::size_t k = 0; k < a; ++k) m(a + j, k) = e.lower_uB(j, k);
            for (std::size_t k = 0; k < b; ++k) m(a + j, a + k) = e.lower_vC(j, k);
        }
    } else {
        if (!d.has_rvalues()) throw Error("Jacobian construction needs r-values");
        detail::JacobianBlocks<S> jb(d);
        for (std::size_t j = 0; j < a; ++j) {
            for (std::size_t k = 0; k < a; ++k) m(j, k) = jb.upper(j, d.uB[k], &d.r1_uB[k]);
            for (std::size_t k = 0; k < b; ++k) m(j, a + k) = jb.upper(j, d.vC[k], nullptr);
        }
        for (std::size_t j = 0; j < b; ++j) {
            for (std::size_t k = 0; k < a; ++k) m(a + j, k) = jb.lower(j, d.uB[k], nullptr);
            for (std::size_t k = 0; k < b; ++k) m(a + j, a + k) = jb.lower(j, d.vC[k], &d.r3_vC[k]);
        }
    }
    return m;
}

/// Explicit construction with a fallback for entries that sit on a pole
/// (partial-coincidence configurations): such rows are multiplied by a
/// vanishing omega component, and the determinant vanishes through the
/// remaining rows, so any finite fill value is admissible.
template <Scalar S, class FillFn>
Matrix<S> build_block_matrix_with_fill(const BetheData<S>& d, FillFn fill) {
    const std::size_t a = d.uB.size();
    const std::size_t b = d.vB.size();
    detail::ExplicitBlocks<S> e{d};
    Matrix<S> m(a + b);
    auto entry = [&](auto&& compute) {
        try {
            return compute();
        } catch (const PoleError&) {
            return fill();
        }
    };
    for (std::size_t j = 0; j < a; ++j) {
        for (std::size_t k = 0; k < a; ++k) m(j, k) = entry([&] { return e.upper_uB(j, k); });
        for (std::size_t k = 0; k < b; ++k) m(j, a + k) = entry([&] { return e.upper_vC(j, k); });
    }
    for (std::size_t j = 0; j < b; ++j) {
        for (std::size_t k = 0; k < a; ++k) m(a + j, k) = entry([&] { return e.lower_uB(j, k); });
        for (std::size_t k = 0; k < b; ++k) m(a + j, a + k) = entry([&] { return e.lower_vC(j, k); });
    }
    return m;
}

/// Prefactor of the determinant representation.
template <Scalar S>
S det_prefactor(const BetheData<S>& d) {
    const S& c = d.c;
    return set_product(Kernel::F, d.vC, d.uC, c) * set_product(Kernel::F, d.vB, d.uB, c) *
           set_product(Kernel::T, d.vC, d.uB, c) * delta_prime(d.uC, c) * delta_plain(d.uB, c) *
           delta_prime(d.vC, c) * delta_plain(d.vB, c);
}

template <Scalar S>
S scalar_product_det(const BetheData<S>& d, BlockConstruction construction = BlockConstruction::Explicit) {
    return det_prefactor(d) * determinant(build_block_matrix(d, construction));
}

// ---------------------------------------------------------------------------
// Norm of an eigenvector: the merged limit uC = uB = u, vC = vB = v, kappa = 1,
// X1_k = r1'(u_k)/r1(u_k), X3_k = r3'(v_k)/r3(v_k).
// ---------------------------------------------------------------------------

template <Scalar S>
Matrix<S> norm_matrix(const VarSet<S>& u, const VarSet<S>& v, const std::vector<S>& X1,
                      const std::vector<S>& X3, const S& c) {
    const std::size_t a = u.size();
    const std::size_t b = v.size();
    const S two = int_to<S>(2);
    const S c2 = c * c;
    Matrix<S> m(a + b);
    auto pair_term = [&](const S& x, const S& y) {
        S den = (x - y) * (x - y) - c2;
        if (is_zero(den)) throw PoleError("norm matrix pole: (x-y)^2 = c^2");
        return two * c2 / den;
    };
    for (std::size_t j = 0; j < a; ++j) {
        for (std::size_t k = 0; k < a; ++k) {
            S e = pair_term(u[j], u[k]);
            if (j == k) {
                S diag = -c * X1[k];
                for (std::size_t l = 0; l < a; ++l) diag = diag - pair_term(u[k], u[l]);
                for (std::size_t mm = 0; mm < b; ++mm) diag = diag + kernel::t(v[mm], u[k], c);
                e = e + diag;
            }
            m(j, k) = e;
        }
        for (std::size_t k = 0; k < b; ++k) m(j, a + k) = kernel::t(v[k], u[j], c);
    }
    for (std::size_t j = 0; j < b; ++j) {
        // merged limit of the lower-left explicit block keeps the t(v_j, u_k)
        // orientation (the u-column factor is shared with the upper block)
        for (std::size_t k = 0; k < a; ++k) m(a + j, k) = kernel::t(v[j], u[k], c);
        for (std::size_t k = 0; k < b; ++k) {
            S e = pair_term(v[j], v[k]);
            if (j == k) {
                S diag = c * X3[k];
                for (std::size_t n = 0; n < b; ++n) diag = diag - pair_term(v[k], v[n]);
                for (std::size_t l = 0; l < a; ++l) diag = diag + kernel::t(v[k], u[l], c);
                e = e + diag;
            }
            m(a + j, a + k) = e;
        }
    }
    return m;
}

template <Scalar S>
S norm_det(const VarSet<S>& u, const VarSet<S>& v, const std::vector<S>& X1, const std::vector<S>& X3,
           const S& c) {
    if (X1.size() != u.size() || X3.size() != v.size())
        throw CardinalityError("norm_det: X-value count mismatch");
    S pref = pow_int(set_product(Kernel::F, v, u, c), 3);
    for (std::size_t j = 0; j < u.size(); ++j)
        for (std::size_t k = 0; k < u.size(); ++k)
            if (j != k) pref = pref * kernel::f(u[j], u[k], c);
    for (std::size_t j = 0; j < v.size(); ++j)
        for (std::size_t k = 0; k < v.size(); ++k)
            if (j != k) pref = pref * kernel::f(v[j], v[k], c);
    return pref * determinant(norm_matrix(u, v, X1, X3, c));
}

// ---------------------------------------------------------------------------
// Zero eigenvector at kappa = 1 (orthogonality of distinct on-shell states).
// ---------------------------------------------------------------------------

template <Scalar S>
std::vector<S> omega_vector(const BetheData<S>& d) {
    const std::size_t a = d.uB.size();
    const std::size_t b = d.vB.size();
    if (!is_zero(d.kappa - scalar_traits<S>::one()))
        throw DegenerateError("omega_vector: defined at kappa = 1");
    std::vector<S> omega(a + b, scalar_traits<S>::zero());
    bool all_zero = true;
    for (std::size_t k = 0; k < a; ++k) {
        S num = scalar_traits<S>::one();
        for (std::size_t l = 0; l < a; ++l) num = num * (d.uC[k] - d.uB[l]);
        S den = scalar_traits<S>::one();
        for (std::size_t l = 0; l < a; ++l) {
            if (l == k) continue;
            S diff = d.uC[k] - d.uC[l];
            if (is_zero(diff)) throw PoleError("omega_vector: coincident uC points");
            den = den * diff;
        }
        omega[k] = num / den;
        if (!is_zero(omega[k])) all_zero = false;
    }
    for (std::size_t k = 0; k < b; ++k) {
        S num = scalar_traits<S>::one();
        for (std::size_t m = 0; m < b; ++m) num = num * (d.vB[k] - d.vC[m]);
        S den = scalar_traits<S>::one();
        for (std::size_t m = 0; m < b; ++m) {
            if (m == k) continue;
            S diff = d.vB[k] - d.vB[m];
            if (is_zero(diff)) throw PoleError("omega_vector: coincident vB points");
            den = den * diff;
        }
        omega[a + k] = num / den;
        if (!is_zero(omega[a + k])) all_zero = false;
    }
    if (all_zero)
        throw DegenerateError("omega_vector: coincident states (norm case), zero vector");
    return omega;
}

/// Row action Omega^T N for one column, skipping rows whose Omega component
/// vanishes (those rows are norm-limit rows in the partial-coincidence case
/// and do not contribute).
template <Scalar S>
S omega_column_action(const std::vector<S>& omega, const BetheData<S>& d, std::size_t column) {
    const std::size_t a = d.uB.size();
    const std::size_t b = d.vB.size();
    detail::ExplicitBlocks<S> e{d};
    S acc = scalar_traits<S>::zero();
    for (std::size_t j = 0; j < a; ++j) {
        if (is_zero(omega[j])) continue;
        S entry = (column < a) ? e.upper_uB(j, column) : e.upper_vC(j, column - a);
        acc = acc + omega[j] * entry;
    }
    for (std::size_t j = 0; j < b; ++j) {
        if (is_zero(omega[a + j])) continue;
        S entry = (column < a) ? e.lower_uB(j, column) : e.lower_vC(j, column - a);
        acc = acc + omega[a + j] * entry;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Spurious poles: at vC_iv = uB_iu - c the uB_iu and vC_iv columns of N are
// proportional with ratio r3(vC_iv)/r1(uB_iu), so the determinant vanishes
// and the t-prefactor pole cancels.
// ---------------------------------------------------------------------------

template <Scalar S>
struct SpuriousCheck {
    std::vector<S> ratios_u; // per uC-row column ratio
    std::vector<S> ratios_v; // per vB-row column ratio
    S expected;              // r3(vC_iv) / r1(uB_iu)
    S det;                   // det N at the coincidence
};

template <Scalar S>
SpuriousCheck<S> spurious_pole_check(const BetheData<S>& d, std::size_t iu = 0, std::size_t iv = 0) {
    if (!is_zero(d.vC[iv] - d.uB[iu] + d.c))
        throw Error("spurious_pole_check: data does not satisfy vC - uB + c = 0");
    if (!d.has_rvalues()) throw Error("spurious_pole_check: r-values missing");
    const std::size_t a = d.uB.size();
    const std::size_t b = d.vB.size();
    Matrix<S> n = build_block_matrix(d, BlockConstruction::Jacobian);
    SpuriousCheck<S> out;
    out.expected = d.r3_vC[iv] / d.r1_uB[iu];
    for (std::size_t j = 0; j < a; ++j) {
        if (is_zero(n(j, iu))) throw Error("spurious_pole_check: vanishing reference entry");
        out.ratios_u.push_back(n(j, a + iv) / n(j, iu));
    }
    for (std::size_t j = 0; j < b; ++j) {
        if (is_zero(n(a + j, iu))) throw Error("spurious_pole_check: vanishing reference entry");
        out.ratios_v.push_back(n(a + j, a + iv) / n(a + j, iu));
    }
    out.det = determinant(n);
    return out;
}

// ---------------------------------------------------------------------------
// Intermediate sums of the derivation chain, used as extra oracles.
// ---------------------------------------------------------------------------

inline constexpr int kSubsubsumSizeCap = 2;

/// Shat: the scalar product divided by f(vC,uC) f(vB,uB).
template <Scalar S>
S shat_prefactor(const BetheData<S>& d) {
    return set_product(Kernel::F, d.vC, d.uC, d.c) * set_product(Kernel::F, d.vB, d.uB, d.c);
}

/// Four-way sub-subset sum over uB and vC (the fully refactored intermediate
/// form; combinatorially heavy, capped at a,b <= 2).
template <Scalar S>
S shat_subsubsum(const BetheData<S>& d) {
    const int a = d.a();
    const int b = d.b();
    if (a > kSubsubsumSizeCap || b > kSubsubsumSizeCap)
        throw SizeError("shat_subsubsum: a,b capped at 2");
    if (!d.has_rvalues()) throw Error("shat_subsubsum: r-values missing");
    const S& c = d.c;
    const S one = scalar_traits<S>::one();
    S total = scalar_traits<S>::zero();

    auto F6 = [&](const VarSet<S>& zi, const VarSet<S>& zii, const VarSet<S>& ziii, const VarSet<S>& ziv) {
        return set_product(Kernel::F, zii, zi, c) * set_product(Kernel::F, zii, ziii, c) *
               set_product(Kernel::F, ziv, zi, c) * set_product(Kernel::F, ziv, ziii, c) *
               set_product(Kernel::F, zii, ziv, c) * set_product(Kernel::F, zi, ziii, c);
    };

    for (int ki = 0; ki <= a; ++ki)
        for (int kii = 0; ki + kii <= a; ++kii)
            for (int kiii = 0; ki + kii + kiii <= a; ++kiii) {
                const int kiv = a - ki - kii - kiii;
                for (int ni = 0; ni <= b; ++ni) {
                    const int nii = kiii;
                    const int niii = kii;
                    if (ni + nii + niii > b) continue;
                    const int niv = b - ni - nii - niii;
                    const int k = ki + kiii;
                    const int n = ni + niii;
                    const int u_cards[4] = {ki, kii, kiii, kiv};
                    const int v_cards[4] = {ni, nii, niii, niv};
                    for_each_partition(a, u_cards, [&](const LabeledPartition& pu) {
                        VarSet<S> uB_i = select(d.uB, pu.subsets[0]);
                        VarSet<S> uB_ii = select(d.uB, pu.subsets[1]);
                        VarSet<S> uB_iii = select(d.uB, pu.subsets[2]);
                        VarSet<S> uB_iv = select(d.uB, pu.subsets[3]);
                        S r1_prod = one;
                        for (int i : pu.subsets[0]) r1_prod = r1_prod * d.r1_uB[static_cast<std::size_t>(i)];
                        for (int i : pu.subsets[2]) r1_prod = r1_prod * d.r1_uB[static_cast<std::size_t>(i)];
                        S Fu = F6(uB_i, uB_ii, uB_iii, uB_iv);
                        for_each_partition(b, v_cards, [&](const LabeledPartition& pv) {
                            VarSet<S> vC_i = select(d.vC, pv.subsets[0]);
                            VarSet<S> vC_ii = select(d.vC, pv.subsets[1]);
                            VarSet<S> vC_iii = select(d.vC, pv.subsets[2]);
                            VarSet<S> vC_iv = select(d.vC, pv.subsets[3]);
                            S r3_prod = one;
                            for (int i : pv.subsets[1]) r3_prod = r3_prod * d.r3_vC[static_cast<std::size_t>(i)];
                            for (int i : pv.subsets[3]) r3_prod = r3_prod * d.r3_vC[static_cast<std::size_t>(i)];
                            S term = pow_int(d.kappa, a - k) * r1_prod * r3_prod *
                                     set_product(Kernel::F, vC_i, uB_iv, c) /
                                     set_product(Kernel::F, vC_iv, uB_i, c) * Fu *
                                     F6(vC_i, vC_ii, vC_iii, vC_iv) *
                                     set_product(Kernel::F, d.vB, vC_i, c) *
                                     set_product(Kernel::F, d.vB, uB_ii, c) *
                                     set_product(Kernel::F, vC_iii, d.uC, c) *
                                     set_product(Kernel::F, uB_iv, d.uC, c) *
                                     dwpf(uB_ii, vC_iii, c) * dwpf(shifted(vC_ii, c), uB_iii, c) *
                                     dwpf(unite(shifted(vC_i, -c), shifted(uB_ii, -c), shifted(uB_iii, -c), vC_iv),
                                          d.vB, c) *
                                     dwpf(d.uC,
                                          unite(uB_i, shifted(vC_ii, c), shifted(vC_iii, c), shifted(uB_iv, c)),
                                          c);
                            if ((a + k + n) % 2 != 0) term = -term;
                            total = total + term;
                        });
                    });
                }
            }
    return total;
}

namespace detail {

// L-tilde determinants: lemma-2 style determinants over a mixed column set.
// Columns from uB carry the r1 term, columns from vC kill it through
// f^{-1}(vC, .) = 0 (and symmetrically for the lower block).
template <Scalar S>
S ltilde_u(const BetheData<S>& d, const VarSet<S>& cols_uB, const std::vector<std::size_t>& idx_uB,
           const VarSet<S>& cols_vC) {
    const std::size_t a = d.uC.size();
    const S& c = d.c;
    VarSet<S> w = unite(cols_uB, cols_vC);
    if (w.size() != a) throw CardinalityError("ltilde_u: column count != a");
    const S sign_a = (a % 2 == 0) ? scalar_traits<S>::one() : -scalar_traits<S>::one(); // (-1)^a
    Matrix<S> m(a);
    for (std::size_t j = 0; j < a; ++j) {
        for (std::size_t k = 0; k < w.size(); ++k) {
            S entry = -d.kappa * sign_a * kernel::t(w[k], d.uC[j], c) * kprod(Kernel::H, w[k], d.uC, c);
            if (k < cols_uB.size()) {
                const S& r1 = d.r1_uB[idx_uB[k]];
                entry = entry + r1 * kernel::t(d.uC[j], w[k], c) * kprod(Kernel::H, d.uC, w[k], c) /
                                    kprod(Kernel::F, d.vC, w[k], c);
            }
            m(j, k) = entry;
        }
    }
    return delta_prime(d.uC, c) * delta_plain(w, c) * determinant(m);
}

template <Scalar S>
S ltilde_v(const BetheData<S>& d, const VarSet<S>& cols_vC, const std::vector<std::size_t>& idx_vC,
           const VarSet<S>& cols_uB) {
    const std::size_t b = d.vB.size();
    const S& c = d.c;
    VarSet<S> w = unite(cols_vC, cols_uB);
    if (w.size() != b) throw CardinalityError("ltilde_v: column count != b");
    const S sign_b = (b % 2 == 0) ? scalar_traits<S>::one() : -scalar_traits<S>::one(); // (-1)^b
    Matrix<S> m(b);
    for (std::size_t j = 0; j < b; ++j) {
        for (std::size_t k = 0; k < w.size(); ++k) {
            S entry = -sign_b * kernel::t(d.vB[j], w[k], c) * kprod(Kernel::H, d.vB, w[k], c);
            if (k < cols_vC.size()) {
                const S& r3 = d.r3_vC[idx_vC[k]];
                entry = entry + r3 * kernel::t(w[k], d.vB[j], c) * kprod(Kernel::H, w[k], d.vB, c) /
                                    kprod(Kernel::F, w[k], d.uB, c);
            }
            m(j, k) = entry;
        }
    }
    return delta_prime(d.vB, c) * delta_plain(w, c) * determinant(m);
}

} // namespace detail

/// Shat as the two-fold partition sum over uB and vC with L-tilde determinant
/// factors (the block-row expansion of the final determinant).
template <Scalar S>
S shat_block_rows(const BetheData<S>& d) {
    const int a = d.a();
    const int b = d.b();
    if (!d.has_rvalues()) throw Error("shat_block_rows: r-values missing");
    const S& c = d.c;
    S total = scalar_traits<S>::zero();
    const int nmax = std::min(a, b);
    for (int nI = 0; nI <= nmax; ++nI) {
        for_each_split(a, nI, [&](const std::vector<int>& uI, const std::vector<int>& uII) {
            VarSet<S> uB_I = select(d.uB, uI), uB_II = select(d.uB, uII);
            for_each_split(b, nI, [&](const std::vector<int>& vI, const std::vector<int>& vII) {
                VarSet<S> vC_I = select(d.vC, vI), vC_II = select(d.vC, vII);
                std::vector<std::size_t> idx_uII(uII.begin(), uII.end());
                std::vector<std::size_t> idx_vII(vII.begin(), vII.end());
                S term = set_product(Kernel::F, vC_II, uB_II, c) *
                         set_product(Kernel::F, uB_I, uB_II, c) *
                         set_product(Kernel::F, vC_II, vC_I, c) *
                         set_product(Kernel::T, vC_I, uB_I, c) *
                         set_product(Kernel::H, uB_I, uB_I, c) *
                         set_product(Kernel::H, vC_I, vC_I, c) *
                         detail::ltilde_u(d, uB_II, idx_uII, vC_I) *
                         detail::ltilde_v(d, vC_II, idx_vII, uB_I);
                if (nI % 2 != 0) term = -term;
                total = total + term;
            });
        });
    }
    return total;
}

/// Shat from the assembled single determinant (Jacobian construction).
template <Scalar S>
S shat_single_det(const BetheData<S>& d) {
    const S& c = d.c;
    return set_product(Kernel::T, d.vC, d.uB, c) * delta_prime(d.uC, c) * delta_prime(d.vB, c) *
           delta_plain(d.uB, c) * delta_plain(d.vC, c) *
           determinant(build_block_matrix(d, BlockConstruction::Jacobian));
}

} // namespace su3bethe

#endif
