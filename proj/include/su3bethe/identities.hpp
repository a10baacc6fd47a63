#ifndef SU3BETHE_IDENTITIES_HPP
#define SU3BETHE_IDENTITIES_HPP

#include <utility>

#include "su3bethe/dwpf.hpp"
#include "su3bethe/partitions.hpp"

namespace su3bethe {

// Highest coefficient Z_{a,b}(t;x|s;y) of the scalar product, in its two
// partition-sum representations, plus the three auxiliary partition lemmas.
// All sums run in the deterministic order of for_each_partition.

enum class ZRep { First, Second };

/// First representation: sum over w = {s, x} split with |w_I| = b:
///   Z = (-1)^b sum K_b(s-c|w_I) K_a(w_II|t) K_b(y|w_I) f(w_I, w_II)
template <Scalar S>
S highest_coeff_first(const VarSet<S>& t, const VarSet<S>& x, const VarSet<S>& s,
                      const VarSet<S>& y, const S& c) {
    const int a = static_cast<int>(t.size());
    const int b = static_cast<int>(s.size());
    if (x.size() != t.size() || y.size() != s.size())
        throw CardinalityError("highest_coeff: |t|!=|x| or |s|!=|y|");
    VarSet<S> w = unite(s, x);
    VarSet<S> s_minus = shifted(s, -c);
    S sum = scalar_traits<S>::zero();
    for_each_split(a + b, b, [&](const std::vector<int>& I, const std::vector<int>& II) {
        VarSet<S> wI = select(w, I);
        VarSet<S> wII = select(w, II);
        sum = sum + dwpf(s_minus, wI, c) * dwpf(wII, t, c) * dwpf(y, wI, c) *
                        set_product(Kernel::F, wI, wII, c);
    });
    return (b % 2 == 0) ? sum : -sum;
}

/// Second representation: sum over eta = {y+c, t} split with |eta_I| = a:
///   Z = (-1)^b f(y,x) f(s,t) sum K_b(eta_II-c|y+c) K_a(x|eta_I) K_b(eta_II-c|s) f(eta_I, eta_II)
template <Scalar S>
S highest_coeff_second(const VarSet<S>& t, const VarSet<S>& x, const VarSet<S>& s,
                       const VarSet<S>& y, const S& c) {
    const int a = static_cast<int>(t.size());
    const int b = static_cast<int>(s.size());
    if (x.size() != t.size() || y.size() != s.size())
        throw CardinalityError("highest_coeff: |t|!=|x| or |s|!=|y|");
    VarSet<S> y_plus = shifted(y, c);
    VarSet<S> eta = unite(y_plus, t);
    S sum = scalar_traits<S>::zero();
    for_each_split(a + b, a, [&](const std::vector<int>& I, const std::vector<int>& II) {
        VarSet<S> etaI = select(eta, I);
        VarSet<S> etaII_minus = shifted(select(eta, II), -c);
        sum = sum + dwpf(etaII_minus, y_plus, c) * dwpf(x, etaI, c) * dwpf(etaII_minus, s, c) *
                        set_product(Kernel::F, etaI, select(eta, II), c);
    });
    S pref = set_product(Kernel::F, y, x, c) * set_product(Kernel::F, s, t, c);
    S z = pref * sum;
    return (b % 2 == 0) ? z : -z;
}

template <Scalar S>
S highest_coeff(const VarSet<S>& t, const VarSet<S>& x, const VarSet<S>& s, const VarSet<S>& y,
                const S& c, ZRep rep) {
    return rep == ZRep::First ? highest_coeff_first(t, x, s, y, c)
                              : highest_coeff_second(t, x, s, y, c);
}

// ---------------------------------------------------------------------------
// Lemma 1: sum over xi = xi_I + xi_II with |xi_I| = m1 of
//   K_{m1}(xi_I|alpha) K_{m2}(beta|xi_II) f(xi_II, xi_I)
// equals, in two closed forms,
//   Old1: (-1)^{m1} f(xi, alpha) K_{m1+m2}(alpha-c, beta | xi)
//   Old2: (-1)^{m2} f(beta, xi)  K_{m1+m2}(xi | alpha, beta+c)
// ---------------------------------------------------------------------------

enum class Lemma1Rhs { Old1, Old2 };

template <Scalar S>
S lemma1_lhs(const VarSet<S>& xi, const VarSet<S>& alpha, const VarSet<S>& beta, const S& c) {
    const int m1 = static_cast<int>(alpha.size());
    const int m2 = static_cast<int>(beta.size());
    if (xi.size() != alpha.size() + beta.size())
        throw CardinalityError("lemma1: |xi| != |alpha| + |beta|");
    S sum = scalar_traits<S>::zero();
    for_each_split(m1 + m2, m1, [&](const std::vector<int>& I, const std::vector<int>& II) {
        VarSet<S> xiI = select(xi, I);
        VarSet<S> xiII = select(xi, II);
        sum = sum + dwpf(xiI, alpha, c) * dwpf(beta, xiII, c) * set_product(Kernel::F, xiII, xiI, c);
    });
    return sum;
}

template <Scalar S>
S lemma1_rhs(const VarSet<S>& xi, const VarSet<S>& alpha, const VarSet<S>& beta, const S& c,
             Lemma1Rhs variant) {
    const int m1 = static_cast<int>(alpha.size());
    const int m2 = static_cast<int>(beta.size());
    if (variant == Lemma1Rhs::Old1) {
        S v = set_product(Kernel::F, xi, alpha, c) * dwpf(unite(shifted(alpha, -c), beta), xi, c);
        return (m1 % 2 == 0) ? v : -v;
    }
    S v = set_product(Kernel::F, beta, xi, c) * dwpf(xi, unite(alpha, shifted(beta, c)), c);
    return (m2 % 2 == 0) ? v : -v;
}

template <Scalar S>
std::pair<S, S> lemma1_pair(const VarSet<S>& xi, const VarSet<S>& alpha, const VarSet<S>& beta,
                            const S& c, Lemma1Rhs variant) {
    return {lemma1_lhs(xi, alpha, beta, c), lemma1_rhs(xi, alpha, beta, c, variant)};
}

// ---------------------------------------------------------------------------
// Lemma 2: for arbitrary value tables C1, C2 on the points of w,
//   Det1: sum K_m(w_I-c, w_II | xi) f(xi, w_I) f(w_II, w_I) C1(w_I) C2(w_II)
//       = Delta'(xi) Delta(w) det_m [ C2(w_k) t(w_k,xi_j) h(w_k,xi)
//                                     + (-1)^m C1(w_k) t(xi_j,w_k) h(xi,w_k) ]
//   Det2: sum K_m(xi | w_I, w_II+c) f(w_II, xi) f(w_II, w_I) C1(w_I) C2(w_II)
//       = Delta'(xi) Delta(w) det_m [ C1(w_k) t(xi_j,w_k) h(xi,w_k)
//                                     + (-1)^m C2(w_k) t(w_k,xi_j) h(w_k,xi) ]
// The sums run over all split cardinalities 0..m.
// ---------------------------------------------------------------------------

enum class Lemma2Variant { Det1, Det2 };

template <Scalar S>
S lemma2_lhs(const VarSet<S>& w, const VarSet<S>& xi, const std::vector<S>& c1, const std::vector<S>& c2,
             const S& c, Lemma2Variant variant) {
    const int m = static_cast<int>(w.size());
    if (xi.size() != w.size() || c1.size() != w.size() || c2.size() != w.size())
        throw CardinalityError("lemma2: size mismatch");
    S sum = scalar_traits<S>::zero();
    for (int k = 0; k <= m; ++k) {
        for_each_split(m, k, [&](const std::vector<int>& I, const std::vector<int>& II) {
            VarSet<S> wI = select(w, I);
            VarSet<S> wII = select(w, II);
            S cw = scalar_traits<S>::one();
            for (int i : I) cw = cw * c1[static_cast<std::size_t>(i)];
            for (int i : II) cw = cw * c2[static_cast<std::size_t>(i)];
            S k_fac = (variant == Lemma2Variant::Det1)
                          ? dwpf(unite(shifted(wI, -c), wII), xi, c) * set_product(Kernel::F, xi, wI, c)
                          : dwpf(xi, unite(wI, shifted(wII, c)), c) * set_product(Kernel::F, wII, xi, c);
            sum = sum + k_fac * set_product(Kernel::F, wII, wI, c) * cw;
        });
    }
    return sum;
}

template <Scalar S>
Matrix<S> lemma2_matrix(const VarSet<S>& w, const VarSet<S>& xi, const std::vector<S>& c1,
                        const std::vector<S>& c2, const S& c, Lemma2Variant variant) {
    const std::size_t m = w.size();
    const S parity = (m % 2 == 0) ? scalar_traits<S>::one() : -scalar_traits<S>::one();
    Matrix<S> mat(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            S term_fwd = c1[k] * kernel::t(xi[j], w[k], c) * kprod(Kernel::H, xi, w[k], c);
            S term_rev = c2[k] * kernel::t(w[k], xi[j], c) * kprod(Kernel::H, w[k], xi, c);
            mat(j, k) = (variant == Lemma2Variant::Det1) ? term_rev + parity * term_fwd
                                                         : term_fwd + parity * term_rev;
        }
    }
    return mat;
}

template <Scalar S>
S lemma2_rhs(const VarSet<S>& w, const VarSet<S>& xi, const std::vector<S>& c1, const std::vector<S>& c2,
             const S& c, Lemma2Variant variant) {
    return delta_prime(xi, c) * delta_plain(w, c) * determinant(lemma2_matrix(w, xi, c1, c2, c, variant));
}

template <Scalar S>
std::pair<S, S> lemma2_pair(const VarSet<S>& w, const VarSet<S>& xi, const std::vector<S>& c1,
                            const std::vector<S>& c2, const S& c, Lemma2Variant variant) {
    return {lemma2_lhs(w, xi, c1, c2, c, variant), lemma2_rhs(w, xi, c1, c2, c, variant)};
}

// ---------------------------------------------------------------------------
// Lemma 3: double partition sum over alpha and beta with matched cardinalities,
//   sum f(beta_II, beta_I) f(alpha_I, alpha_II) K(beta_I|alpha_I) K(alpha_II+c|beta_II)
//   = (-1)^m t(alpha, beta) h(alpha, alpha) h(beta, beta).
// ---------------------------------------------------------------------------

template <Scalar S>
S lemma3_lhs(const VarSet<S>& alpha, const VarSet<S>& beta, const S& c) {
    const int m = static_cast<int>(alpha.size());
    if (beta.size() != alpha.size()) throw CardinalityError("lemma3: |alpha| != |beta|");
    S sum = scalar_traits<S>::zero();
    for (int k = 0; k <= m; ++k) {
        for_each_split(m, k, [&](const std::vector<int>& aI, const std::vector<int>& aII) {
            VarSet<S> alphaI = select(alpha, aI);
            VarSet<S> alphaII_p = shifted(select(alpha, aII), c);
            S fa = set_product(Kernel::F, alphaI, select(alpha, aII), c);
            for_each_split(m, k, [&](const std::vector<int>& bI, const std::vector<int>& bII) {
                VarSet<S> betaI = select(beta, bI);
                VarSet<S> betaII = select(beta, bII);
                sum = sum + set_product(Kernel::F, betaII, betaI, c) * fa *
                                dwpf(betaI, alphaI, c) * dwpf(alphaII_p, betaII, c);
            });
        });
    }
    return sum;
}

template <Scalar S>
S lemma3_rhs(const VarSet<S>& alpha, const VarSet<S>& beta, const S& c) {
    const int m = static_cast<int>(alpha.size());
    S v = set_product(Kernel::T, alpha, beta, c) * set_product(Kernel::H, alpha, alpha, c) *
          set_product(Kernel::H, beta, beta, c);
    return (m % 2 == 0) ? v : -v;
}

template <Scalar S>
std::pair<S, S> lemma3_pair(const VarSet<S>& alpha, const VarSet<S>& beta, const S& c) {
    return {lemma3_lhs(alpha, beta, c), lemma3_rhs(alpha, beta, c)};
}

} // namespace su3bethe

#endif
