#ifndef SU3BETHE_XXX_CHAIN_HPP
#define SU3BETHE_XXX_CHAIN_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "su3bethe/lattice.hpp"
#include "su3bethe/scalar_product.hpp"

namespace su3bethe {

// The SU(3)-invariant XXX chain as a concrete realization of the generalized
// model: vacuum ratios r1(w) = f(w,0)^N, r3(w) = 1 (validated against the
// dense monodromy's vacuum eigenvalues), nested Bethe-root solving in
// multiplicative log form, transfer-matrix eigenvalues, and the E^{2,2}_m
// form factor through the kappa-derivative of the twisted scalar product.

struct BetheRoots {
    std::vector<Cplx> u;
    std::vector<Cplx> v;
    double residual = 0.0;

    int a() const { return static_cast<int>(u.size()); }
    int b() const { return static_cast<int>(v.size()); }
};

namespace chain {

Cplx r1(Cplx w, const ChainModel& m);
Cplx r3(Cplx w, const ChainModel& m);

/// Max modulus of the multiplicative Bethe defects log(lhs/rhs) at the roots.
double bethe_defect(const BetheRoots& roots, const ChainModel& m, Cplx kappa);

struct SolveOptions {
    int max_iterations = 80;
    double tolerance = 1e-13;
    double collision_threshold = 1e-8;
};

/// Damped Newton from a seed; empty when it fails or leaves the admissible
/// region (collisions, poles, non-finite values).
std::optional<BetheRoots> solve_from_seed(const std::vector<Cplx>& seed_u,
                                          const std::vector<Cplx>& seed_v, const ChainModel& m,
                                          Cplx kappa, const SolveOptions& opts = {});

/// Seeded multi-start search; returns the deduplicated states found.
std::vector<BetheRoots> find_states(const ChainModel& m, int a, int b, Cplx kappa,
                                    std::uint64_t seed, int starts = 300,
                                    const SolveOptions& opts = {});

/// Newton continuation of a kappa = kappa_from state to kappa_to.
std::optional<BetheRoots> continue_in_kappa(const BetheRoots& base, const ChainModel& m,
                                            Cplx kappa_from, Cplx kappa_to, int steps = 10,
                                            const SolveOptions& opts = {});

/// Twisted root family around kappa = 1, Chebyshev-sampled on [1-h, 1+h]
/// and re-polished per evaluation.
class TwistFamily {
  public:
    TwistFamily(const BetheRoots& base, const ChainModel& m, double h = 0.1, int samples = 9);
    BetheRoots at(Cplx kappa) const;
    const BetheRoots& base() const { return base_; }

  private:
    BetheRoots base_;
    ChainModel model_;
    double h_;
    std::vector<std::pair<double, BetheRoots>> samples_;
};

/// tau(w) (or tau_kappa(w)) from the Bethe roots.
Cplx transfer_eigenvalue(Cplx w, const BetheRoots& roots, const ChainModel& m,
                         std::optional<Cplx> kappa = std::nullopt);

/// Rescaled w = 0 eigenvalue c^N f(u, 0); scalars cancel in all ratios.
Cplx tau0_rescaled(const BetheRoots& roots, const ChainModel& m);

/// Scalar product of a twisted on-shell state (C side, twist kappa) with an
/// on-shell state (B side), r-values from the chain's model functions.
Cplx chain_scalar_product(const BetheRoots& bra, Cplx kappa, const BetheRoots& ket,
                          const ChainModel& m);

/// Squared norm of an on-shell state via the merged-limit determinant.
Cplx chain_norm(const BetheRoots& roots, const ChainModel& m);

struct FormFactorOptions {
    double step = 1e-3; // central-difference step in kappa; Richardson uses step/2
};

/// <tilde psi| E^{2,2}_site |psi> by the kappa-derivative of
/// (ratio_m - ratio_{m-1}) <tilde psi_kappa | psi> at kappa = 1.
Cplx form_factor_e22(int site, const TwistFamily& bra_family, const BetheRoots& ket,
                     const ChainModel& m, const FormFactorOptions& opts = {});

/// Smallest |root - root| distance between the two states' same-level sets.
double min_root_separation(const BetheRoots& bra, const BetheRoots& ket);

/// Analytic variant for distinct states in generic position: the
/// zero-eigenvector row trick turns d(det N)/dkappa into a single
/// determinant. Throws DegenerateError when the states share a root.
Cplx form_factor_e22_analytic(int site, const BetheRoots& bra, const BetheRoots& ket,
                              const ChainModel& m);

} // namespace chain
} // namespace su3bethe

#endif
