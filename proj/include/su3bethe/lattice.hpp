#ifndef SU3BETHE_LATTICE_HPP
#define SU3BETHE_LATTICE_HPP

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "su3bethe/scalar.hpp"

namespace su3bethe {

/// The SU(3)-invariant XXX chain: N sites, coupling c, twist kappa.
struct ChainModel {
    int N = 1;
    Cplx c{1.0, 0.0};
    Cplx kappa{1.0, 0.0};
};

// Dense ground-truth construction of the R-matrix, monodromy, transfer
// matrices and local operators on chains of up to 6 sites. Conventions:
// colors 1..3 map to base-3 digits 0..2, site s is digit s-1 (site 1 least
// significant), the vacuum (all color 1) is index 0.

namespace lattice {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline long dim_of(int N) {
    long d = 1;
    for (int i = 0; i < N; ++i) d *= 3;
    return d;
}

/// R(x,y) = I + g(x,y) P on C^3 x C^3 (aux index most significant);
/// rescaled variant (x-y) I + c P is finite at x = y.
MatrixXcd build_R(Cplx x, Cplx y, Cplx c, bool rescaled = false);

/// Monodromy as a 3x3 grid of quantum-space blocks, T(w) = R_0N ... R_01.
struct Monodromy {
    int N = 0;
    std::array<MatrixXcd, 9> blocks; // [3*i + j] = T_ij, each 3^N x 3^N

    const MatrixXcd& block(int i, int j) const { return blocks[static_cast<std::size_t>(3 * i + j)]; }
    MatrixXcd& block(int i, int j) { return blocks[static_cast<std::size_t>(3 * i + j)]; }

    /// tr T(w) or tr T_kappa(w) = T11 + kappa T22 + T33.
    MatrixXcd transfer(Cplx kappa = Cplx(1.0, 0.0)) const;
};

Monodromy build_monodromy(Cplx w, const ChainModel& m, bool rescaled = false);

/// Max-norm defect of R12 T1 T2 - T2 T1 R12 on V1 x V2 x H; the optional
/// twist checks the same algebra for T_kappa = diag(1,kappa,1) T.
double rtt_defect(Cplx w1, Cplx w2, const ChainModel& m, std::optional<Cplx> twist = std::nullopt);

/// Basis indices with fixed color occupation (n1, n2, n3).
struct WeightSector {
    std::array<int, 3> occupation{};
    std::vector<long> indices;
};

WeightSector weight_sector(int N, int n1, int n2, int n3);

MatrixXcd restrict_to_sector(const MatrixXcd& full, const WeightSector& sector);

/// Max magnitude of transfer-matrix entries leaking out of the sector rows.
double sector_leakage(const MatrixXcd& full, const WeightSector& sector);

/// Dense eigensystem of the sector-restricted transfer matrix. Left
/// eigenvectors come from the transposed problem, matched by eigenvalue.
struct SectorEig {
    VectorXcd eigenvalues;
    MatrixXcd right; // columns
    MatrixXcd left;  // columns; left.col(i)^T * M = eigenvalues(i) * left.col(i)^T
    double min_gap = 0.0;
    bool degenerate = false; // min_gap < 1e-8: eigenvector matching unreliable
};

SectorEig sector_spectrum(Cplx w, const ChainModel& m, const WeightSector& sector,
                          std::optional<Cplx> kappa = std::nullopt);

/// Same, reusing a prebuilt monodromy (the blocks are twist-independent).
SectorEig sector_spectrum(const Monodromy& t, const WeightSector& sector,
                          Cplx kappa = Cplx(1.0, 0.0));

/// E^{eps,eps'} embedded at a site (1-based), dense on 3^N.
MatrixXcd local_operator(int N, int site, int eps, int eps_prime);

/// The same operator through the inverse scattering problem,
/// (tr T(0))^{m-1} T_{eps',eps}(0) (tr T(0))^{-m}, built from the rescaled
/// monodromy at w = 0 (the rescaling scalars cancel between the powers).
MatrixXcd local_from_monodromy(const ChainModel& m, int site, int eps, int eps_prime);

/// Index of the eigenvalue closest to tau; gap to the next-closest one.
struct EigenMatch {
    int index = -1;
    double distance = 0.0;
    double gap = 0.0;
};
EigenMatch match_eigenvalue(const VectorXcd& eigenvalues, Cplx tau);

} // namespace lattice
} // namespace su3bethe

#endif
