#include "su3bethe/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "su3bethe/errors.hpp"

namespace su3bethe::lattice {

MatrixXcd build_R(Cplx x, Cplx y, Cplx c, bool rescaled) {
    Cplx d = x - y;
    Cplx id, perm;
    if (rescaled) {
        id = d;
        perm = c;
    } else {
        if (is_zero(d)) throw PoleError("build_R: x = y (use the rescaled variant)");
        id = Cplx(1.0);
        perm = c / d;
    }
    MatrixXcd r = MatrixXcd::Zero(9, 9);
    for (int i = 0; i < 3; ++i)
        for (int s = 0; s < 3; ++s) {
            r(3 * i + s, 3 * i + s) += id;
            r(3 * i + s, 3 * s + i) += perm; // permutation part
        }
    return r;
}

MatrixXcd Monodromy::transfer(Cplx kappa) const {
    return block(0, 0) + kappa * block(1, 1) + block(2, 2);
}

Monodromy build_monodromy(Cplx w, const ChainModel& m, bool rescaled) {
    if (m.N < 1) throw Error("build_monodromy: N >= 1 required");
    Cplx d = w; // spectral argument relative to the site parameter 0
    Cplx id, perm;
    if (rescaled) {
        id = d;
        perm = m.c;
    } else {
        if (is_zero(d)) throw PoleError("build_monodromy: w = 0 (use the rescaled variant)");
        id = Cplx(1.0);
        perm = m.c / d;
    }
    // Site blocks of R: [R]_ij = id * delta_ij I3 + perm * E^{j,i}
    std::array<MatrixXcd, 9> site;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            MatrixXcd s = MatrixXcd::Zero(3, 3);
            if (i == j) s += id * MatrixXcd::Identity(3, 3);
            s(j, i) += perm;
            site[static_cast<std::size_t>(3 * i + j)] = s;
        }

    Monodromy t;
    t.N = m.N;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t.block(i, j) = (i == j) ? MatrixXcd(MatrixXcd::Identity(1, 1)) : MatrixXcd(MatrixXcd::Zero(1, 1));

    // Multiply R_{0s} from the left, site by site; factors act on disjoint
    // quantum spaces, so each block product is a Kronecker product with the
    // new site digit most significant.
    for (int s = 1; s <= m.N; ++s) {
        long prev_dim = dim_of(s - 1);
        long new_dim = 3 * prev_dim;
        std::array<MatrixXcd, 9> next;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                MatrixXcd acc = MatrixXcd::Zero(new_dim, new_dim);
                for (int k = 0; k < 3; ++k) {
                    const MatrixXcd& a = site[static_cast<std::size_t>(3 * i + k)];
                    const MatrixXcd& b = t.block(k, j);
                    for (int p = 0; p < 3; ++p)
                        for (int q = 0; q < 3; ++q) {
                            Cplx apq = a(p, q);
                            if (apq == Cplx(0.0)) continue;
                            acc.block(p * prev_dim, q * prev_dim, prev_dim, prev_dim) += apq * b;
                        }
                }
                next[static_cast<std::size_t>(3 * i + j)] = std::move(acc);
            }
        for (std::size_t idx = 0; idx < 9; ++idx) t.blocks[idx] = std::move(next[idx]);
    }
    return t;
}

double rtt_defect(Cplx w1, Cplx w2, const ChainModel& m, std::optional<Cplx> twist) {
    Monodromy t1 = build_monodromy(w1, m);
    Monodromy t2 = build_monodromy(w2, m);
    Cplx rho[3] = {Cplx(1.0), twist.value_or(Cplx(1.0)), Cplx(1.0)};
    const long q = dim_of(m.N);
    const long full = 9 * q;
    MatrixXcd T1 = MatrixXcd::Zero(full, full);
    MatrixXcd T2 = MatrixXcd::Zero(full, full);
    for (int i1 = 0; i1 < 3; ++i1)
        for (int j1 = 0; j1 < 3; ++j1)
            for (int i2 = 0; i2 < 3; ++i2) {
                // T1 acts in V1 x H, diagonal in V2; T2 the other way round.
                T1.block((3 * i1 + i2) * q, (3 * j1 + i2) * q, q, q) = rho[i1] * t1.block(i1, j1);
                T2.block((3 * i2 + i1) * q, (3 * i2 + j1) * q, q, q) = rho[i1] * t2.block(i1, j1);
            }
    MatrixXcd r9 = build_R(w1, w2, m.c);
    MatrixXcd R12 = MatrixXcd::Zero(full, full);
    for (int a = 0; a < 9; ++a)
        for (int b = 0; b < 9; ++b) {
            if (r9(a, b) == Cplx(0.0)) continue;
            R12.block(a * q, b * q, q, q) = r9(a, b) * MatrixXcd::Identity(q, q);
        }
    MatrixXcd lhs = R12 * T1 * T2;
    MatrixXcd rhs = T2 * T1 * R12;
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

WeightSector weight_sector(int N, int n1, int n2, int n3) {
    if (n1 < 0 || n2 < 0 || n3 < 0 || n1 + n2 + n3 != N)
        throw CardinalityError("weight_sector: occupation must be nonnegative and sum to N");
    WeightSector sec;
    sec.occupation = {n1, n2, n3};
    const long dim = dim_of(N);
    for (long idx = 0; idx < dim; ++idx) {
        int counts[3] = {0, 0, 0};
        long rest = idx;
        for (int s = 0; s < N; ++s) {
            ++counts[rest % 3];
            rest /= 3;
        }
        if (counts[0] == n1 && counts[1] == n2 && counts[2] == n3) sec.indices.push_back(idx);
    }
    return sec;
}

MatrixXcd restrict_to_sector(const MatrixXcd& full, const WeightSector& sector) {
    const long n = static_cast<long>(sector.indices.size());
    MatrixXcd out(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) out(i, j) = full(sector.indices[static_cast<std::size_t>(i)],
                                                     sector.indices[static_cast<std::size_t>(j)]);
    return out;
}

double sector_leakage(const MatrixXcd& full, const WeightSector& sector) {
    std::vector<char> inside(static_cast<std::size_t>(full.rows()), 0);
    for (long idx : sector.indices) inside[static_cast<std::size_t>(idx)] = 1;
    double leak = 0.0;
    for (long idx : sector.indices)
        for (long j = 0; j < full.cols(); ++j)
            if (!inside[static_cast<std::size_t>(j)])
                leak = std::max({leak, std::abs(full(idx, j)), std::abs(full(j, idx))});
    return leak;
}

namespace {

void phase_fix(MatrixXcd& vectors) {
    for (long col = 0; col < vectors.cols(); ++col) {
        long imax = 0;
        double best = 0.0;
        for (long i = 0; i < vectors.rows(); ++i) {
            double v = std::abs(vectors(i, col));
            if (v > best) {
                best = v;
                imax = i;
            }
        }
        if (best == 0.0) continue;
        Cplx ph = vectors(imax, col) / best;
        vectors.col(col) /= ph;
        vectors.col(col).normalize();
    }
}

} // namespace

SectorEig sector_spectrum(Cplx w, const ChainModel& m, const WeightSector& sector,
                          std::optional<Cplx> kappa) {
    Monodromy t = build_monodromy(w, m);
    return sector_spectrum(t, sector, kappa.value_or(Cplx(1.0)));
}

SectorEig sector_spectrum(const Monodromy& t, const WeightSector& sector, Cplx kappa) {
    MatrixXcd transfer = t.transfer(kappa);
    MatrixXcd sec = restrict_to_sector(transfer, sector);
    Eigen::ComplexEigenSolver<MatrixXcd> right(sec);
    Eigen::ComplexEigenSolver<MatrixXcd> left(sec.transpose().eval());
    if (right.info() != Eigen::Success || left.info() != Eigen::Success)
        throw NoConvergence("sector_spectrum: eigensolver failed");

    SectorEig out;
    out.eigenvalues = right.eigenvalues();
    out.right = right.eigenvectors();

    // pair left eigenvectors with the right ones by eigenvalue
    const long n = out.eigenvalues.size();
    out.left = MatrixXcd::Zero(n, n);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    for (long i = 0; i < n; ++i) {
        long pick = -1;
        double best = 0.0;
        for (long j = 0; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            double dist = std::abs(left.eigenvalues()(j) - out.eigenvalues(i));
            if (pick < 0 || dist < best) {
                best = dist;
                pick = j;
            }
        }
        used[static_cast<std::size_t>(pick)] = 1;
        out.left.col(i) = left.eigenvectors().col(pick);
    }
    phase_fix(out.right);
    phase_fix(out.left);

    out.min_gap = std::numeric_limits<double>::infinity();
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j)
            out.min_gap = std::min(out.min_gap, std::abs(out.eigenvalues(i) - out.eigenvalues(j)));
    if (n < 2) out.min_gap = std::numeric_limits<double>::infinity();
    out.degenerate = out.min_gap < 1e-8;
    return out;
}

MatrixXcd local_operator(int N, int site, int eps, int eps_prime) {
    if (site < 1 || site > N) throw Error("local_operator: site out of range");
    if (eps < 1 || eps > 3 || eps_prime < 1 || eps_prime > 3)
        throw Error("local_operator: color out of range");
    const long dim = dim_of(N);
    long stride = 1;
    for (int s = 1; s < site; ++s) stride *= 3;
    MatrixXcd op = MatrixXcd::Zero(dim, dim);
    for (long idx = 0; idx < dim; ++idx) {
        int digit = static_cast<int>((idx / stride) % 3);
        if (digit != eps_prime - 1) continue; // (E^{e,e'})_{jk} = delta_{j e} delta_{k e'}
        long jdx = idx + (static_cast<long>(eps - 1) - digit) * stride;
        op(jdx, idx) = Cplx(1.0);
    }
    return op;
}

MatrixXcd local_from_monodromy(const ChainModel& m, int site, int eps, int eps_prime) {
    Monodromy t0 = build_monodromy(Cplx(0.0), m, /*rescaled=*/true);
    MatrixXcd tr = t0.transfer();
    Eigen::PartialPivLU<MatrixXcd> lu(tr);
    MatrixXcd tr_inv = lu.inverse();
    const long dim = dim_of(m.N);
    MatrixXcd acc = MatrixXcd::Identity(dim, dim);
    for (int k = 0; k < site - 1; ++k) acc = acc * tr;
    acc = acc * t0.block(eps_prime - 1, eps - 1);
    for (int k = 0; k < site; ++k) acc = acc * tr_inv;
    return acc;
}

EigenMatch match_eigenvalue(const VectorXcd& eigenvalues, Cplx tau) {
    EigenMatch match;
    for (int i = 0; i < eigenvalues.size(); ++i) {
        double dist = std::abs(eigenvalues(i) - tau);
        if (match.index < 0 || dist < match.distance) {
            match.gap = match.index < 0 ? std::numeric_limits<double>::infinity() : match.distance;
            match.index = i;
            match.distance = dist;
        } else {
            match.gap = std::min(match.gap, dist);
        }
    }
    return match;
}

} // namespace su3bethe::lattice
