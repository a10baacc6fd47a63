#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "su3bethe/lattice.hpp"

using namespace su3bethe;
using namespace su3bethe::lattice;

namespace {

std::mt19937_64 rng(20250602);

Cplx random_point(double scale = 2.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    return Cplx(dist(rng), dist(rng));
}

} // namespace

TEST_CASE("R-matrix structure") {
    Cplx c(1.0);
    // g -> 0: R -> identity
    MatrixXcd r = build_R(Cplx(1e9), Cplx(0.0), c);
    CHECK((r - MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-8);
    // at x - y = -c the rescaled matrix is -c(I - P); with P^2 = I its square
    // is -2c times itself (projector structure)
    MatrixXcd rb = build_R(Cplx(0.0), c, c, true);
    CHECK((rb * rb + 2.0 * c * rb).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(build_R(c, c, c), PoleError);
}

TEST_CASE("Yang-Baxter equation on C^3 x C^3 x C^3") {
    Cplx c(1.0);
    for (int trial = 0; trial < 5; ++trial) {
        Cplx x = random_point(), y = random_point(), z = random_point();
        if (std::abs(x - y) < 0.1 || std::abs(x - z) < 0.1 || std::abs(y - z) < 0.1) continue;
        MatrixXcd rxy = build_R(x, y, c), rxz = build_R(x, z, c), ryz = build_R(y, z, c);
        MatrixXcd I3 = MatrixXcd::Identity(3, 3);
        auto kron = [](const MatrixXcd& a, const MatrixXcd& b) {
            MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
            for (long i = 0; i < a.rows(); ++i)
                for (long j = 0; j < a.cols(); ++j)
                    out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            return out;
        };
        MatrixXcd r12 = kron(rxy, I3);
        MatrixXcd r23 = kron(I3, ryz);
        // R13 = P23 R12(x,z) P23
        MatrixXcd p23 = MatrixXcd::Zero(27, 27);
        for (int a1 = 0; a1 < 3; ++a1)
            for (int b1 = 0; b1 < 3; ++b1)
                for (int c1 = 0; c1 < 3; ++c1) p23(9 * a1 + 3 * b1 + c1, 9 * a1 + 3 * c1 + b1) = 1.0;
        MatrixXcd r13 = p23 * kron(rxz, I3) * p23;
        MatrixXcd lhs = r12 * r13 * r23;
        MatrixXcd rhs = r23 * r13 * r12;
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("monodromy: single site equals R, vacuum eigenvalues, annihilation") {
    ChainModel m{1, Cplx(1.0), Cplx(1.0)};
    Cplx w(0.7, 0.3);
    Monodromy t = build_monodromy(w, m);
    MatrixXcd r = build_R(w, Cplx(0.0), m.c);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int s = 0; s < 3; ++s)
                for (int s2 = 0; s2 < 3; ++s2)
                    CHECK(std::abs(t.block(i, j)(s, s2) - r(3 * i + s, 3 * j + s2)) < 1e-14);

    for (int N = 1; N <= 4; ++N) {
        ChainModel mn{N, Cplx(1.0), Cplx(1.0)};
        Monodromy tn = build_monodromy(w, mn);
        long dim = dim_of(N);
        VectorXcd vac = VectorXcd::Zero(dim);
        vac(0) = 1.0;
        // T11|0> = f(w,0)^N |0>, T22|0> = T33|0> = |0>
        Cplx f = (w + mn.c) / w;
        Cplx lambda1(1.0);
        for (int i = 0; i < N; ++i) lambda1 *= f;
        CHECK((tn.block(0, 0) * vac - lambda1 * vac).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((tn.block(1, 1) * vac - vac).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((tn.block(2, 2) * vac - vac).cwiseAbs().maxCoeff() < 1e-13);
        // T_jk |0> = 0 for j > k
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < j; ++k)
                CHECK((tn.block(j, k) * vac).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("RTT relation, plain and twisted") {
    for (int N = 1; N <= 3; ++N) {
        ChainModel m{N, Cplx(1.0), Cplx(1.0)};
        Cplx w1 = random_point(), w2 = random_point();
        if (std::abs(w1 - w2) < 0.1 || std::abs(w1) < 0.1 || std::abs(w2) < 0.1) {
            w1 += Cplx(0.5, 0.4);
            w2 -= Cplx(0.6, 0.3);
        }
        CHECK(rtt_defect(w1, w2, m) < 1e-11);
    }
    ChainModel m2{2, Cplx(1.0), Cplx(1.0)};
    CHECK(rtt_defect(Cplx(0.9, 0.2), Cplx(-0.4, 0.6), m2, Cplx(2.0, 0.0)) < 1e-12);
}

TEST_CASE("weight sectors: dimensions, preservation, vacuum eigenvalue") {
    ChainModel m{3, Cplx(1.0), Cplx(1.0)};
    auto sec = weight_sector(3, 1, 1, 1);
    CHECK(sec.indices.size() == 6);
    CHECK(weight_sector(3, 3, 0, 0).indices.size() == 1);
    CHECK_THROWS_AS(weight_sector(3, 2, 2, 2), CardinalityError);

    Cplx w(0.45, 0.15);
    Monodromy t = build_monodromy(w, m);
    MatrixXcd transfer = t.transfer();
    CHECK(sector_leakage(transfer, sec) < 1e-13);

    // sector (N,0,0): the single state has tau = f(w,0)^N + 2
    auto vac_sec = weight_sector(3, 3, 0, 0);
    auto eig = sector_spectrum(w, m, vac_sec);
    Cplx f = (w + m.c) / w;
    Cplx expected = f * f * f + 2.0;
    CHECK(std::abs(eig.eigenvalues(0) - expected) < 1e-12);
}

TEST_CASE("commuting transfer family and twisted spectrum at kappa = 1") {
    for (int N = 2; N <= 4; ++N) {
        ChainModel m{N, Cplx(1.0), Cplx(1.0)};
        Cplx w1(0.8, 0.1), w2(-0.6, 0.4);
        MatrixXcd t1 = build_monodromy(w1, m).transfer();
        MatrixXcd t2 = build_monodromy(w2, m).transfer();
        CHECK((t1 * t2 - t2 * t1).cwiseAbs().maxCoeff() < 1e-11);
    }
    // spectrum of tr T_kappa at kappa = 1 equals the untwisted spectrum
    ChainModel m{3, Cplx(1.0), Cplx(1.0)};
    auto sec = weight_sector(3, 2, 1, 0);
    auto plain = sector_spectrum(Cplx(0.5, 0.2), m, sec);
    auto twisted = sector_spectrum(Cplx(0.5, 0.2), m, sec, Cplx(1.0));
    for (int i = 0; i < plain.eigenvalues.size(); ++i) {
        auto match = match_eigenvalue(twisted.eigenvalues, plain.eigenvalues(i));
        CHECK(match.distance < 1e-12);
    }
}

TEST_CASE("left eigenvectors pair with right ones") {
    ChainModel m{3, Cplx(1.0), Cplx(1.0)};
    auto sec = weight_sector(3, 1, 1, 1);
    Cplx w(0.35, 0.25);
    auto eig = sector_spectrum(w, m, sec);
    MatrixXcd sector_t = restrict_to_sector(build_monodromy(w, m).transfer(), sec);
    for (int i = 0; i < eig.eigenvalues.size(); ++i) {
        VectorXcd r = eig.right.col(i);
        VectorXcd l = eig.left.col(i);
        CHECK((sector_t * r - eig.eigenvalues(i) * r).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((sector_t.transpose() * l - eig.eigenvalues(i) * l).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("rescaled transfer at w = 0 is c^N times the cyclic shift") {
    for (int N = 2; N <= 5; ++N) {
        ChainModel m{N, Cplx(1.0), Cplx(1.0)};
        Monodromy t0 = build_monodromy(Cplx(0.0), m, true);
        MatrixXcd tr = t0.transfer();
        long dim = dim_of(N);
        Cplx cN(1.0);
        for (int i = 0; i < N; ++i) cN *= m.c;
        // columns are permutations scaled by c^N
        double offperm = 0.0;
        int nonzero_per_col = 0;
        for (long col = 0; col < dim; ++col) {
            int count = 0;
            for (long row = 0; row < dim; ++row) {
                double mag = std::abs(tr(row, col));
                if (mag > 1e-12) {
                    ++count;
                    offperm = std::max(offperm, std::abs(tr(row, col) - cN));
                }
            }
            nonzero_per_col = std::max(nonzero_per_col, count);
        }
        CHECK(nonzero_per_col == 1);
        CHECK(offperm < 1e-12);
        // (tr T(0))^N proportional to the identity
        MatrixXcd power = MatrixXcd::Identity(dim, dim);
        for (int i = 0; i < N; ++i) power = power * tr;
        Cplx scale = power(0, 0);
        CHECK(std::abs(scale) > 0.5);
        CHECK((power - scale * MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("local operators: vacuum values, completeness, inverse scattering") {
    ChainModel m{3, Cplx(1.0), Cplx(1.0)};
    long dim = dim_of(m.N);
    VectorXcd vac = VectorXcd::Zero(dim);
    vac(0) = 1.0;
    for (int site = 1; site <= m.N; ++site) {
        CHECK(std::abs((vac.transpose() * local_operator(m.N, site, 1, 1) * vac)(0) - 1.0) < 1e-14);
        CHECK(std::abs((vac.transpose() * local_operator(m.N, site, 2, 2) * vac)(0)) < 1e-14);
    }
    // sum over colors of E^{e,e}_m is the identity
    for (int site = 1; site <= m.N; ++site) {
        MatrixXcd sum = local_operator(m.N, site, 1, 1) + local_operator(m.N, site, 2, 2) +
                        local_operator(m.N, site, 3, 3);
        CHECK((sum - MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-14);
    }
    // inverse-scattering expression vs direct embedding
    for (int N = 2; N <= 4; ++N) {
        ChainModel mn{N, Cplx(1.0), Cplx(1.0)};
        for (int site = 1; site <= N; ++site)
            for (auto [e, ep] : {std::pair<int, int>{2, 2}, {1, 2}, {3, 1}}) {
                MatrixXcd direct = local_operator(N, site, e, ep);
                MatrixXcd via_t = local_from_monodromy(mn, site, e, ep);
                CHECK((direct - via_t).cwiseAbs().maxCoeff() < 1e-10);
            }
    }
}
