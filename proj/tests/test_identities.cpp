#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "su3bethe/identities.hpp"
#include "su3bethe/sampling.hpp"
#include "test_support.hpp"

using namespace su3bethe;
using su3bethe::testing::residue_matches;
using su3bethe::testing::residue_samples;

TEST_CASE("highest coefficient: degenerate sizes") {
    RatSampler gen(31, Rat(1));
    const Rat& c = gen.c();
    VarSet<Rat> empty;
    CHECK(highest_coeff_first(empty, empty, empty, empty, c) == Rat(1));
    CHECK(highest_coeff_second(empty, empty, empty, empty, c) == Rat(1));

    std::vector<Rat> pool;
    Rat t = gen.point(pool), x = gen.point(pool);
    // Z_{1,0}(t;x|-;-) collapses to K_1(x|t) = g(x,t)
    CHECK(highest_coeff_first(VarSet<Rat>{t}, VarSet<Rat>{x}, empty, empty, c) ==
          kernel::g(x, t, c));
    CHECK(highest_coeff_second(VarSet<Rat>{t}, VarSet<Rat>{x}, empty, empty, c) ==
          kernel::g(x, t, c));
}

TEST_CASE("highest coefficient: the two representations agree") {
    RatSampler gen(32, Rat(1));
    const Rat& c = gen.c();
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b)
            for (int trial = 0; trial < 4; ++trial) {
                std::vector<Rat> pool;
                VarSet<Rat> t = gen.set(a, pool), x = gen.set(a, pool);
                VarSet<Rat> s = gen.set(b, pool), y = gen.set(b, pool);
                CHECK(highest_coeff_first(t, x, s, y, c) == highest_coeff_second(t, x, s, y, c));
            }
}

TEST_CASE("highest coefficient: symmetric within each set") {
    RatSampler gen(33, Rat(1));
    const Rat& c = gen.c();
    std::vector<Rat> pool;
    VarSet<Rat> t = gen.set(2, pool), x = gen.set(2, pool);
    VarSet<Rat> s = gen.set(2, pool), y = gen.set(2, pool);
    Rat base = highest_coeff_first(t, x, s, y, c);
    std::mt19937_64 shuffler(2);
    for (int trial = 0; trial < 5; ++trial) {
        VarSet<Rat> tp = t, xp = x, sp = s, yp = y;
        std::shuffle(tp.begin(), tp.end(), shuffler);
        std::shuffle(xp.begin(), xp.end(), shuffler);
        std::shuffle(sp.begin(), sp.end(), shuffler);
        std::shuffle(yp.begin(), yp.end(), shuffler);
        CHECK(highest_coeff_first(tp, xp, sp, yp, c) == base);
    }
}

TEST_CASE("lemma 1: partition sum vs both closed forms") {
    RatSampler gen(34, Rat(1));
    const Rat& c = gen.c();
    // m1 = 0 induction base: both sides equal K_{m2}(beta|xi)
    {
        std::vector<Rat> pool;
        VarSet<Rat> beta = gen.set(2, pool), xi = gen.set(2, pool);
        auto [lhs, rhs] = lemma1_pair(xi, VarSet<Rat>{}, beta, c, Lemma1Rhs::Old1);
        CHECK(lhs == dwpf(beta, xi, c));
        CHECK(rhs == dwpf(beta, xi, c));
    }
    for (int m1 = 0; m1 <= 3; ++m1)
        for (int m2 = 0; m2 <= 3; ++m2)
            for (int trial = 0; trial < 3; ++trial) {
                std::vector<Rat> pool;
                VarSet<Rat> alpha = gen.set(m1, pool), beta = gen.set(m2, pool);
                VarSet<Rat> xi = gen.set(m1 + m2, pool);
                auto [l1, r1] = lemma1_pair(xi, alpha, beta, c, Lemma1Rhs::Old1);
                auto [l2, r2] = lemma1_pair(xi, alpha, beta, c, Lemma1Rhs::Old2);
                CHECK(l1 == r1);
                CHECK(l2 == r2);
                CHECK(r1 == r2); // the Red-K linkage between the two closed forms
            }
}

TEST_CASE("lemma 2: partition sum vs determinant, both variants") {
    RatSampler gen(35, Rat(1));
    const Rat& c = gen.c();
    for (int m = 1; m <= 4; ++m)
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<Rat> pool;
            VarSet<Rat> w = gen.set(m, pool), xi = gen.set(m, pool);
            std::vector<Rat> c1, c2;
            for (int i = 0; i < m; ++i) {
                c1.push_back(gen.nonzero());
                c2.push_back(gen.nonzero());
            }
            auto [l1, r1] = lemma2_pair(w, xi, c1, c2, c, Lemma2Variant::Det1);
            auto [l2, r2] = lemma2_pair(w, xi, c1, c2, c, Lemma2Variant::Det2);
            CHECK(l1 == r1);
            CHECK(l2 == r2);
        }
}

TEST_CASE("lemma 2: C1 = 0 leaves the single w_I-empty term") {
    RatSampler gen(36, Rat(1));
    const Rat& c = gen.c();
    std::vector<Rat> pool;
    VarSet<Rat> w = gen.set(3, pool), xi = gen.set(3, pool);
    std::vector<Rat> c1(3, Rat(0)), c2;
    for (int i = 0; i < 3; ++i) c2.push_back(gen.nonzero());
    Rat single = dwpf(w, xi, c) * c2[0] * c2[1] * c2[2];
    auto [lhs, rhs] = lemma2_pair(w, xi, c1, c2, c, Lemma2Variant::Det1);
    CHECK(lhs == single);
    CHECK(rhs == single);
}

TEST_CASE("lemma 2: both sides are degree-one in each C1(w_k) slot") {
    RatSampler gen(37, Rat(1));
    const Rat& c = gen.c();
    std::vector<Rat> pool;
    VarSet<Rat> w = gen.set(3, pool), xi = gen.set(3, pool);
    std::vector<Rat> c1, c2;
    for (int i = 0; i < 3; ++i) {
        c1.push_back(gen.nonzero());
        c2.push_back(gen.nonzero());
    }
    // three collinear samples in the slot-1 value
    Rat x0 = gen.nonzero(), x1 = gen.nonzero(), x2 = x0 + x1;
    for (auto variant : {Lemma2Variant::Det1, Lemma2Variant::Det2}) {
        auto at = [&](const Rat& x) {
            std::vector<Rat> table = c1;
            table[1] = x;
            return lemma2_pair(w, xi, table, c2, c, variant);
        };
        auto [l0, r0] = at(x0);
        auto [l1, r1] = at(x1);
        auto [l2, r2] = at(x2);
        CHECK((l2 - l0) * (x1 - x0) == (l1 - l0) * (x2 - x0));
        CHECK((r2 - r0) * (x1 - x0) == (r1 - r0) * (x2 - x0));
    }
}

TEST_CASE("lemma 3: m = 1 value, random sizes, residue recursion") {
    RatSampler gen(38, Rat(1));
    const Rat& c = gen.c();
    {
        std::vector<Rat> pool;
        Rat alpha = gen.point(pool), beta = gen.point(pool);
        auto [lhs, rhs] = lemma3_pair(VarSet<Rat>{alpha}, VarSet<Rat>{beta}, c);
        CHECK(lhs == -kernel::t(alpha, beta, c));
        CHECK(rhs == -kernel::t(alpha, beta, c));
    }
    for (int m = 1; m <= 4; ++m)
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<Rat> pool;
            VarSet<Rat> alpha = gen.set(m, pool), beta = gen.set(m, pool);
            auto [lhs, rhs] = lemma3_pair(alpha, beta, c);
            CHECK(lhs == rhs);
        }
    // residue of the closed form at alpha_1 -> beta_1 follows the m-1 recursion
    for (int m = 2; m <= 3; ++m) {
        std::vector<Rat> pool;
        VarSet<Rat> alpha_rest = gen.set(m - 1, pool);
        VarSet<Rat> beta = gen.set(m, pool);
        Rat beta1 = beta[0];
        VarSet<Rat> beta_rest(beta.begin() + 1, beta.end());
        auto F = [&](const Rat& eps) {
            VarSet<Rat> alpha = unite(VarSet<Rat>{beta1 + eps}, alpha_rest);
            return lemma3_rhs(alpha, beta, c);
        };
        VarSet<Rat> alpha0 = alpha_rest;        // alpha' at the coincidence
        Rat lam_rec = lemma3_rhs(alpha0, beta_rest, c);
        // (alpha_1 - beta_1) * [-g(alpha_1,beta_1) f(beta',beta_1) f(alpha_1,alpha')] -> -c f f
        Rat expected = -c * kprod(Kernel::F, beta_rest, beta1, c) *
                       kprod(Kernel::F, beta1, alpha_rest, c) * lam_rec;
        CHECK(residue_matches(residue_samples(F, Rat(1, 512), 5), expected));
    }
}

TEST_CASE("float backend agreement on the lemma identities") {
    RatSampler gen(39, Rat(1));
    const Cplx cf(1.0);
    for (int m = 4; m <= 5; ++m) {
        std::vector<Rat> pool;
        VarSet<Rat> alpha = gen.set(m, pool), beta = gen.set(m, pool);
        auto l3 = lemma3_lhs(to_cplx(alpha), to_cplx(beta), cf);
        auto r3 = lemma3_rhs(to_cplx(alpha), to_cplx(beta), cf);
        CHECK(su3bethe::testing::rel_err(l3, r3) < 1e-10);

        VarSet<Rat> xi = gen.set(2 * m, pool);
        auto [l1, r1] = lemma1_pair(to_cplx(xi), to_cplx(alpha), to_cplx(beta), cf, Lemma1Rhs::Old1);
        CHECK(su3bethe::testing::rel_err(l1, r1) < 1e-10);

        std::vector<Rat> wpool;
        VarSet<Rat> w = gen.set(m, wpool), xi2 = gen.set(m, wpool);
        std::vector<Cplx> c1, c2;
        for (int i = 0; i < m; ++i) {
            c1.push_back(to_cplx(gen.nonzero()));
            c2.push_back(to_cplx(gen.nonzero()));
        }
        auto [l2, r2] = lemma2_pair(to_cplx(w), to_cplx(xi2), c1, c2, cf, Lemma2Variant::Det2);
        CHECK(su3bethe::testing::rel_err(l2, r2) < 1e-10);
    }
}
