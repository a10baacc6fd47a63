#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "su3bethe/kernels.hpp"
#include "su3bethe/sampling.hpp"

using namespace su3bethe;

TEST_CASE("kernel values at fixed points") {
    Rat c(1);
    CHECK(eval_kernel(Kernel::G, Rat(3), Rat(1), c) == Rat(1, 2));
    CHECK(eval_kernel(Kernel::F, Rat(3), Rat(1), c) == Rat(3, 2));
    CHECK(eval_kernel(Kernel::H, Rat(3), Rat(1), c) == Rat(3));
    CHECK(eval_kernel(Kernel::T, Rat(3), Rat(1), c) == Rat(1, 6));
}

TEST_CASE("kernel pole preconditions") {
    Rat c(1);
    CHECK_THROWS_AS(eval_kernel(Kernel::G, Rat(2), Rat(2), c), PoleError);
    CHECK_THROWS_AS(eval_kernel(Kernel::F, Rat(2), Rat(2), c), PoleError);
    CHECK_THROWS_AS(eval_kernel(Kernel::T, Rat(2), Rat(2), c), PoleError);
    CHECK_THROWS_AS(eval_kernel(Kernel::T, Rat(1), Rat(2), c), PoleError); // x-y = -c
    CHECK_NOTHROW(eval_kernel(Kernel::H, Rat(2), Rat(2), c));
}

TEST_CASE("shift and inversion identities at random rationals") {
    RatSampler gen(20250601, Rat(1));
    const Rat& c = gen.c();
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Rat> pool;
        Rat x = gen.point(pool);
        Rat y = gen.point(pool);
        // avoid additionally x-c == y handled by admissibility (d != +-c)
        CHECK(kernel::g(x, y, c) == -kernel::g(y, x, c));
        CHECK(kernel::f(x, y, c) == Rat(1) + kernel::g(x, y, c));
        CHECK(kernel::h(x - c, y, c) * kernel::g(x, y, c) == Rat(1));
        CHECK(kernel::f(x - c, y, c) * kernel::f(y, x, c) == Rat(1));
        CHECK(kernel::t(x - c, y, c) == kernel::t(y, x, c));
    }
}

TEST_CASE("set products: conventions and brute-force oracle") {
    RatSampler gen(7, Rat(1));
    const Rat& c = gen.c();
    VarSet<Rat> empty;
    std::vector<Rat> pool;
    VarSet<Rat> s = gen.set(4, pool);

    CHECK(set_product(Kernel::F, empty, s, c) == Rat(1));
    CHECK(set_product(Kernel::F, s, empty, c) == Rat(1));

    VarSet<Rat> one_a{s[0]}, one_b{s[1]};
    CHECK(set_product(Kernel::F, one_a, one_b, c) == kernel::f(s[0], s[1], c));

    // double product against an explicit two-loop evaluation
    VarSet<Rat> A{s[0], s[1]}, B{s[2], s[3]};
    Rat expect(1);
    for (const auto& a : A)
        for (const auto& b : B) expect *= (a - b + c) / (a - b);
    CHECK(set_product(Kernel::F, A, B, c) == expect);

    // factorization over a disjoint union
    std::vector<Rat> pool2 = pool;
    VarSet<Rat> Ap = gen.set(2, pool2);
    CHECK(set_product(Kernel::T, unite(A, Ap), B, c) ==
          set_product(Kernel::T, A, B, c) * set_product(Kernel::T, Ap, B, c));
}

TEST_CASE("exact and float backends agree to 1e-12 on rational inputs") {
    RatSampler gen(99, Rat(1));
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Rat> pool;
        Rat x = gen.point(pool), y = gen.point(pool);
        for (Kernel k : {Kernel::G, Kernel::F, Kernel::H, Kernel::T}) {
            Rat exact = eval_kernel(k, x, y, gen.c());
            Cplx approx = eval_kernel(k, to_cplx(x), to_cplx(y), Cplx(1.0));
            CHECK(std::abs(approx - to_cplx(exact)) <= 1e-12 * (1.0 + std::abs(approx)));
        }
    }
}
