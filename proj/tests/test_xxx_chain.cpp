#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "su3bethe/verify.hpp"
#include "su3bethe/xxx_chain.hpp"
#include "test_support.hpp"

using namespace su3bethe;

TEST_CASE("model functions match the dense vacuum eigenvalues") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int N = 1; N <= 4; ++N) {
        ChainModel m{N, Cplx(1.0), Cplx(1.0)};
        for (int trial = 0; trial < 3; ++trial) {
            Cplx w(dist(rng), dist(rng));
            if (std::abs(w) < 0.2) continue;
            auto t = lattice::build_monodromy(w, m);
            long dim = lattice::dim_of(N);
            Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(dim);
            vac(0) = 1.0;
            Cplx lambda1 = (t.block(0, 0) * vac)(0);
            Cplx lambda2 = (t.block(1, 1) * vac)(0);
            Cplx lambda3 = (t.block(2, 2) * vac)(0);
            CHECK(std::abs(chain::r1(w, m) - lambda1 / lambda2) < 1e-11);
            CHECK(std::abs(chain::r3(w, m) - lambda3 / lambda2) < 1e-13);
            CHECK(std::abs(lambda2 - Cplx(1.0)) < 1e-13); // lambda_2 = 1: no normalization needed
        }
    }
}

TEST_CASE("analytic root at N = 2, a = 1: u = -c/2") {
    ChainModel m{2, Cplx(1.0), Cplx(1.0)};
    auto states = chain::find_states(m, 1, 0, Cplx(1.0), 123, 60);
    REQUIRE(states.size() == 1);
    CHECK(std::abs(states[0].u[0] - Cplx(-0.5)) < 1e-12);
    CHECK(states[0].residual < 1e-13);
    CHECK(chain::bethe_defect(states[0], m, Cplx(1.0)) < 1e-12);
}

TEST_CASE("solver stability: perturbed seeds rediscover the same states") {
    ChainModel m{4, Cplx(1.0), Cplx(1.0)};
    auto states = chain::find_states(m, 2, 1, Cplx(1.0), 5, 200);
    REQUIRE(states.size() >= 2);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);
    for (const auto& st : states) {
        std::vector<Cplx> su = st.u;
        for (auto& z : su) z += Cplx(jitter(rng), jitter(rng));
        auto again = chain::solve_from_seed(su, st.v, m, Cplx(1.0));
        REQUIRE(again.has_value());
        for (std::size_t i = 0; i < su.size(); ++i) {
            double best = 1e9;
            for (const auto& z : again->u) best = std::min(best, std::abs(z - st.u[i]));
            CHECK(best < 1e-10);
        }
    }
}

TEST_CASE("kappa homotopy: roots deform continuously") {
    ChainModel m{3, Cplx(1.0), Cplx(1.0)};
    auto states = chain::find_states(m, 2, 1, Cplx(1.0), 7, 200);
    REQUIRE(!states.empty());
    const auto& base = states[0];
    BetheRoots current = base;
    for (int step = 1; step <= 10; ++step) {
        double kappa_prev = 1.0 + 0.01 * (step - 1);
        double kappa = 1.0 + 0.01 * step;
        auto next = chain::continue_in_kappa(current, m, Cplx(kappa_prev, 0.0), Cplx(kappa, 0.0), 1);
        REQUIRE(next.has_value());
        // small kappa step, small root motion
        for (std::size_t i = 0; i < current.u.size(); ++i) {
            double best = 1e9;
            for (const auto& z : next->u) best = std::min(best, std::abs(z - current.u[i]));
            CHECK(best < 0.2);
        }
        current = *next;
        CHECK(chain::bethe_defect(current, m, Cplx(kappa, 0.0)) < 1e-12);
    }
}

TEST_CASE("transfer eigenvalue: vacuum formula and pole-free on-shell values") {
    ChainModel m{3, Cplx(1.0), Cplx(1.0)};
    BetheRoots vacuum;
    Cplx w(0.37, 0.21);
    CHECK(std::abs(chain::transfer_eigenvalue(w, vacuum, m) - (chain::r1(w, m) + 2.0)) < 1e-13);

    auto states = chain::find_states(m, 2, 1, Cplx(1.0), 11, 250);
    for (const auto& st : states) {
        // residue of tau at w -> u_j cancels on shell
        for (const auto& uj : st.u) {
            Cplx just_off = uj + Cplx(1e-5, 0.0);
            Cplx just_off2 = uj + Cplx(2e-5, 0.0);
            Cplx t1 = chain::transfer_eigenvalue(just_off, st, m);
            Cplx t2 = chain::transfer_eigenvalue(just_off2, st, m);
            // pole would double t1 - t2 as the distance halves; estimate residue
            Cplx residue_est = (t1 - t2) / (1.0 / 1e-5 - 1.0 / 2e-5);
            CHECK(std::abs(residue_est) < 1e-9 * std::max(1.0, std::abs(t1)));
        }
    }
}

TEST_CASE("solved states appear in the dense sector spectrum") {
    for (int N = 2; N <= 4; ++N) {
        ChainModel m{N, Cplx(1.0), Cplx(1.0)};
        for (auto [a, b] : {std::pair<int, int>{1, 0}, {2, 0}, {2, 1}}) {
            if (N - a < a - b) continue; // dominant weights only
            auto states = chain::find_states(m, a, b, Cplx(1.0), 13, 200);
            if (states.empty()) continue;
            auto sector = lattice::weight_sector(N, N - a, a - b, b);
            Cplx w(0.63, 0.34);
            auto eig = lattice::sector_spectrum(w, m, sector);
            for (const auto& st : states) {
                Cplx tau = chain::transfer_eigenvalue(w, st, m);
                auto match = lattice::match_eigenvalue(eig.eigenvalues, tau);
                CHECK(match.distance < 1e-9 * std::max(1.0, std::abs(tau)));
            }
        }
    }
}

TEST_CASE("twisted states match the twisted spectrum") {
    ChainModel m{3, Cplx(1.0), Cplx(1.0)};
    for (double kappa : {0.7, 1.3}) {
        auto states = chain::find_states(m, 2, 1, Cplx(kappa, 0.0), 17, 200);
        REQUIRE(!states.empty());
        auto sector = lattice::weight_sector(3, 1, 1, 1);
        Cplx w(-0.41, 0.28);
        auto eig = lattice::sector_spectrum(w, m, sector, Cplx(kappa, 0.0));
        for (const auto& st : states) {
            Cplx tau = chain::transfer_eigenvalue(w, st, m, Cplx(kappa, 0.0));
            auto match = lattice::match_eigenvalue(eig.eigenvalues, tau);
            CHECK(match.distance < 1e-9 * std::max(1.0, std::abs(tau)));
        }
    }
}

TEST_CASE("diagonal form factors: sum rule and translation invariance") {
    ChainModel m{3, Cplx(1.0), Cplx(1.0)};
    for (auto [a, b] : {std::pair<int, int>{1, 0}, {2, 1}}) {
        auto states = chain::find_states(m, a, b, Cplx(1.0), 19, 250);
        if (states.empty()) continue;
        const auto& st = states[0];
        chain::TwistFamily family(st, m);
        Cplx norm = chain::chain_norm(st, m);
        std::vector<Cplx> fm;
        for (int site = 1; site <= m.N; ++site)
            fm.push_back(chain::form_factor_e22(site, family, st, m));
        Cplx sum(0.0);
        for (Cplx f : fm) sum += f;
        CHECK(std::abs(sum / norm - Cplx(a - b, 0.0)) < 1e-8);
        for (Cplx f : fm) CHECK(std::abs(f - fm[0]) < 1e-9 * std::max(1.0, std::abs(fm[0])));

        // the Richardson derivative is stable under halving the base step
        chain::FormFactorOptions coarse{1e-3}, fine{5e-4};
        Cplx fc = chain::form_factor_e22(1, family, st, m, coarse);
        Cplx ff = chain::form_factor_e22(1, family, st, m, fine);
        CHECK(std::abs(fc - ff) < 1e-6 * std::max(1.0, std::abs(ff)));
    }
}

TEST_CASE("form-factor acceptance machinery on a small window") {
    verify::FormFactorCheckConfig cfg;
    cfg.n_min = 2;
    cfg.n_max = 3;
    cfg.starts = 150;
    auto res = verify::run_form_factor_check(cfg);
    INFO(res.detail);
    CHECK(res.diagonal_states > 0);
    CHECK(res.offdiagonal_pairs > 0);
    CHECK(res.worst_diag_sum_err <= cfg.diag_sum_tol);
    CHECK(res.worst_diag_m_spread <= cfg.diag_m_tol);
    CHECK(res.worst_offdiag_err <= cfg.offdiag_tol);
    CHECK(res.worst_gensol_err <= cfg.gensol_tol);
}

TEST_CASE("spectrum acceptance machinery on a small window") {
    verify::SpectrumCheckConfig cfg;
    cfg.n_min = 2;
    cfg.n_max = 3;
    cfg.starts = 150;
    auto res = verify::run_spectrum_check(cfg);
    INFO(res.detail);
    CHECK(res.ok);
    CHECK(res.states_checked > 0);
}
