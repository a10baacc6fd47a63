// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its sizes, trial counts, and tolerances.

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "su3bethe/verify.hpp"

using namespace su3bethe;

namespace {

struct Outcome {
    int criterion;
    bool pass;
    std::string summary;
};

Outcome criterion1() {
    verify::SuiteConfig cfg;
    cfg.seed = 101;
    cfg.trials = 50; // 50 instances at each (a,b) in {0..3}^2
    cfg.max_a = 3;
    cfg.max_b = 3;
    auto r = verify::run_oracle(cfg);
    return {1, r.ok(),
            "scalar_product_det == scalar_product_oracle exactly, " + std::to_string(r.passed) +
                "/" + std::to_string(r.trials) + " instances over (a,b) in {0..3}^2" +
                (r.ok() ? "" : "; first failure: " + r.first_failure)};
}

Outcome criterion2() {
    verify::SuiteConfig cfg;
    cfg.seed = 202;
    cfg.trials = 200;
    cfg.max_m = 4;
    auto l1 = verify::run_lemma1(cfg);
    auto l2 = verify::run_lemma2(cfg);
    auto l3 = verify::run_lemma3(cfg);
    bool ok = l1.ok() && l2.ok() && l3.ok();
    std::string summary = "lemma identities exact: partition/closed-form " +
                          std::to_string(l1.passed) + "/200, determinant forms " +
                          std::to_string(l2.passed) + "/200, double-sum product " +
                          std::to_string(l3.passed) + "/200";
    if (!ok)
        summary += "; first failure: " + (l1.ok() ? (l2.ok() ? l3 : l2) : l1).first_failure;
    return {2, ok, summary};
}

Outcome criterion3() {
    verify::SuiteConfig cfg;
    cfg.seed = 303;
    cfg.trials = 120;
    cfg.max_m = 5;
    auto r = verify::run_dwpf(cfg);
    return {3, r.ok(),
            "DWPF shift identities exact and residue recursion certified (exact probe), " +
                std::to_string(r.passed) + "/" + std::to_string(r.trials) + " instances, n <= 5" +
                (r.ok() ? "" : "; first failure: " + r.first_failure)};
}

Outcome criterion4() {
    verify::SuiteConfig cfg;
    cfg.seed = 404;
    cfg.trials = 100;
    cfg.max_a = 3;
    cfg.max_b = 3;
    auto r = verify::run_zcoeff(cfg);
    return {4, r.ok(),
            "highest-coefficient representations agree exactly, " + std::to_string(r.passed) +
                "/" + std::to_string(r.trials) + " instances over (a,b) in {0..3}^2" +
                (r.ok() ? "" : "; first failure: " + r.first_failure)};
}

Outcome criterion5() {
    verify::SuiteConfig cfg;
    cfg.seed = 505;
    cfg.trials = 100;
    cfg.max_a = 3;
    cfg.max_b = 3;
    auto orth = verify::run_orthogonality(cfg);
    auto omega = verify::run_omega(cfg);
    bool ok = orth.ok() && omega.ok();
    std::string summary = "kappa = 1 orthogonality: det = 0 and Omega^T N = 0 exactly (incl. "
                          "partial coincidences), " +
                          std::to_string(orth.passed) + "/" + std::to_string(orth.trials) +
                          " + " + std::to_string(omega.passed) + "/" + std::to_string(omega.trials);
    if (!ok) summary += "; first failure: " + (orth.ok() ? omega : orth).first_failure;
    return {5, ok, summary};
}

Outcome criterion6() {
    verify::SuiteConfig cfg;
    cfg.seed = 606;
    cfg.trials = 25;
    cfg.max_a = 2;
    cfg.max_b = 2;
    auto r = verify::run_norm_limit(cfg);
    return {6, r.ok(),
            "norm determinant matches the Richardson-extrapolated merge limit to 1e-8, " +
                std::to_string(r.passed) + "/" + std::to_string(r.trials) + " instances, a,b <= 2" +
                (r.ok() ? "" : "; first failure: " + r.first_failure)};
}

Outcome criterion7() {
    verify::SuiteConfig cfg;
    cfg.seed = 707;
    cfg.trials = 100;
    cfg.max_a = 3;
    cfg.max_b = 3;
    auto r = verify::run_spurious(cfg);
    return {7, r.ok(),
            "spurious-pole column ratios equal r3/r1 exactly and det N = 0, " +
                std::to_string(r.passed) + "/" + std::to_string(r.trials) + " instances" +
                (r.ok() ? "" : "; first failure: " + r.first_failure)};
}

Outcome criterion8() {
    verify::SpectrumCheckConfig cfg; // N in 2..6, a+b <= 3, twists 0.7/1.3, 5 w, 1e-9/1e-11
    auto r = verify::run_spectrum_check(cfg);
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "chain spectrum: %d/%d tau values matched (worst rel err %.2e), RTT defect %.2e",
                  r.tau_matches, r.states_checked, r.worst_tau_err, r.worst_rtt_defect);
    return {8, r.ok, std::string(buf) + (r.detail.empty() ? "" : "; " + r.detail)};
}

Outcome criterion9() {
    verify::FormFactorCheckConfig cfg; // N <= 5, tolerances 1e-8 / 1e-9 / 1e-7 / 1e-10
    auto r = verify::run_form_factor_check(cfg);
    char buf[320];
    std::snprintf(buf, sizeof(buf),
                  "form factors: %d diagonal states (sum-rule err %.2e, m-spread %.2e), %d "
                  "off-diagonal pairs vs dense oracle (worst %.2e), inverse-scattering %.2e",
                  r.diagonal_states, r.worst_diag_sum_err, r.worst_diag_m_spread,
                  r.offdiagonal_pairs, r.worst_offdiag_err, r.worst_gensol_err);
    return {9, r.ok, std::string(buf) + (r.detail.empty() ? "" : "; " + r.detail)};
}

Outcome criterion10() {
    verify::SuiteConfig cfg;
    cfg.seed = 1010;
    cfg.trials = 50;
    cfg.max_a = 2;
    cfg.max_b = 2;
    auto r = verify::run_derivation_chain(cfg);
    return {10, r.ok(),
            "block-row expansion and four-way partition sum equal the single determinant "
            "exactly, " +
                std::to_string(r.passed) + "/" + std::to_string(r.trials) + " instances, a,b <= 2" +
                (r.ok() ? "" : "; first failure: " + r.first_failure)};
}

Outcome run_criterion(int n) {
    switch (n) {
        case 1: return criterion1();
        case 2: return criterion2();
        case 3: return criterion3();
        case 4: return criterion4();
        case 5: return criterion5();
        case 6: return criterion6();
        case 7: return criterion7();
        case 8: return criterion8();
        case 9: return criterion9();
        case 10: return criterion10();
        default: return {n, false, "unknown criterion"};
    }
}

} // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            wanted.push_back(std::atoi(argv[++i]));
        }
    }
    if (wanted.empty())
        for (int n = 1; n <= 10; ++n) wanted.push_back(n);

    bool all_ok = true;
    for (int n : wanted) {
        Outcome out = run_criterion(n);
        std::printf("%s criterion %d: %s\n", out.pass ? "PASS" : "FAIL", out.criterion,
                    out.summary.c_str());
        std::fflush(stdout);
        all_ok = all_ok && out.pass;
    }
    return all_ok ? 0 : 1;
}
