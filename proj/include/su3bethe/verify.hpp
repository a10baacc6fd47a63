#ifndef SU3BETHE_VERIFY_HPP
#define SU3BETHE_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "su3bethe/sampling.hpp"
#include "su3bethe/scalar_product.hpp"
#include "su3bethe/xxx_chain.hpp"

namespace su3bethe::verify {

// Seeded identity suites shared by the CLI `verify` command and the
// acceptance binary. Every suite runs `trials` random instances and reports
// the first failing witness with exact inputs.

struct SuiteConfig {
    std::uint64_t seed = 1;
    int trials = 50;
    int max_a = 3;
    int max_b = 3;
    int max_m = 4;
    Rat c = Rat(1);
    // kappa is sampled per trial unless fixed here
    bool fixed_kappa = false;
    Rat kappa = Rat(1);
    double norm_limit_tol = 1e-8;
};

struct SuiteResult {
    std::string name;
    int trials = 0;
    int passed = 0;
    std::string first_failure; // empty when everything passed
    bool ok() const { return passed == trials && trials > 0; }
};

SuiteResult run_kernels(const SuiteConfig& cfg);
SuiteResult run_dwpf(const SuiteConfig& cfg);
SuiteResult run_lemma1(const SuiteConfig& cfg);
SuiteResult run_lemma2(const SuiteConfig& cfg);
SuiteResult run_lemma3(const SuiteConfig& cfg);
SuiteResult run_zcoeff(const SuiteConfig& cfg);
SuiteResult run_oracle(const SuiteConfig& cfg);        // determinant == partition sum
SuiteResult run_orthogonality(const SuiteConfig& cfg); // kappa = 1, incl. partial coincidence
SuiteResult run_omega(const SuiteConfig& cfg);
SuiteResult run_spurious(const SuiteConfig& cfg);
SuiteResult run_norm_limit(const SuiteConfig& cfg);    // float Richardson check
SuiteResult run_derivation_chain(const SuiteConfig& cfg);

const std::vector<std::string>& suite_names();
SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg);

// ---------------------------------------------------------------------------
// Chain-facing checks (criteria 8 and 9).
// ---------------------------------------------------------------------------

struct SpectrumCheckConfig {
    int n_min = 2;
    int n_max = 6;
    int max_roots = 3; // a + b cap
    Cplx c{1.0, 0.0};
    std::vector<double> twists{0.7, 1.3};
    int w_samples = 5;
    int starts = 300;
    std::uint64_t seed = 2024;
    double tau_tol = 1e-9;
    double rtt_tol = 1e-11;
};

struct SpectrumCheckResult {
    int states_checked = 0;
    int tau_matches = 0;
    double worst_tau_err = 0.0;
    double worst_rtt_defect = 0.0;
    bool ok = false;
    std::string detail;
};

SpectrumCheckResult run_spectrum_check(const SpectrumCheckConfig& cfg);

/// Normalization-free two-sided form-factor comparison between the Bethe
/// determinant representation and exact diagonalization:
///   P = F(bra,ket) F(ket,bra) / (norm_bra norm_ket)
/// against the matching product of dense matrix elements.
struct FormFactorCheckConfig {
    int n_min = 2;
    int n_max = 5;
    Cplx c{1.0, 0.0};
    int starts = 300;
    std::uint64_t seed = 77;
    double diag_sum_tol = 1e-8;  // sum_m F_m / norm = a - b
    double diag_m_tol = 1e-9;    // m-independence
    double offdiag_tol = 1e-7;   // vs exact diagonalization
    double gensol_tol = 1e-10;   // inverse scattering vs direct embedding
};

struct FormFactorCheckResult {
    int diagonal_states = 0;
    int offdiagonal_pairs = 0;
    double worst_diag_sum_err = 0.0;
    double worst_diag_m_spread = 0.0;
    double worst_offdiag_err = 0.0;
    double worst_gensol_err = 0.0;
    bool ok = false;
    std::string detail;
};

FormFactorCheckResult run_form_factor_check(const FormFactorCheckConfig& cfg);

} // namespace su3bethe::verify

#endif
