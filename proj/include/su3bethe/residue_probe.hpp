#ifndef SU3BETHE_RESIDUE_PROBE_HPP
#define SU3BETHE_RESIDUE_PROBE_HPP

#include <functional>
#include <vector>

#include "su3bethe/scalar.hpp"

namespace su3bethe::probe {

// Exact residue probe for rational functions with at most a simple pole at
// eps = 0. The samples A_k = eps_k F(eps_k) at eps_k = eps0 / 2^k tend to the
// residue; geometric decay of A_k certifies a zero eps^{-1} coefficient, and
// the Richardson pair 2 A_{k+1} - A_k converges to the residue at order
// eps^2. All comparisons are exact rational arithmetic.

inline std::vector<Rat> residue_samples(const std::function<Rat(const Rat&)>& f, const Rat& eps0,
                                        int count) {
    std::vector<Rat> out;
    Rat eps = eps0;
    for (int k = 0; k < count; ++k) {
        out.push_back(eps * f(eps));
        eps /= 2;
    }
    return out;
}

inline bool residue_vanishes(const std::vector<Rat>& samples) {
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        Rat prev = abs(samples[k]);
        Rat next = abs(samples[k + 1]);
        if (sgn(prev) == 0) {
            if (sgn(next) != 0) return false;
            continue;
        }
        if (3 * next > 2 * prev) return false;
    }
    return true;
}

inline bool residue_matches(const std::vector<Rat>& samples, const Rat& expected) {
    std::vector<Rat> errors;
    for (std::size_t k = 0; k + 1 < samples.size(); ++k)
        errors.push_back(abs(2 * samples[k + 1] - samples[k] - expected));
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        if (sgn(errors[k]) == 0) {
            if (sgn(errors[k + 1]) != 0) return false;
            continue;
        }
        if (2 * errors[k + 1] > errors[k]) return false; // expect quartering, allow 1/2
    }
    return true;
}

} // namespace su3bethe::probe

#endif
