#ifndef SU3BETHE_SAMPLING_HPP
#define SU3BETHE_SAMPLING_HPP

#include <random>
#include <vector>

#include "su3bethe/kernels.hpp"

namespace su3bethe {

// Seeded generator of pole-avoiding rational configurations for the identity
// suites. Numerators are uniform in [-20, 20], denominators in [1, 10];
// points are rejected until every pairwise difference in the running pool
// stays away from {0, +-c, +-2c} (covers the kernel poles, the shifted-set
// combinations, and the u^2 - c^2 denominators of the norm blocks).

class RatSampler {
  public:
    RatSampler(std::uint64_t seed, Rat c) : rng_(seed), c_(std::move(c)) {}

    const Rat& c() const { return c_; }

    Rat raw() {
        std::uniform_int_distribution<long> num(-20, 20);
        std::uniform_int_distribution<long> den(1, 10);
        return Rat(num(rng_), den(rng_));
    }

    bool admissible(const Rat& x, const std::vector<Rat>& pool) const {
        for (const auto& p : pool) {
            Rat d = x - p;
            if (sgn(d) == 0) return false;
            if (d == c_ || d == -c_) return false;
            Rat d2 = d / 2;
            if (d2 == c_ || d2 == -c_) return false;
        }
        return true;
    }

    /// Next point compatible with everything drawn so far in `pool`; appends it.
    Rat point(std::vector<Rat>& pool) {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            Rat x = raw();
            if (admissible(x, pool)) {
                pool.push_back(x);
                return x;
            }
        }
        throw Error("RatSampler: could not find admissible point (pool too constrained)");
    }

    VarSet<Rat> set(int n, std::vector<Rat>& pool) {
        VarSet<Rat> out;
        out.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) out.push_back(point(pool));
        return out;
    }

    /// Independent set with its own fresh pool (no cross-set constraints).
    VarSet<Rat> set(int n) {
        std::vector<Rat> pool;
        return set(n, pool);
    }

    /// Nonzero rational, handy for free parameters (X-values, C-tables).
    Rat nonzero() {
        for (;;) {
            Rat x = raw();
            if (sgn(x) != 0) return x;
        }
    }

    std::mt19937_64& rng() { return rng_; }

  private:
    std::mt19937_64 rng_;
    Rat c_;
};

} // namespace su3bethe

#endif
