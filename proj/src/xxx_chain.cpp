#include "su3bethe/xxx_chain.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace su3bethe::chain {

namespace {

constexpr double kPoleGuard = 1e-9;

bool finite(Cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// d/dx log f(x - y) with f(d) = (d + c)/d
Cplx dlogf(Cplx d, Cplx c) { return Cplx(1.0) / (d + c) - Cplx(1.0) / d; }

struct LogSystem {
    const ChainModel& m;
    Cplx kappa;

    // multiplicative defects rho_j - for u equations, sigma_m - for v ones
    bool residual(const std::vector<Cplx>& u, const std::vector<Cplx>& v,
                  Eigen::VectorXcd& out) const {
        const int a = static_cast<int>(u.size());
        const int b = static_cast<int>(v.size());
        const Cplx c = m.c;
        out.resize(a + b);
        for (int j = 0; j < a; ++j) {
            Cplx ratio = kappa / r1(u[static_cast<std::size_t>(j)], m);
            for (int l = 0; l < a; ++l) {
                if (l == j) continue;
                Cplx d = u[static_cast<std::size_t>(j)] - u[static_cast<std::size_t>(l)];
                ratio *= (d + c) / d * (-d) / (-d + c);
            }
            for (int n = 0; n < b; ++n) {
                Cplx d = v[static_cast<std::size_t>(n)] - u[static_cast<std::size_t>(j)];
                ratio *= (d + c) / d;
            }
            if (!finite(ratio) || ratio == Cplx(0.0)) return false;
            out(j) = std::log(ratio);
        }
        for (int n = 0; n < b; ++n) {
            Cplx ratio = kappa; // r3 = 1
            for (int k = 0; k < b; ++k) {
                if (k == n) continue;
                Cplx d = v[static_cast<std::size_t>(k)] - v[static_cast<std::size_t>(n)];
                ratio *= (d + c) / d * (-d) / (-d + c);
            }
            for (int j = 0; j < a; ++j) {
                Cplx d = v[static_cast<std::size_t>(n)] - u[static_cast<std::size_t>(j)];
                ratio *= (d + c) / d;
            }
            if (!finite(ratio) || ratio == Cplx(0.0)) return false;
            out(a + n) = std::log(ratio);
        }
        return true;
    }

    void jacobian(const std::vector<Cplx>& u, const std::vector<Cplx>& v,
                  Eigen::MatrixXcd& jac) const {
        const int a = static_cast<int>(u.size());
        const int b = static_cast<int>(v.size());
        const Cplx c = m.c;
        jac.setZero(a + b, a + b);
        for (int j = 0; j < a; ++j) {
            Cplx uj = u[static_cast<std::size_t>(j)];
            // -d/du_j log r1(u_j) = -N dlogf(u_j)
            jac(j, j) -= static_cast<double>(m.N) * dlogf(uj, c);
            for (int l = 0; l < a; ++l) {
                if (l == j) continue;
                Cplx d = uj - u[static_cast<std::size_t>(l)];
                Cplx t = dlogf(d, c) + dlogf(-d, c); // log f(d) - log f(-d), d/dd
                jac(j, j) += t;
                jac(j, l) -= t;
            }
            for (int n = 0; n < b; ++n) {
                Cplx d = v[static_cast<std::size_t>(n)] - uj;
                jac(j, j) -= dlogf(d, c);
                jac(j, a + n) += dlogf(d, c);
            }
        }
        for (int n = 0; n < b; ++n) {
            Cplx vn = v[static_cast<std::size_t>(n)];
            for (int k = 0; k < b; ++k) {
                if (k == n) continue;
                Cplx d = v[static_cast<std::size_t>(k)] - vn;
                Cplx t = dlogf(d, c) + dlogf(-d, c);
                jac(a + n, a + n) += t;
                jac(a + n, a + k) -= t;
            }
            for (int j = 0; j < a; ++j) {
                Cplx d = vn - u[static_cast<std::size_t>(j)];
                jac(a + n, a + n) += dlogf(d, c);
                jac(a + n, j) -= dlogf(d, c);
            }
        }
    }
};

bool admissible(const std::vector<Cplx>& u, const std::vector<Cplx>& v, const ChainModel& m,
                double collision_threshold) {
    const double scale = std::abs(m.c);
    // Physical roots of short chains stay well inside this radius; Newton
    // runs that drift towards infinity describe descendants of lower-root
    // states, not new solutions.
    const double radius = 25.0 * scale * std::max(1, m.N);
    auto too_close = [&](Cplx x, Cplx y) { return std::abs(x - y) < collision_threshold * scale; };
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (!finite(u[j]) || std::abs(u[j]) > radius) return false;
        // r1 pole at u = 0 and r1 zero at u = -c (singular strings)
        if (std::abs(u[j]) < kPoleGuard * scale) return false;
        if (std::abs(u[j] + m.c) < kPoleGuard * scale) return false;
        for (std::size_t l = j + 1; l < u.size(); ++l)
            if (too_close(u[j], u[l]) || too_close(u[j], u[l] + m.c) || too_close(u[j] + m.c, u[l]))
                return false;
    }
    for (std::size_t n = 0; n < v.size(); ++n) {
        if (!finite(v[n]) || std::abs(v[n]) > radius) return false;
        for (std::size_t k = n + 1; k < v.size(); ++k)
            if (too_close(v[n], v[k]) || too_close(v[n], v[k] + m.c) || too_close(v[n] + m.c, v[k]))
                return false;
        for (std::size_t j = 0; j < u.size(); ++j)
            if (too_close(v[n], u[j])) return false;
    }
    return true;
}

// Additive log form with fixed branch integers. The dense multiplicative
// landscape is basin-fractal under Newton; per branch sector the log form is
// nearly quadratic around its root, so a coarse integer scan plus damped
// Newton locates the physical states systematically.
struct BranchSystem {
    const ChainModel& m;
    Cplx log_kappa;
    const std::vector<int>& branch_u;
    const std::vector<int>& branch_v;

    static Cplx lf(Cplx d, Cplx c) { return std::log((d + c) / d); }

    bool residual(const std::vector<Cplx>& u, const std::vector<Cplx>& v,
                  Eigen::VectorXcd& out) const {
        const int a = static_cast<int>(u.size());
        const int b = static_cast<int>(v.size());
        const Cplx c = m.c;
        const Cplx two_pi_i(0.0, 2.0 * M_PI);
        out.resize(a + b);
        for (int j = 0; j < a; ++j) {
            Cplx uj = u[static_cast<std::size_t>(j)];
            Cplx g = static_cast<double>(m.N) * lf(uj, c) - log_kappa -
                     two_pi_i * static_cast<double>(branch_u[static_cast<std::size_t>(j)]);
            for (int l = 0; l < a; ++l) {
                if (l == j) continue;
                Cplx d = uj - u[static_cast<std::size_t>(l)];
                g -= lf(d, c) - lf(-d, c);
            }
            for (int n = 0; n < b; ++n) g -= lf(v[static_cast<std::size_t>(n)] - uj, c);
            if (!finite(g)) return false;
            out(j) = g;
        }
        for (int n = 0; n < b; ++n) {
            Cplx vn = v[static_cast<std::size_t>(n)];
            Cplx h = log_kappa - two_pi_i * static_cast<double>(branch_v[static_cast<std::size_t>(n)]);
            for (int k = 0; k < b; ++k) {
                if (k == n) continue;
                Cplx d = v[static_cast<std::size_t>(k)] - vn;
                h += lf(d, c) - lf(-d, c);
            }
            for (int j = 0; j < a; ++j) h += lf(vn - u[static_cast<std::size_t>(j)], c);
            if (!finite(h)) return false;
            out(a + n) = h;
        }
        return true;
    }

    void jacobian(const std::vector<Cplx>& u, const std::vector<Cplx>& v,
                  Eigen::MatrixXcd& jac) const {
        const int a = static_cast<int>(u.size());
        const int b = static_cast<int>(v.size());
        const Cplx c = m.c;
        jac.setZero(a + b, a + b);
        for (int j = 0; j < a; ++j) {
            Cplx uj = u[static_cast<std::size_t>(j)];
            jac(j, j) += static_cast<double>(m.N) * dlogf(uj, c);
            for (int l = 0; l < a; ++l) {
                if (l == j) continue;
                Cplx d = uj - u[static_cast<std::size_t>(l)];
                Cplx t = dlogf(d, c) + dlogf(-d, c);
                jac(j, j) -= t;
                jac(j, l) += t;
            }
            for (int n = 0; n < b; ++n) {
                Cplx d = v[static_cast<std::size_t>(n)] - uj;
                jac(j, j) += dlogf(d, c);
                jac(j, a + n) -= dlogf(d, c);
            }
        }
        for (int n = 0; n < b; ++n) {
            Cplx vn = v[static_cast<std::size_t>(n)];
            for (int k = 0; k < b; ++k) {
                if (k == n) continue;
                Cplx d = v[static_cast<std::size_t>(k)] - vn;
                Cplx t = dlogf(d, c) + dlogf(-d, c);
                jac(a + n, a + n) -= t;
                jac(a + n, a + k) += t;
            }
            for (int j = 0; j < a; ++j) {
                Cplx d = vn - u[static_cast<std::size_t>(j)];
                jac(a + n, a + n) += dlogf(d, c);
                jac(a + n, j) -= dlogf(d, c);
            }
        }
    }
};

template <class System>
std::optional<std::pair<std::vector<Cplx>, std::vector<Cplx>>> damped_newton(
    const System& sys, std::vector<Cplx> u, std::vector<Cplx> v, const ChainModel& m,
    const SolveOptions& opts) {
    const int a = static_cast<int>(u.size());
    const int b = static_cast<int>(v.size());
    Eigen::VectorXcd res;
    if (!admissible(u, v, m, opts.collision_threshold / 10) || !sys.residual(u, v, res))
        return std::nullopt;
    double err = res.cwiseAbs().maxCoeff();
    Eigen::MatrixXcd jac;
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        if (err < opts.tolerance) break;
        sys.jacobian(u, v, jac);
        Eigen::VectorXcd step = jac.partialPivLu().solve(res);
        if (!step.allFinite()) return std::nullopt;
        double damp = 1.0;
        bool improved = false;
        for (int half = 0; half < 12; ++half) {
            std::vector<Cplx> nu = u, nv = v;
            for (int j = 0; j < a; ++j) nu[static_cast<std::size_t>(j)] -= damp * step(j);
            for (int n = 0; n < b; ++n) nv[static_cast<std::size_t>(n)] -= damp * step(a + n);
            Eigen::VectorXcd nres;
            if (admissible(nu, nv, m, opts.collision_threshold / 10) && sys.residual(nu, nv, nres)) {
                double nerr = nres.cwiseAbs().maxCoeff();
                if (nerr < err) {
                    u = std::move(nu);
                    v = std::move(nv);
                    res = std::move(nres);
                    err = nerr;
                    improved = true;
                    break;
                }
            }
            damp /= 2;
        }
        if (!improved) return std::nullopt;
    }
    if (err >= opts.tolerance) return std::nullopt;
    return std::make_pair(std::move(u), std::move(v));
}

std::vector<Cplx> sorted_roots(std::vector<Cplx> r) {
    std::sort(r.begin(), r.end(), [](Cplx x, Cplx y) {
        if (std::abs(x.real() - y.real()) > 1e-9) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return r;
}

bool same_multiset(const std::vector<Cplx>& x, const std::vector<Cplx>& y, double tol) {
    if (x.size() != y.size()) return false;
    auto xs = sorted_roots(x), ys = sorted_roots(y);
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (std::abs(xs[i] - ys[i]) > tol) return false;
    return true;
}

} // namespace

Cplx r1(Cplx w, const ChainModel& m) {
    Cplx base = (w + m.c) / w;
    Cplx acc(1.0);
    for (int i = 0; i < m.N; ++i) acc *= base;
    return acc;
}

Cplx r3(Cplx /*w*/, const ChainModel& /*m*/) { return Cplx(1.0); }

double bethe_defect(const BetheRoots& roots, const ChainModel& m, Cplx kappa) {
    LogSystem sys{m, kappa};
    Eigen::VectorXcd res;
    if (!sys.residual(roots.u, roots.v, res)) return std::numeric_limits<double>::infinity();
    return res.size() == 0 ? 0.0 : res.cwiseAbs().maxCoeff();
}

namespace {

// Near-multiple roots satisfy the equations to machine precision over a wide
// basin (the residual is cubic in the displacement) but are not simple Bethe
// roots; the system Jacobian degenerates there, which is the reliable test.
bool simple_root(const std::vector<Cplx>& u, const std::vector<Cplx>& v, const ChainModel& m,
                 Cplx kappa) {
    if (u.empty() && v.empty()) return true;
    LogSystem sys{m, kappa};
    Eigen::MatrixXcd jac;
    sys.jacobian(u, v, jac);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac);
    const auto& sv = svd.singularValues();
    return sv(sv.size() - 1) > 1e-6 * sv(0);
}

} // namespace

std::optional<BetheRoots> solve_from_seed(const std::vector<Cplx>& seed_u,
                                          const std::vector<Cplx>& seed_v, const ChainModel& m,
                                          Cplx kappa, const SolveOptions& opts) {
    if (seed_u.empty() && seed_v.empty()) return BetheRoots{};
    LogSystem sys{m, kappa};
    auto solved = damped_newton(sys, seed_u, seed_v, m, opts);
    if (!solved) return std::nullopt;
    if (!admissible(solved->first, solved->second, m, opts.collision_threshold)) return std::nullopt;
    if (!simple_root(solved->first, solved->second, m, kappa)) return std::nullopt;
    BetheRoots out;
    out.u = std::move(solved->first);
    out.v = std::move(solved->second);
    Eigen::VectorXcd res;
    sys.residual(out.u, out.v, res);
    out.residual = res.size() == 0 ? 0.0 : res.cwiseAbs().maxCoeff();
    return out;
}

namespace {

// all non-decreasing integer tuples of the given length over [lo, hi]
void branch_tuples(int length, int lo, int hi, std::vector<std::vector<int>>& out) {
    out.clear();
    if (length == 0) {
        out.push_back({});
        return;
    }
    std::vector<int> current(static_cast<std::size_t>(length), lo);
    for (;;) {
        out.push_back(current);
        int pos = length - 1;
        while (pos >= 0 && current[static_cast<std::size_t>(pos)] == hi) --pos;
        if (pos < 0) break;
        int next = current[static_cast<std::size_t>(pos)] + 1;
        for (int i = pos; i < length; ++i) current[static_cast<std::size_t>(i)] = next;
    }
}

} // namespace

std::vector<BetheRoots> find_states(const ChainModel& m, int a, int b, Cplx kappa,
                                    std::uint64_t seed, int starts, const SolveOptions& opts) {
    // Weight admissibility: highest-weight Bethe states carry the dominant
    // weight (N-a, a-b, b). Outside the dominant cone the system still has
    // isolated solutions, but they correspond to vanishing vectors.
    if (a < b || m.N - a < a - b)
        throw CardinalityError("find_states: weight (N-a, a-b, b) must be dominant");
    std::vector<BetheRoots> bank;
    if (a == 0 && b == 0) {
        bank.push_back(BetheRoots{});
        return bank;
    }
    std::mt19937_64 rng(seed);
    const double scale = std::abs(m.c);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    std::uniform_real_distribution<double> spread(-1.0, 1.0);

    auto accept = [&](std::optional<BetheRoots>&& solved) {
        if (!solved) return;
        // final validation in the branch-free multiplicative form
        if (bethe_defect(*solved, m, kappa) > 1e-12) return;
        if (!simple_root(solved->u, solved->v, m, kappa)) return;
        for (const auto& known : bank)
            if (same_multiset(known.u, solved->u, 1e-7 * scale) &&
                same_multiset(known.v, solved->v, 1e-7 * scale))
                return;
        bank.push_back(std::move(*solved));
    };

    // Branch-integer scan: Newton per quantum-number sector in the additive
    // log form, seeded on the physical line Re(u) = -c/2.
    const int hu = m.N / 2 + 2;
    const int hv = std::max(1, a / 2 + 2);
    std::vector<std::vector<int>> ubranches, vbranches;
    branch_tuples(a, -hu, hu, ubranches);
    branch_tuples(b, -hv, hv, vbranches);
    Cplx log_kappa = std::log(kappa);
    const int seeds_per_branch = 3;
    for (const auto& bu : ubranches) {
        for (const auto& bv : vbranches) {
            BranchSystem sys{m, log_kappa, bu, bv};
            for (int attempt = 0; attempt < seeds_per_branch; ++attempt) {
                std::vector<Cplx> su, sv;
                for (int j = 0; j < a; ++j) {
                    double lam = 0.6 * bu[static_cast<std::size_t>(j)] + jitter(rng);
                    su.push_back(m.c * Cplx(-0.5 + 0.2 * jitter(rng), -lam - 0.5 * jitter(rng)));
                }
                for (int n = 0; n < b; ++n) {
                    double lam = 0.6 * bv[static_cast<std::size_t>(n)] + jitter(rng);
                    sv.push_back(m.c * Cplx(-1.0 + 0.3 * jitter(rng), -lam - 0.5 * jitter(rng)));
                }
                auto solved = damped_newton(sys, su, sv, m, opts);
                if (!solved) continue;
                if (!admissible(solved->first, solved->second, m, opts.collision_threshold))
                    continue;
                BetheRoots candidate;
                candidate.u = std::move(solved->first);
                candidate.v = std::move(solved->second);
                candidate.residual = bethe_defect(candidate, m, kappa);
                accept(std::optional<BetheRoots>(std::move(candidate)));
            }
        }
    }

    // Random multistart in the multiplicative form catches stragglers.
    for (int trial = 0; trial < starts; ++trial) {
        std::vector<Cplx> su, sv;
        for (int j = 0; j < a; ++j)
            su.push_back(m.c * Cplx(-0.5 + spread(rng), 2.5 * spread(rng)));
        for (int n = 0; n < b; ++n)
            sv.push_back(m.c * Cplx(-1.0 + spread(rng), 2.5 * spread(rng)));
        accept(solve_from_seed(su, sv, m, kappa, opts));
    }

    std::sort(bank.begin(), bank.end(), [](const BetheRoots& x, const BetheRoots& y) {
        auto key = [](const BetheRoots& r) {
            double s = 0.0;
            for (Cplx z : r.u) s += z.real() * 1.0 + z.imag() * 0.01;
            for (Cplx z : r.v) s += z.real() * 1.0 + z.imag() * 0.01;
            return s;
        };
        return key(x) < key(y);
    });
    return bank;
}

std::optional<BetheRoots> continue_in_kappa(const BetheRoots& base, const ChainModel& m,
                                            Cplx kappa_from, Cplx kappa_to, int steps,
                                            const SolveOptions& opts) {
    BetheRoots current = base;
    for (int s = 1; s <= steps; ++s) {
        Cplx kappa = kappa_from + (kappa_to - kappa_from) * (static_cast<double>(s) / steps);
        auto next = solve_from_seed(current.u, current.v, m, kappa, opts);
        if (!next) return std::nullopt;
        current = *next;
    }
    return current;
}

TwistFamily::TwistFamily(const BetheRoots& base, const ChainModel& m, double h, int samples)
    : base_(base), model_(m), h_(h) {
    samples_.emplace_back(1.0, base_);
    for (int i = 0; i < samples; ++i) {
        double node = 1.0 + h_ * std::cos(M_PI * (i + 0.5) / samples);
        auto r = continue_in_kappa(base_, model_, Cplx(1.0), Cplx(node, 0.0), 5);
        if (!r) throw NoConvergence("TwistFamily: continuation failed at a Chebyshev node");
        samples_.emplace_back(node, *r);
    }
}

BetheRoots TwistFamily::at(Cplx kappa) const {
    double target = kappa.real();
    const BetheRoots* nearest = &base_;
    double best = std::abs(target - 1.0);
    for (const auto& [node, roots] : samples_) {
        double d = std::abs(target - node);
        if (d < best) {
            best = d;
            nearest = &roots;
        }
    }
    auto polished = solve_from_seed(nearest->u, nearest->v, model_, kappa);
    if (!polished) throw NoConvergence("TwistFamily: polish failed");
    return *polished;
}

Cplx transfer_eigenvalue(Cplx w, const BetheRoots& roots, const ChainModel& m,
                         std::optional<Cplx> kappa) {
    const Cplx c = m.c;
    VarSet<Cplx> u(roots.u.begin(), roots.u.end());
    VarSet<Cplx> v(roots.v.begin(), roots.v.end());
    Cplx term1 = r1(w, m) * kprod(Kernel::F, u, w, c);
    Cplx term2 = kappa.value_or(Cplx(1.0)) * kprod(Kernel::F, w, u, c) * kprod(Kernel::F, v, w, c);
    Cplx term3 = r3(w, m) * kprod(Kernel::F, w, v, c);
    return term1 + term2 + term3;
}

Cplx tau0_rescaled(const BetheRoots& roots, const ChainModel& m) {
    Cplx acc(1.0);
    for (int i = 0; i < m.N; ++i) acc *= m.c;
    for (Cplx uj : roots.u) acc *= (uj + m.c) / uj;
    return acc;
}

namespace {

BetheData<Cplx> chain_data(const BetheRoots& bra, Cplx kappa, const BetheRoots& ket,
                           const ChainModel& m) {
    BetheData<Cplx> d;
    d.uC.assign(bra.u.begin(), bra.u.end());
    d.vC.assign(bra.v.begin(), bra.v.end());
    d.uB.assign(ket.u.begin(), ket.u.end());
    d.vB.assign(ket.v.begin(), ket.v.end());
    d.kappa = kappa;
    d.c = m.c;
    for (Cplx p : d.uB) d.r1_uB.push_back(r1(p, m));
    for (Cplx p : d.uC) d.r1_uC.push_back(r1(p, m));
    for (Cplx p : d.vB) d.r3_vB.push_back(r3(p, m));
    for (Cplx p : d.vC) d.r3_vC.push_back(r3(p, m));
    return d;
}

} // namespace

Cplx chain_scalar_product(const BetheRoots& bra, Cplx kappa, const BetheRoots& ket,
                          const ChainModel& m) {
    if (bra.a() != ket.a() || bra.b() != ket.b())
        throw CardinalityError("chain_scalar_product: states from different (a, b) sectors");
    return scalar_product_det(chain_data(bra, kappa, ket, m));
}

Cplx chain_norm(const BetheRoots& roots, const ChainModel& m) {
    VarSet<Cplx> u(roots.u.begin(), roots.u.end());
    VarSet<Cplx> v(roots.v.begin(), roots.v.end());
    std::vector<Cplx> X1, X3;
    for (Cplx uj : roots.u) X1.push_back(-static_cast<double>(m.N) * m.c / (uj * (uj + m.c)));
    for (Cplx vn : roots.v) {
        (void)vn;
        X3.push_back(Cplx(0.0)); // r3 is constant
    }
    return norm_det(u, v, X1, X3, m.c);
}

Cplx form_factor_e22(int site, const TwistFamily& bra_family, const BetheRoots& ket,
                     const ChainModel& m, const FormFactorOptions& opts) {
    if (site < 1 || site > m.N) throw Error("form_factor_e22: site out of range");
    Cplx tau0_ket = tau0_rescaled(ket, m);
    auto G = [&](double kappa) {
        BetheRoots bra = bra_family.at(Cplx(kappa, 0.0));
        Cplx rho = tau0_rescaled(bra, m) / tau0_ket;
        Cplx ratio_m(1.0), ratio_m1(1.0);
        for (int i = 0; i < site; ++i) ratio_m *= rho;
        for (int i = 0; i < site - 1; ++i) ratio_m1 *= rho;
        return (ratio_m - ratio_m1) * chain_scalar_product(bra, Cplx(kappa, 0.0), ket, m);
    };
    auto central = [&](double h) { return (G(1.0 + h) - G(1.0 - h)) / (2.0 * h); };
    Cplx coarse = central(opts.step);
    Cplx fine = central(opts.step / 2);
    return (4.0 * fine - coarse) / 3.0;
}

double min_root_separation(const BetheRoots& bra, const BetheRoots& ket) {
    double d = std::numeric_limits<double>::infinity();
    for (Cplx x : bra.u)
        for (Cplx y : ket.u) d = std::min(d, std::abs(x - y));
    for (Cplx x : bra.v)
        for (Cplx y : ket.v) d = std::min(d, std::abs(x - y));
    return d;
}

Cplx form_factor_e22_analytic(int site, const BetheRoots& bra, const BetheRoots& ket,
                              const ChainModel& m) {
    if (site < 1 || site > m.N) throw Error("form_factor_e22_analytic: site out of range");
    // states sharing a root need the modified (limit-row) treatment; this
    // path covers the generic configuration only
    if (min_root_separation(bra, ket) < 1e-8 * std::abs(m.c))
        throw DegenerateError("form_factor_e22_analytic: bra and ket share a Bethe root");
    // ratio factor at kappa = 1 (vanishes for identical states; this path is
    // for distinct states where S(1) = 0 kills the other product-rule term)
    Cplx rho = tau0_rescaled(bra, m) / tau0_rescaled(ket, m);
    Cplx ratio_m(1.0), ratio_m1(1.0);
    for (int i = 0; i < site; ++i) ratio_m *= rho;
    for (int i = 0; i < site - 1; ++i) ratio_m1 *= rho;

    auto d1 = chain_data(bra, Cplx(1.0), ket, m);
    auto d0 = d1;
    d0.kappa = Cplx(0.0);
    Matrix<Cplx> n1 = build_block_matrix(d1, BlockConstruction::Explicit);
    Matrix<Cplx> n0 = build_block_matrix(d0, BlockConstruction::Explicit);
    auto omega = omega_vector(d1);

    std::size_t pivot = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        double mag = std::abs(omega[i]);
        if (mag > best) {
            best = mag;
            pivot = i;
        }
    }
    if (best == 0.0) throw DegenerateError("form_factor_e22_analytic: zero omega vector");

    // det N(kappa) with the pivot row replaced by sum_j (Omega_j/Omega_p) Row_j
    // becomes proportional to (kappa - 1); its kappa-derivative at 1 replaces
    // the pivot row with sum_j (Omega_j/Omega_p) dRow_j/dkappa.
    Matrix<Cplx> d_det = n1;
    const std::size_t dim = n1.size();
    for (std::size_t col = 0; col < dim; ++col) {
        Cplx acc(0.0);
        for (std::size_t row = 0; row < dim; ++row)
            acc += omega[row] / omega[pivot] * (n1(row, col) - n0(row, col));
        d_det(pivot, col) = acc;
    }
    Cplx dS = det_prefactor(d1) * determinant(d_det);
    return (ratio_m - ratio_m1) * dS;
}

} // namespace su3bethe::chain
