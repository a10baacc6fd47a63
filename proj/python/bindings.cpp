// Python bindings for the main operations: kernels, DWPF, highest
// coefficients, scalar products (exact and float), norms, Bethe solving,
// spectra and form factors. Exact rationals cross the boundary as "p/q"
// strings, complex numbers natively.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "su3bethe/verify.hpp"

namespace py = pybind11;
using namespace su3bethe;

namespace {

Kernel kernel_from(const std::string& kind) {
    if (kind == "g") return Kernel::G;
    if (kind == "f") return Kernel::F;
    if (kind == "h") return Kernel::H;
    if (kind == "t") return Kernel::T;
    throw Error("kernel kind must be one of g, f, h, t");
}

VarSet<Rat> rats(const std::vector<std::string>& xs) {
    VarSet<Rat> out;
    out.reserve(xs.size());
    for (const auto& s : xs) out.push_back(Rat(s));
    return out;
}

std::vector<std::string> strs(const std::vector<Rat>& xs) {
    std::vector<std::string> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(x.get_str());
    return out;
}

py::dict roots_dict(const BetheRoots& st, const ChainModel& m, Cplx kappa) {
    py::dict d;
    d["N"] = m.N;
    d["c"] = m.c;
    d["kappa"] = kappa;
    d["a"] = st.a();
    d["b"] = st.b();
    d["u"] = st.u;
    d["v"] = st.v;
    d["residual"] = st.residual;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "scalar products, norms and form factors in SU(3)-invariant integrable models";

    // translators run newest-first, so the base goes in before the derived
    auto base = py::register_exception<Error>(m, "Su3BetheError");
    py::register_exception<PoleError>(m, "PoleError", base);
    py::register_exception<SingularError>(m, "SingularError", base);
    py::register_exception<NoConvergence>(m, "NoConvergenceError", base);

    m.def(
        "eval_kernel",
        [](const std::string& kind, Cplx x, Cplx y, Cplx c) {
            return eval_kernel(kernel_from(kind), x, y, c);
        },
        py::arg("kind"), py::arg("x"), py::arg("y"), py::arg("c") = Cplx(1.0));

    m.def(
        "eval_kernel_exact",
        [](const std::string& kind, const std::string& x, const std::string& y,
           const std::string& c) {
            return eval_kernel(kernel_from(kind), Rat(x), Rat(y), Rat(c)).get_str();
        },
        py::arg("kind"), py::arg("x"), py::arg("y"), py::arg("c") = "1");

    m.def(
        "dwpf",
        [](const std::vector<Cplx>& xs, const std::vector<Cplx>& ys, Cplx c) {
            return dwpf(xs, ys, c);
        },
        py::arg("xs"), py::arg("ys"), py::arg("c") = Cplx(1.0),
        "domain-wall partition function K_n(x|y)");

    m.def(
        "dwpf_exact",
        [](const std::vector<std::string>& xs, const std::vector<std::string>& ys,
           const std::string& c) { return dwpf(rats(xs), rats(ys), Rat(c)).get_str(); },
        py::arg("xs"), py::arg("ys"), py::arg("c") = "1");

    m.def(
        "highest_coeff",
        [](const std::vector<Cplx>& t, const std::vector<Cplx>& x, const std::vector<Cplx>& s,
           const std::vector<Cplx>& y, Cplx c, const std::string& rep) {
            return highest_coeff(t, x, s, y, c, rep == "second" ? ZRep::Second : ZRep::First);
        },
        py::arg("t"), py::arg("x"), py::arg("s"), py::arg("y"), py::arg("c") = Cplx(1.0),
        py::arg("rep") = "first");

    m.def(
        "highest_coeff_exact",
        [](const std::vector<std::string>& t, const std::vector<std::string>& x,
           const std::vector<std::string>& s, const std::vector<std::string>& y,
           const std::string& c, const std::string& rep) {
            return highest_coeff(rats(t), rats(x), rats(s), rats(y), Rat(c),
                                 rep == "second" ? ZRep::Second : ZRep::First)
                .get_str();
        },
        py::arg("t"), py::arg("x"), py::arg("s"), py::arg("y"), py::arg("c") = "1",
        py::arg("rep") = "first");

    m.def(
        "scalar_product_exact",
        [](const std::vector<std::string>& uC, const std::vector<std::string>& uB,
           const std::vector<std::string>& vC, const std::vector<std::string>& vB,
           const std::string& kappa, const std::string& c) {
            auto d = make_onshell_data(rats(uB), rats(vB), rats(uC), rats(vC), Rat(kappa), Rat(c));
            py::dict out;
            out["det"] = scalar_product_det(d).get_str();
            out["oracle"] = scalar_product_oracle(d).get_str();
            out["r1_uB"] = strs(d.r1_uB);
            out["r1_uC"] = strs(d.r1_uC);
            out["r3_vB"] = strs(d.r3_vB);
            out["r3_vC"] = strs(d.r3_vC);
            return out;
        },
        py::arg("uC"), py::arg("uB"), py::arg("vC"), py::arg("vB"), py::arg("kappa") = "2",
        py::arg("c") = "1",
        "declare the sets on-shell / twisted on-shell and evaluate both representations");

    m.def(
        "scalar_product",
        [](const std::vector<Cplx>& uC, const std::vector<Cplx>& uB, const std::vector<Cplx>& vC,
           const std::vector<Cplx>& vB, Cplx kappa, Cplx c) {
            auto d = make_onshell_data(uB, vB, uC, vC, kappa, c);
            py::dict out;
            out["det"] = scalar_product_det(d);
            out["oracle"] = scalar_product_oracle(d);
            return out;
        },
        py::arg("uC"), py::arg("uB"), py::arg("vC"), py::arg("vB"), py::arg("kappa") = Cplx(2.0),
        py::arg("c") = Cplx(1.0));

    m.def(
        "norm_det",
        [](const std::vector<Cplx>& u, const std::vector<Cplx>& v, const std::vector<Cplx>& X1,
           const std::vector<Cplx>& X3, Cplx c) { return norm_det(u, v, X1, X3, c); },
        py::arg("u"), py::arg("v"), py::arg("X1"), py::arg("X3"), py::arg("c") = Cplx(1.0));

    m.def(
        "norm_det_exact",
        [](const std::vector<std::string>& u, const std::vector<std::string>& v,
           const std::vector<std::string>& X1, const std::vector<std::string>& X3,
           const std::string& c) {
            auto X1r = rats(X1);
            auto X3r = rats(X3);
            return norm_det(rats(u), rats(v), std::vector<Rat>(X1r.begin(), X1r.end()),
                            std::vector<Rat>(X3r.begin(), X3r.end()), Rat(c))
                .get_str();
        },
        py::arg("u"), py::arg("v"), py::arg("X1"), py::arg("X3"), py::arg("c") = "1");

    m.def(
        "solve_bethe",
        [](int N, int a, int b, Cplx kappa, Cplx c, std::uint64_t seed, int starts) {
            ChainModel model{N, c, Cplx(1.0)};
            auto states = chain::find_states(model, a, b, kappa, seed, starts);
            py::list out;
            for (const auto& st : states) out.append(roots_dict(st, model, kappa));
            return out;
        },
        py::arg("N"), py::arg("a"), py::arg("b") = 0, py::arg("kappa") = Cplx(1.0),
        py::arg("c") = Cplx(1.0), py::arg("seed") = 1, py::arg("starts") = 300);

    m.def(
        "transfer_eigenvalue",
        [](Cplx w, const std::vector<Cplx>& u, const std::vector<Cplx>& v, int N, Cplx c,
           std::optional<Cplx> kappa) {
            ChainModel model{N, c, Cplx(1.0)};
            BetheRoots roots;
            roots.u = u;
            roots.v = v;
            return chain::transfer_eigenvalue(w, roots, model, kappa);
        },
        py::arg("w"), py::arg("u"), py::arg("v"), py::arg("N"), py::arg("c") = Cplx(1.0),
        py::arg("kappa") = std::nullopt);

    m.def(
        "sector_spectrum",
        [](int N, Cplx w, std::array<int, 3> occupation, Cplx c, std::optional<Cplx> kappa) {
            ChainModel model{N, c, Cplx(1.0)};
            auto sector = lattice::weight_sector(N, occupation[0], occupation[1], occupation[2]);
            auto eig = lattice::sector_spectrum(w, model, sector, kappa);
            std::vector<Cplx> out(eig.eigenvalues.data(), eig.eigenvalues.data() + eig.eigenvalues.size());
            return out;
        },
        py::arg("N"), py::arg("w"), py::arg("sector"), py::arg("c") = Cplx(1.0),
        py::arg("kappa") = std::nullopt);

    m.def(
        "rtt_defect",
        [](int N, Cplx w1, Cplx w2, Cplx c, std::optional<Cplx> kappa) {
            ChainModel model{N, c, Cplx(1.0)};
            return lattice::rtt_defect(w1, w2, model, kappa);
        },
        py::arg("N"), py::arg("w1"), py::arg("w2"), py::arg("c") = Cplx(1.0),
        py::arg("kappa") = std::nullopt);

    m.def(
        "form_factor_e22",
        [](int N, int site, int a, int b, int bra_index, int ket_index, Cplx c,
           std::uint64_t seed, int starts) {
            ChainModel model{N, c, Cplx(1.0)};
            auto states = chain::find_states(model, a, b, Cplx(1.0), seed, starts);
            if (bra_index >= static_cast<int>(states.size()) ||
                ket_index >= static_cast<int>(states.size()))
                throw SizeError("state bank holds " + std::to_string(states.size()) + " states");
            chain::TwistFamily family(states[static_cast<std::size_t>(bra_index)], model);
            py::dict out;
            out["value"] =
                chain::form_factor_e22(site, family, states[static_cast<std::size_t>(ket_index)], model);
            out["norm_bra"] = chain::chain_norm(states[static_cast<std::size_t>(bra_index)], model);
            out["norm_ket"] = chain::chain_norm(states[static_cast<std::size_t>(ket_index)], model);
            return out;
        },
        py::arg("N"), py::arg("site"), py::arg("a"), py::arg("b") = 0, py::arg("bra_index") = 0,
        py::arg("ket_index") = 0, py::arg("c") = Cplx(1.0), py::arg("seed") = 1,
        py::arg("starts") = 300);

    m.def(
        "run_suite",
        [](const std::string& name, int trials, std::uint64_t seed, int max_a, int max_b, int max_m,
           const std::string& c) {
            verify::SuiteConfig cfg;
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.max_a = max_a;
            cfg.max_b = max_b;
            cfg.max_m = max_m;
            cfg.c = Rat(c);
            auto r = verify::run_suite(name, cfg);
            py::dict out;
            out["suite"] = r.name;
            out["trials"] = r.trials;
            out["passed"] = r.passed;
            out["ok"] = r.ok();
            if (!r.first_failure.empty()) out["first_failure"] = r.first_failure;
            return out;
        },
        py::arg("name"), py::arg("trials") = 20, py::arg("seed") = 1, py::arg("max_a") = 2,
        py::arg("max_b") = 2, py::arg("max_m") = 3, py::arg("c") = "1");

    m.def("suite_names", [] { return verify::suite_names(); });
}
