// Command-line front end: verification suites and physics computations with
// reproducible, machine-readable JSON output.
//
//   su3bethe verify --suite oracle --trials 50 --seed 7
//   su3bethe solve --N 4 --a 2 --b 1
//   su3bethe sp --a 2 --b 2 --seed 3
//   su3bethe norm --a 1 --b 1 --seed 5
//   su3bethe ff --N 4 --a 1 --b 1 --site 2
//   su3bethe zcoeff --a 2 --b 1 --trials 5
//   su3bethe spectrum --N 3 --sector 1,1,1 --w 0.3
//
// Exact rationals serialize as "p/q", complex numbers as [re, im]. With a
// fixed seed the exact-mode output is bit-identical across runs; runtime_ms
// is null unless --timings is given.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "su3bethe/verify.hpp"

using json = nlohmann::ordered_json;
using namespace su3bethe;

namespace {

json rat_json(const Rat& r) { return r.get_str(); }

json rat_set_json(const VarSet<Rat>& s) {
    json out = json::array();
    for (const auto& x : s) out.push_back(rat_json(x));
    return out;
}

json cplx_json(Cplx z) { return json::array({z.real(), z.imag()}); }

json cplx_set_json(const std::vector<Cplx>& s) {
    json out = json::array();
    for (auto z : s) out.push_back(cplx_json(z));
    return out;
}

Cplx parse_cplx(const std::string& s) {
    std::istringstream in(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    in >> re;
    if (in >> comma && comma == ',') in >> im;
    return {re, im};
}

struct Emitter {
    std::string out_path;
    bool timings = false;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    int emit(json doc, int exit_code = 0) const {
        if (timings) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
            doc["runtime_ms"] = ms;
        } else {
            doc["runtime_ms"] = nullptr;
        }
        std::string text = doc.dump(2);
        if (out_path.empty()) {
            std::cout << text << "\n";
        } else {
            std::ofstream f(out_path);
            f << text << "\n";
        }
        return exit_code;
    }

    int fail(const std::string& command, const std::string& kind, const std::string& message) const {
        json doc;
        doc["schema"] = 1;
        doc["command"] = command;
        doc["error"] = {{"kind", kind}, {"message", message}};
        return emit(std::move(doc), 1);
    }
};

json base_doc(const std::string& command, const std::string& mode, std::uint64_t seed) {
    json doc;
    doc["schema"] = 1;
    doc["command"] = command;
    doc["mode"] = mode;
    doc["seed"] = seed;
    return doc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scalar products, norms and form factors in SU(3)-invariant integrable models"};
    app.require_subcommand(1);

    std::string mode = "exact";
    std::uint64_t seed = 1;
    int trials = 50;
    int opt_a = 1, opt_b = 1, opt_N = 2;
    int cap_a = 3, cap_b = 3;
    int max_m = 4;
    int site = 1;
    int starts = 300;
    int bra_index = 0, ket_index = 0;
    std::string c_str = "1";
    std::string kappa_str;
    std::string suite = "all";
    std::string sector_str = "1,1,1";
    std::string w_str = "0.3";
    double tolerance = 0.0;
    Emitter emitter;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--c", c_str, "coupling constant (rational p/q in exact mode)");
        cmd->add_option("--out", emitter.out_path, "write JSON to this file instead of stdout");
        cmd->add_flag("--timings", emitter.timings, "include wall-clock runtime_ms");
    };

    auto* cmd_verify = app.add_subcommand("verify", "run seeded identity suites");
    add_common(cmd_verify);
    cmd_verify->add_option("--suite", suite, "suite name or 'all'");
    cmd_verify->add_option("--trials", trials, "trials per suite");
    cmd_verify->add_option("--a", cap_a, "cap on the first-level set size");
    cmd_verify->add_option("--b", cap_b, "cap on the second-level set size");
    cmd_verify->add_option("--max-m", max_m, "cap on lemma set sizes");
    cmd_verify->add_option("--kappa", kappa_str, "fix the twist (rational); sampled per trial if absent");
    cmd_verify->add_option("--mode", mode, "exact | float (suites are exact; norm-limit is float)");
    cmd_verify->add_option("--tolerance", tolerance,
                           "override the norm-limit suite tolerance (exact suites have none)");

    auto* cmd_solve = app.add_subcommand("solve", "solve the nested Bethe equations for the chain");
    add_common(cmd_solve);
    cmd_solve->add_option("--N", opt_N, "chain length")->required();
    cmd_solve->add_option("--a", opt_a, "number of first-level roots")->required();
    int solve_b = 0;
    cmd_solve->add_option("--b", solve_b, "number of second-level roots");
    cmd_solve->add_option("--kappa", kappa_str, "twist parameter (float)");
    cmd_solve->add_option("--starts", starts, "random multistart count");

    auto* cmd_sp = app.add_subcommand("sp", "scalar product of a random on-shell instance");
    add_common(cmd_sp);
    cmd_sp->add_option("--a", opt_a)->required();
    cmd_sp->add_option("--b", opt_b)->required();
    cmd_sp->add_option("--kappa", kappa_str, "twist (rational); random nonzero if absent");
    cmd_sp->add_option("--mode", mode, "exact | float");

    auto* cmd_norm = app.add_subcommand("norm", "norm determinant for random exact data");
    add_common(cmd_norm);
    cmd_norm->add_option("--a", opt_a)->required();
    cmd_norm->add_option("--b", opt_b)->required();

    auto* cmd_ff = app.add_subcommand("ff", "E22 form factor on the XXX chain");
    add_common(cmd_ff);
    cmd_ff->add_option("--N", opt_N)->required();
    cmd_ff->add_option("--a", opt_a)->required();
    int ff_b = 0;
    cmd_ff->add_option("--b", ff_b);
    cmd_ff->add_option("--site", site, "operator site (1-based)")->required();
    cmd_ff->add_option("--bra-index", bra_index, "bra state index in the solved bank");
    cmd_ff->add_option("--ket-index", ket_index, "ket state index in the solved bank");
    cmd_ff->add_option("--starts", starts);

    auto* cmd_z = app.add_subcommand("zcoeff", "highest coefficient in both representations");
    add_common(cmd_z);
    cmd_z->add_option("--a", opt_a)->required();
    cmd_z->add_option("--b", opt_b)->required();
    int z_trials = 1;
    cmd_z->add_option("--trials", z_trials);

    auto* cmd_spec = app.add_subcommand("spectrum", "dense sector spectrum of the transfer matrix");
    add_common(cmd_spec);
    cmd_spec->add_option("--N", opt_N)->required();
    cmd_spec->add_option("--sector", sector_str, "occupation n1,n2,n3")->required();
    cmd_spec->add_option("--w", w_str, "spectral point re[,im]")->required();
    cmd_spec->add_option("--kappa", kappa_str, "twist (float)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_verify) {
            verify::SuiteConfig cfg;
            cfg.seed = seed;
            cfg.trials = trials;
            cfg.max_a = cap_a;
            cfg.max_b = cap_b;
            cfg.max_m = max_m;
            cfg.c = parse_rational(c_str);
            if (!kappa_str.empty()) {
                cfg.fixed_kappa = true;
                cfg.kappa = parse_rational(kappa_str);
            }
            if (tolerance > 0.0) cfg.norm_limit_tol = tolerance;
            std::vector<std::string> names;
            if (suite == "all")
                names = verify::suite_names();
            else
                names.push_back(suite);
            json doc = base_doc("verify", "exact", seed);
            doc["inputs"] = {{"suite", suite}, {"trials", trials}, {"max_a", cap_a},
                             {"max_b", cap_b},  {"max_m", max_m},  {"c", c_str}};
            json suites = json::array();
            bool all_ok = true;
            for (const auto& name : names) {
                auto r = verify::run_suite(name, cfg);
                json entry;
                entry["suite"] = r.name;
                entry["trials"] = r.trials;
                entry["passed"] = r.passed;
                if (!r.first_failure.empty()) entry["first_failure"] = r.first_failure;
                suites.push_back(entry);
                all_ok = all_ok && r.ok();
            }
            doc["results"] = {{"suites", suites}, {"ok", all_ok}};
            return emitter.emit(std::move(doc), all_ok ? 0 : 1);
        }

        if (*cmd_solve) {
            ChainModel model{opt_N, parse_cplx(c_str), Cplx(1.0)};
            Cplx kappa = kappa_str.empty() ? Cplx(1.0) : parse_cplx(kappa_str);
            auto states = chain::find_states(model, opt_a, solve_b, kappa, seed, starts);
            json doc = base_doc("solve", "float", seed);
            doc["inputs"] = {{"N", opt_N}, {"a", opt_a},      {"b", solve_b},
                             {"c", c_str}, {"kappa", json::array({kappa.real(), kappa.imag()})},
                             {"starts", starts}};
            json out_states = json::array();
            double worst = 0.0;
            for (const auto& st : states) {
                out_states.push_back({{"N", opt_N},
                                      {"c", cplx_json(model.c)},
                                      {"kappa", cplx_json(kappa)},
                                      {"a", opt_a},
                                      {"b", solve_b},
                                      {"u", cplx_set_json(st.u)},
                                      {"v", cplx_set_json(st.v)},
                                      {"residual", st.residual}});
                worst = std::max(worst, st.residual);
            }
            doc["results"] = {{"count", states.size()}, {"states", out_states}};
            doc["residuals"] = {{"max_bethe_defect", worst}};
            return emitter.emit(std::move(doc));
        }

        if (*cmd_sp) {
            Rat c = parse_rational(c_str);
            RatSampler gen(seed, c);
            Rat kappa = kappa_str.empty() ? gen.nonzero() : parse_rational(kappa_str);
            std::vector<Rat> pool;
            VarSet<Rat> uB = gen.set(opt_a, pool), uC = gen.set(opt_a, pool);
            VarSet<Rat> vB = gen.set(opt_b, pool), vC = gen.set(opt_b, pool);
            json doc = base_doc("sp", mode, seed);
            doc["inputs"] = {{"a", opt_a},
                             {"b", opt_b},
                             {"c", rat_json(c)},
                             {"kappa", rat_json(kappa)},
                             {"uC", rat_set_json(uC)},
                             {"uB", rat_set_json(uB)},
                             {"vC", rat_set_json(vC)},
                             {"vB", rat_set_json(vB)}};
            if (mode == "float") {
                auto d = make_onshell_data(to_cplx(uB), to_cplx(vB), to_cplx(uC), to_cplx(vC),
                                           to_cplx(kappa), to_cplx(c));
                Cplx det = scalar_product_det(d);
                Cplx oracle = scalar_product_oracle(d);
                doc["results"] = {{"det", cplx_json(det)},
                                  {"oracle", cplx_json(oracle)},
                                  {"rel_err", std::abs(det - oracle) / std::max(1.0, std::abs(oracle))}};
            } else {
                auto d = make_onshell_data(uB, vB, uC, vC, kappa, c);
                Rat det = scalar_product_det(d);
                Rat oracle = scalar_product_oracle(d);
                doc["results"] = {{"det", rat_json(det)},
                                  {"oracle", rat_json(oracle)},
                                  {"equal", det == oracle}};
            }
            return emitter.emit(std::move(doc));
        }

        if (*cmd_norm) {
            Rat c = parse_rational(c_str);
            RatSampler gen(seed, c);
            std::vector<Rat> pool;
            VarSet<Rat> u = gen.set(opt_a, pool), v = gen.set(opt_b, pool);
            std::vector<Rat> X1, X3;
            for (int j = 0; j < opt_a; ++j) X1.push_back(gen.nonzero());
            for (int m = 0; m < opt_b; ++m) X3.push_back(gen.nonzero());
            json doc = base_doc("norm", "exact", seed);
            doc["inputs"] = {{"a", opt_a}, {"b", opt_b}, {"c", rat_json(c)},
                             {"u", rat_set_json(u)}, {"v", rat_set_json(v)},
                             {"X1", rat_set_json(X1)}, {"X3", rat_set_json(X3)}};
            doc["results"] = {{"norm", rat_json(norm_det(u, v, X1, X3, c))}};
            return emitter.emit(std::move(doc));
        }

        if (*cmd_ff) {
            ChainModel model{opt_N, parse_cplx(c_str), Cplx(1.0)};
            auto states = chain::find_states(model, opt_a, ff_b, Cplx(1.0), seed, starts);
            json doc = base_doc("ff", "float", seed);
            doc["inputs"] = {{"N", opt_N},   {"a", opt_a},           {"b", ff_b},
                             {"site", site}, {"bra_index", bra_index}, {"ket_index", ket_index},
                             {"c", c_str}};
            if (bra_index >= static_cast<int>(states.size()) ||
                ket_index >= static_cast<int>(states.size()))
                return emitter.fail("ff", "SizeError",
                                    "state bank holds " + std::to_string(states.size()) +
                                        " states; bra/ket index out of range");
            const auto& bra = states[static_cast<std::size_t>(bra_index)];
            const auto& ket = states[static_cast<std::size_t>(ket_index)];
            chain::TwistFamily family(bra, model);
            Cplx value = chain::form_factor_e22(site, family, ket, model);
            Cplx norm_bra = chain::chain_norm(bra, model);
            Cplx norm_ket = chain::chain_norm(ket, model);
            json results = {{"value", cplx_json(value)},
                            {"norm_bra", cplx_json(norm_bra)},
                            {"norm_ket", cplx_json(norm_ket)},
                            {"normalized_modulus",
                             std::abs(value) / std::sqrt(std::abs(norm_bra * norm_ket))}};
            if (bra_index != ket_index)
                results["analytic_value"] =
                    cplx_json(chain::form_factor_e22_analytic(site, bra, ket, model));
            doc["results"] = std::move(results);
            doc["residuals"] = {{"bra", bra.residual}, {"ket", ket.residual}};
            return emitter.emit(std::move(doc));
        }

        if (*cmd_z) {
            Rat c = parse_rational(c_str);
            RatSampler gen(seed, c);
            json doc = base_doc("zcoeff", "exact", seed);
            doc["inputs"] = {{"a", opt_a}, {"b", opt_b}, {"c", rat_json(c)}, {"trials", z_trials}};
            json runs = json::array();
            bool all_equal = true;
            for (int t = 0; t < z_trials; ++t) {
                std::vector<Rat> pool;
                VarSet<Rat> tt = gen.set(opt_a, pool), x = gen.set(opt_a, pool);
                VarSet<Rat> s = gen.set(opt_b, pool), y = gen.set(opt_b, pool);
                Rat first = highest_coeff_first(tt, x, s, y, c);
                Rat second = highest_coeff_second(tt, x, s, y, c);
                all_equal = all_equal && first == second;
                runs.push_back({{"t", rat_set_json(tt)},
                                {"x", rat_set_json(x)},
                                {"s", rat_set_json(s)},
                                {"y", rat_set_json(y)},
                                {"first", rat_json(first)},
                                {"second", rat_json(second)},
                                {"equal", first == second}});
            }
            doc["results"] = {{"runs", runs}, {"all_equal", all_equal}};
            return emitter.emit(std::move(doc), all_equal ? 0 : 1);
        }

        if (*cmd_spec) {
            ChainModel model{opt_N, parse_cplx(c_str), Cplx(1.0)};
            int n1 = 0, n2 = 0, n3 = 0;
            if (std::sscanf(sector_str.c_str(), "%d,%d,%d", &n1, &n2, &n3) != 3)
                return emitter.fail("spectrum", "ParseError", "--sector expects n1,n2,n3");
            Cplx w = parse_cplx(w_str);
            std::optional<Cplx> kappa;
            if (!kappa_str.empty()) kappa = parse_cplx(kappa_str);
            auto sector = lattice::weight_sector(opt_N, n1, n2, n3);
            auto eig = lattice::sector_spectrum(w, model, sector, kappa);
            auto transfer = lattice::build_monodromy(w, model).transfer(kappa.value_or(Cplx(1.0)));
            json doc = base_doc("spectrum", "float", seed);
            doc["inputs"] = {{"N", opt_N},
                             {"sector", json::array({n1, n2, n3})},
                             {"w", cplx_json(w)},
                             {"c", c_str},
                             {"kappa", kappa ? cplx_json(*kappa) : json(nullptr)}};
            json evs = json::array();
            for (int i = 0; i < eig.eigenvalues.size(); ++i)
                evs.push_back(cplx_json(eig.eigenvalues(i)));
            doc["results"] = {{"dimension", sector.indices.size()},
                              {"eigenvalues", evs},
                              {"min_gap", eig.min_gap},
                              {"degenerate", eig.degenerate},
                              {"sector_leakage", lattice::sector_leakage(transfer, sector)}};
            return emitter.emit(std::move(doc));
        }
    } catch (const PoleError& e) {
        return emitter.fail(app.get_subcommands().front()->get_name(), "PoleError", e.what());
    } catch (const SizeError& e) {
        return emitter.fail(app.get_subcommands().front()->get_name(), "SizeError", e.what());
    } catch (const NoConvergence& e) {
        return emitter.fail(app.get_subcommands().front()->get_name(), "NoConvergence", e.what());
    } catch (const Error& e) {
        return emitter.fail(app.get_subcommands().front()->get_name(), "Error", e.what());
    } catch (const std::exception& e) {
        return emitter.fail(app.get_subcommands().front()->get_name(), "InternalError", e.what());
    }
    return 0;
}
