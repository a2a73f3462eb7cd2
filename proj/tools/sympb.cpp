// Command-line front end: validate domains, iterate the map, run the
// identity suite, normalize, probe Jacobi fields and produce the
// integrability report.
#include <sympb/sympb.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace sympb;
using nlohmann::json;

enum Exit : int { ok = 0, usage = 1, invalid_domain = 2, no_convergence = 3 };

struct Shared {
    std::optional<std::size_t> grid;
    std::optional<double> tol;
    bool json = false;
    std::string out;
    std::optional<std::uint64_t> seed;
};

struct DomainArg {
    std::string path;
    std::optional<std::size_t> random_index;

    void attach(CLI::App* cmd) {
        cmd->add_option("domain", path, "domain JSON file");
        cmd->add_option("--random", random_index, "use the seeded random domain with this index instead of a file");
    }
};

RunConfig make_config(const Shared& sh) {
    RunConfig c = RunConfig::from_env();
    if (sh.grid) c.grid.n1 = c.grid.n2 = *sh.grid;
    if (sh.seed) c.seed = *sh.seed;
    c.validate();
    return c;
}

/// Loads and validates; on failure prints every violation.
Domain load(const DomainArg& arg, const RunConfig& cfg) {
    if (arg.random_index) return random_domain(cfg.seed, *arg.random_index);
    if (arg.path.empty()) throw std::invalid_argument("a domain file or --random INDEX is required");
    const DomainSpec spec = load_domain_spec(arg.path);
    auto report = validate(spec);
    if (!report.ok()) throw DomainError("invalid domain '" + spec.name + "': " + describe(report.violations));
    return std::move(*report.domain);
}

void emit(const Shared& sh, const std::string& text) {
    if (sh.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(sh.out);
    if (!f) throw std::runtime_error("cannot write " + sh.out);
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json phase_json(const PhasePoint& q) { return {{"alpha1", q.alpha1()}, {"alpha2", q.alpha2()}}; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symplectic billiards laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    Shared sh;
    app.add_option("--grid", sh.grid, "double-integral grid side (power of two >= 64)");
    app.add_option("--tol", sh.tol, "main tolerance of the subcommand");
    app.add_flag("--json", sh.json, "JSON output where available");
    app.add_option("--out", sh.out, "write output to this file");
    app.add_option("--seed", sh.seed, "seed for --random domains");

    // validate
    DomainArg v_dom;
    auto* v = app.add_subcommand("validate", "check support and curvature positivity");
    v_dom.attach(v);

    // map
    DomainArg m_dom;
    double m_a1 = 0.0, m_a2 = 1.0;
    bool m_inverse = false;
    auto* m = app.add_subcommand("map", "one bounce forward (or backward)");
    m_dom.attach(m);
    m->add_option("--a1", m_a1, "first tangent angle")->required();
    m->add_option("--a2", m_a2, "second tangent angle")->required();
    m->add_flag("--inverse", m_inverse, "apply the inverse map");

    // orbit
    DomainArg o_dom;
    double o_a1 = 0.0, o_a2 = 1.0;
    std::optional<std::size_t> o_steps;
    auto* o = app.add_subcommand("orbit", "orbit CSV: n,alpha,x,y,s1");
    o_dom.attach(o);
    o->add_option("--a1", o_a1, "first tangent angle")->required();
    o->add_option("--a2", o_a2, "second tangent angle")->required();
    o->add_option("--steps", o_steps, "number of bounces");

    // portrait
    DomainArg p_dom;
    std::optional<std::size_t> p_orbits, p_steps;
    auto* p = app.add_subcommand("portrait", "phase portrait CSV: alpha1,s1,orbit_id");
    p_dom.attach(p);
    p->add_option("--orbits", p_orbits, "number of orbits K");
    p->add_option("--steps", p_steps, "phase points per orbit N");

    // identities
    DomainArg i_dom;
    auto* id = app.add_subcommand("identities", "run the integral identity suite");
    i_dom.attach(id);

    // normalize
    DomainArg n_dom;
    bool n_all = false;
    auto* n = app.add_subcommand("normalize", "find (a, sigma) killing the second Fourier modes");
    n_dom.attach(n);
    n->add_flag("--all-roots", n_all, "keep iterating all starts and list every root");

    // jacobi
    DomainArg j_dom;
    double j_a1 = 0.0, j_a2 = 1.0;
    std::size_t j_M = 0, j_N = 10;
    std::optional<std::size_t> j_scan;
    auto* jc = app.add_subcommand("jacobi", "Jacobi field and conjugacy on an orbit segment");
    j_dom.attach(jc);
    jc->add_option("--a1", j_a1, "first tangent angle")->required();
    jc->add_option("--a2", j_a2, "second tangent angle")->required();
    jc->add_option("-M,--start", j_M, "segment start index M");
    jc->add_option("-N,--end", j_N, "segment end index N");
    jc->add_option("--scan", j_scan, "also list conjugate pairs up to this span");

    // constants
    auto* k = app.add_subcommand("constants", "asymptotic constants c and d");

    // report
    DomainArg r_dom;
    auto* r = app.add_subcommand("report", "normalize, integrate and label the table");
    r_dom.attach(r);

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = make_config(sh);

        if (v->parsed()) {
            if (v_dom.random_index) {
                const Domain d = load(v_dom, cfg);
                emit(sh, sh.json ? dump({{"name", d.name()}, {"valid", true}}) : d.name() + ": valid\n");
                return ok;
            }
            if (v_dom.path.empty()) throw std::invalid_argument("a domain file or --random INDEX is required");
            const DomainSpec spec = load_domain_spec(v_dom.path);
            const auto rep = validate(spec);
            if (sh.json) {
                json viol = json::array();
                for (const auto& x : rep.violations)
                    viol.push_back({{"invariant", x.invariant}, {"alpha", x.alpha}, {"value", x.value}});
                emit(sh, dump({{"name", spec.name},
                               {"valid", rep.ok()},
                               {"min_support", rep.margins.min_p},
                               {"min_curvature_radius", rep.margins.min_rho},
                               {"violations", viol}}));
            } else if (rep.ok()) {
                emit(sh, spec.name + ": valid (min p " + fmt17(rep.margins.min_p) + ", min p''+p " +
                             fmt17(rep.margins.min_rho) + ")\n");
            } else {
                std::cerr << spec.name << ": " << describe(rep.violations) << "\n";
            }
            return rep.ok() ? ok : invalid_domain;
        }

        if (m->parsed()) {
            const Domain d = load(m_dom, cfg);
            if (sh.tol) cfg.root_tol = *sh.tol;
            cfg.validate();
            const PhasePoint q(m_a1, m_a2);
            const PhasePoint img = m_inverse ? inverse_step(d, q, cfg.root_options()) : step(d, q, cfg.root_options());
            if (sh.json)
                emit(sh, dump({{"from", phase_json(q)}, {"to", phase_json(img)}}));
            else
                emit(sh, fmt17(img.alpha1()) + " " + fmt17(img.alpha2()) + "\n");
            return ok;
        }

        if (o->parsed()) {
            const Domain d = load(o_dom, cfg);
            if (sh.tol) cfg.root_tol = *sh.tol;
            cfg.validate();
            const auto c = orbit(d, PhasePoint(o_a1, o_a2), o_steps.value_or(cfg.orbit_steps), cfg.root_options());
            emit(sh, orbit_csv(d, c));
            return ok;
        }

        if (p->parsed()) {
            const Domain d = load(p_dom, cfg);
            if (sh.tol) cfg.root_tol = *sh.tol;
            cfg.validate();
            const auto rows = run_portrait(d, p_orbits.value_or(cfg.portrait_orbits),
                                           p_steps.value_or(cfg.portrait_steps), cfg.root_options());
            emit(sh, portrait_csv(rows));
            return ok;
        }

        if (id->parsed()) {
            const Domain d = load(i_dom, cfg);
            const auto reports = run_identities(d, cfg);
            emit(sh, sh.json ? dump(identity_json(reports)) : identity_table(reports));
            if (sh.tol) {
                for (const auto& x : reports)
                    if (!(x.rel_err < *sh.tol)) return no_convergence;
            }
            return ok;
        }

        if (n->parsed()) {
            const Domain d = load(n_dom, cfg);
            if (sh.tol) cfg.normalization.tolerance = *sh.tol;
            cfg.normalization.collect_all_roots = n_all;
            cfg.validate();
            const auto res = find_normalization(d, cfg.normalization);
            json j{{"a", res.params.a},
                   {"sigma", res.params.sigma},
                   {"residual_fourier2", {res.residual_fourier2[0], res.residual_fourier2[1]}},
                   {"converged", res.converged},
                   {"iterations", res.iterations}};
            if (n_all) {
                json roots = json::array();
                for (const auto& x : res.roots) roots.push_back({{"a", x.a}, {"sigma", x.sigma}});
                j["roots"] = roots;
            }
            if (res.converged) {
                const auto t = transform_support(d, res.params);
                j["transformed"] = to_json(to_spec(d.name() + "-normalized", fourier_projection(t, 64)));
            }
            emit(sh, dump(j));
            return res.converged ? ok : no_convergence;
        }

        if (jc->parsed()) {
            const Domain d = load(j_dom, cfg);
            if (sh.tol) cfg.conjugacy_tol = *sh.tol;
            cfg.validate();
            const std::size_t needed = std::max(j_N, j_M + (j_scan ? *j_scan : 0));
            const auto c = orbit(d, PhasePoint(j_a1, j_a2), needed, cfg.root_options());
            const auto res = conjugate_test(d, c, j_M, j_N, 1.0, cfg.conjugacy_tol);
            json j{{"segment", {j_M, j_N}}, {"conjugate", res.conjugate}, {"xi", res.witness.values}};
            if (j_scan) {
                json pairs = json::array();
                for (const auto& [a, b] : conjugate_scan(d, c, *j_scan, cfg.conjugacy_tol)) pairs.push_back({a, b});
                j["conjugate_pairs"] = pairs;
            }
            emit(sh, dump(j));
            return ok;
        }

        if (k->parsed()) {
            const auto c = asymptotic_constants();
            if (sh.json)
                emit(sh, dump({{"c", c.c}, {"d", c.d}}));
            else
                emit(sh, "c = " + fmt17(c.c) + "\nd = " + fmt17(c.d) + "\n");
            return ok;
        }

        if (r->parsed()) {
            const Domain d = load(r_dom, cfg);
            if (sh.tol) cfg.defect_tol = *sh.tol;
            cfg.validate();
            const auto rep = run_report(d, d.name(), cfg);
            if (sh.json) {
                emit(sh, dump({{"name", rep.name},
                               {"label", label_name(rep.verdict.label)},
                               {"defect", rep.verdict.defect},
                               {"bialy_sum", rep.verdict.bialy_sum},
                               {"defect_tol", rep.verdict.defect_tol},
                               {"normalized_spread", rep.verdict.normalized_spread},
                               {"a", rep.normalization.params.a},
                               {"sigma", rep.normalization.params.sigma},
                               {"perimeter", rep.bialy.perimeter},
                               {"area", rep.bialy.area}}));
            } else {
                emit(sh, rep.text());
            }
            return ok;
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return invalid_domain;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return no_convergence;
    } catch (const QuadratureError& e) {
        std::cerr << "quadrature error: " << e.what() << "\n";
        return no_convergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    return usage;
}
