#pragma once

#include <sympb/domain_io.hpp>
#include <sympb/dynamics.hpp>
#include <sympb/normalization.hpp>
#include <sympb/quadrature.hpp>
#include <sympb/variational.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sympb {

/// Shared run settings.  Defaults can be overridden by SYMPB_* environment
/// variables (see from_env) and then by command-line flags.
/// Arc-length integrands peak where p'' + p is small, so end-to-end runs use
/// a finer grid than the plain identity checks.
inline const GridSpec default_run_grid{2048, 2048, 16384};

struct RunConfig {
    GridSpec grid = default_run_grid;
    double root_tol = 1e-12;
    double defect_tol = 1e-6;
    double conjugacy_tol = default_conjugacy_tol;
    NormalizationOptions normalization = [] {
        NormalizationOptions o;
        o.grid = default_run_grid.n;
        return o;
    }();
    std::size_t orbit_steps = 1000;
    std::size_t portrait_orbits = 16;
    std::size_t portrait_steps = 200;
    std::uint64_t seed = 20240611;

    RootOptions root_options() const {
        RootOptions o;
        o.tolerance = root_tol;
        return o;
    }

    void validate() const {
        grid.validate();
        if (!(root_tol > 0.0) || !(defect_tol > 0.0) || !(conjugacy_tol > 0.0) ||
            !(normalization.tolerance > 0.0) || !(grid.convergence_tol > 0.0))
            throw std::invalid_argument("run config: tolerances must be positive");
    }

    /// SYMPB_GRID (double-integral side), SYMPB_LINE_GRID, SYMPB_ROOT_TOL,
    /// SYMPB_DEFECT_TOL, SYMPB_SEED.
    static RunConfig from_env() {
        RunConfig c;
        auto get = [](const char* key) -> std::optional<std::string> {
            const char* v = std::getenv(key);
            if (v == nullptr || *v == '\0') return std::nullopt;
            return std::string(v);
        };
        auto parse_size = [](const std::string& key, const std::string& v) {
            std::size_t pos = 0;
            const unsigned long long x = std::stoull(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(key + ": not an integer: " + v);
            return static_cast<std::size_t>(x);
        };
        auto parse_real = [](const std::string& key, const std::string& v) {
            std::size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(key + ": not a number: " + v);
            return x;
        };
        if (auto v = get("SYMPB_GRID")) c.grid.n1 = c.grid.n2 = parse_size("SYMPB_GRID", *v);
        if (auto v = get("SYMPB_LINE_GRID")) c.grid.n = parse_size("SYMPB_LINE_GRID", *v);
        if (auto v = get("SYMPB_ROOT_TOL")) c.root_tol = parse_real("SYMPB_ROOT_TOL", *v);
        if (auto v = get("SYMPB_DEFECT_TOL")) c.defect_tol = parse_real("SYMPB_DEFECT_TOL", *v);
        if (auto v = get("SYMPB_SEED")) c.seed = parse_size("SYMPB_SEED", *v);
        c.normalization.grid = c.grid.n;
        c.validate();
        return c;
    }
};

/// Shortest round-trip decimal form, always 17 significant digits.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

enum class VerdictLabel { circle_affine, not_totally_integrable_certified };

inline const char* label_name(VerdictLabel l) {
    return l == VerdictLabel::circle_affine ? "CIRCLE-AFFINE" : "NOT-TOTALLY-INTEGRABLE-CERTIFIED";
}

struct Verdict {
    double defect = 0.0;
    double bialy_sum = 0.0;
    VerdictLabel label = VerdictLabel::circle_affine;
    double defect_tol = 0.0;
    /// max - min of the normalized support function.
    double normalized_spread = 0.0;
};

inline VerdictLabel classify(double defect, double tol) {
    return defect < tol ? VerdictLabel::circle_affine : VerdictLabel::not_totally_integrable_certified;
}

struct IntegrabilityReport {
    std::string name;
    NormalizationResult normalization;
    BialyReport bialy;
    Verdict verdict;

    std::string text() const {
        std::ostringstream o;
        o << "domain: " << name << "\n"
          << "normalization: a = " << fmt17(normalization.params.a)
          << ", sigma = " << fmt17(normalization.params.sigma) << " (second Fourier residual "
          << fmt17(std::hypot(normalization.residual_fourier2[0], normalization.residual_fourier2[1]))
          << ", " << normalization.iterations << " iterations)\n"
          << "normalized perimeter: " << fmt17(bialy.perimeter) << "\n"
          << "normalized area:      " << fmt17(bialy.area) << "\n"
          << "isoperimetric defect: " << fmt17(verdict.defect) << " (tolerance " << fmt17(verdict.defect_tol)
          << ")\n"
          << "arc-length integral of (L11 + 2 L12 + L22) L12 over the torus: " << fmt17(verdict.bialy_sum)
          << "\n"
          << "normalized support spread: " << fmt17(verdict.normalized_spread) << "\n"
          << "verdict: " << label_name(verdict.label) << "\n";
        if (verdict.label == VerdictLabel::circle_affine) {
            o << "The affinely normalized table is a circle to tolerance, so the input is an ellipse.\n"
                 "Ellipses are totally integrable: the map is conjugate to a rigid rotation.\n";
        } else {
            o << "Chain of implications behind the certificate:\n"
                 "  1. After normalization both second Fourier coefficients of the support function vanish.\n"
                 "     In arc-length parametrization the integral of (L11 + 2 L12 + L22) L12 then equals\n"
                 "     the isoperimetric defect, which is positive here.\n"
                 "  2. A table without conjugate points makes that integral non-positive (integral\n"
                 "     inequality for billiards with no conjugate points), so this table has conjugate points.\n"
                 "  3. Total integrability (a foliation of phase space by continuous invariant curves that\n"
                 "     are not null-homotopic) forces the curves to be Lipschitz graphs and rules out\n"
                 "     conjugate points.  Hence the table is not totally integrable.\n";
        }
        return o.str();
    }
};

/// Normalize, integrate in arc length, and label by the defect.
template <SupportFunction S>
IntegrabilityReport run_report(const S& s, const std::string& name, const RunConfig& cfg = {}) {
    cfg.validate();
    auto nd = normalize_domain(s, cfg.normalization);
    IntegrabilityReport r;
    r.name = name;
    r.normalization = nd.result;
    r.bialy = bialy_report(nd.support, ReparamSpec::arc_length(), cfg.grid);
    r.verdict.defect = r.bialy.defect;
    r.verdict.bialy_sum = r.bialy.sum;
    r.verdict.defect_tol = cfg.defect_tol;
    r.verdict.label = classify(r.bialy.defect, cfg.defect_tol);
    r.verdict.normalized_spread = support_spread(nd.support, cfg.grid.n);
    return r;
}

/// Orbit CSV: header n,alpha,x,y,s1 and one row per phase point
/// (alpha_n, alpha_{n+1}) of the configuration.
template <SupportFunction S>
std::string orbit_csv(const S& s, const Configuration& c) {
    std::string out = "n,alpha,x,y,s1\n";
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
        const PlaneVector x = boundary_point(s, c.alphas[k]);
        const double s1 = s_coords(s, c.phase_point(k)).s1;
        out += std::to_string(k) + "," + fmt17(c.alphas[k]) + "," + fmt17(x.x) + "," + fmt17(x.y) + "," +
               fmt17(s1) + "\n";
    }
    return out;
}

struct PortraitRow {
    double alpha1 = 0.0;  ///< reduced to [0, 2pi)
    double s1 = 0.0;
    std::size_t orbit_id = 0;
};

/// Initial gaps of the portrait ladder: pi (k + 1) / (K + 1), k < K.
inline std::vector<double> gap_ladder(std::size_t K) {
    std::vector<double> g(K);
    for (std::size_t k = 0; k < K; ++k) g[k] = pi * static_cast<double>(k + 1) / static_cast<double>(K + 1);
    return g;
}

/// K orbits started at alpha1 = 0 with the ladder of gaps, N phase points
/// each; rows are ordered by orbit, then by time.
template <SupportFunction S>
std::vector<PortraitRow> run_portrait(const S& s, std::size_t K, std::size_t N, const RootOptions& opt = {}) {
    if (K == 0 || N == 0) throw std::invalid_argument("portrait: need at least one orbit and one step");
    std::vector<PortraitRow> rows;
    rows.reserve(K * N);
    const auto gaps = gap_ladder(K);
    for (std::size_t id = 0; id < K; ++id) {
        const Configuration c = orbit(s, PhasePoint(0.0, gaps[id]), N - 1, opt);
        for (std::size_t k = 0; k < N; ++k) {
            double a = std::fmod(c.alphas[k], two_pi);
            if (a < 0.0) a += two_pi;
            rows.push_back({a, s_coords(s, c.phase_point(k)).s1, id});
        }
    }
    return rows;
}

inline std::string portrait_csv(const std::vector<PortraitRow>& rows) {
    std::string out = "alpha1,s1,orbit_id\n";
    for (const auto& r : rows) out += fmt17(r.alpha1) + "," + fmt17(r.s1) + "," + std::to_string(r.orbit_id) + "\n";
    return out;
}

template <SupportFunction S>
std::vector<IdentityReport> run_identities(const S& s, const RunConfig& cfg = {}) {
    cfg.validate();
    return identity_suite(s, cfg.grid);
}

inline std::string identity_table(const std::vector<IdentityReport>& reports) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-24s %24s %24s %10s  %s\n", "identity", "lhs", "rhs", "rel_err", "grid");
    out += line;
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%-24s %24.16e %24.16e %10.3e  %s\n", r.name.c_str(), r.lhs, r.rhs,
                      r.rel_err, r.grid.c_str());
        out += line;
    }
    return out;
}

inline nlohmann::json identity_json(const std::vector<IdentityReport>& reports) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : reports)
        a.push_back({{"identity", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"rel_err", r.rel_err}, {"grid", r.grid}});
    return a;
}

/// Seeded family of smooth perturbed circles: a0 = 1 plus modes 3..6 with
/// amplitudes at most 0.05 and random phases.  Amplitudes are scaled down
/// when needed so that sum (k^2 - 1) r_k <= 0.8, which keeps the curvature
/// radius above 0.2; the result is still grid-validated.
inline Domain random_domain(std::uint64_t seed, std::size_t index) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    std::uniform_real_distribution<double> amp(0.0, 0.05);
    std::uniform_real_distribution<double> phase(0.0, two_pi);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<double> c(6, 0.0), sn(6, 0.0), r(6, 0.0);
        double load = 0.0;
        for (std::size_t k = 3; k <= 6; ++k) {
            r[k - 1] = amp(rng);
            load += static_cast<double>(k * k - 1) * r[k - 1];
        }
        const double shrink = load > 0.8 ? 0.8 / load : 1.0;
        for (std::size_t k = 3; k <= 6; ++k) {
            const double ph = phase(rng);
            c[k - 1] = shrink * r[k - 1] * std::cos(ph);
            sn[k - 1] = shrink * r[k - 1] * std::sin(ph);
        }
        auto v = validate(fourier_spec("random-" + std::to_string(index), 1.0, c, sn));
        if (v.ok()) return std::move(*v.domain);
    }
    throw DomainError("random_domain: no valid draw");
}

}  // namespace sympb
