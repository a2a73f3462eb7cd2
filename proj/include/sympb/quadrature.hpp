#pragma once

#include <sympb/dynamics.hpp>
#include <sympb/gauss_legendre.hpp>
#include <sympb/geometry.hpp>
#include <sympb/roots.hpp>
#include <sympb/trapezoid.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sympb {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Grid sizes: n1 x n2 for double integrals, n for single integrals.
struct GridSpec {
    std::size_t n1 = 512;
    std::size_t n2 = 512;
    std::size_t n = 4096;
    /// Largest relative change tolerated between the grid and its halving.
    double convergence_tol = 1e-8;

    GridSpec() = default;
    GridSpec(std::size_t double_n1, std::size_t double_n2, std::size_t single_n, double conv = 1e-8)
        : n1(double_n1), n2(double_n2), n(single_n), convergence_tol(conv) {
        validate();
    }

    static bool legal(std::size_t v) { return v >= 64 && (v & (v - 1)) == 0; }

    void validate() const {
        if (!legal(n1) || !legal(n2) || !legal(n))
            throw std::invalid_argument("grid sizes must be powers of two >= 64");
    }

    GridSpec halved() const {
        GridSpec g = *this;
        g.n1 /= 2;
        g.n2 /= 2;
        g.n /= 2;
        return g;
    }

    std::string describe() const {
        return std::to_string(n1) + "x" + std::to_string(n2) + "/" + std::to_string(n);
    }
};

struct IdentityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    std::string grid;

    IdentityReport() = default;
    IdentityReport(std::string n, double l, double r, std::string g)
        : name(std::move(n)), lhs(l), rhs(r), abs_err(std::abs(l - r)),
          rel_err(std::abs(l - r) / std::max({std::abs(l), std::abs(r), 1.0})), grid(std::move(g)) {}
};

/// Reparametrization weight h(alpha) = g'(g^{-1}(alpha)) > 0 and dh/dalpha.
struct ReparamWeight {
    double h = 1.0;
    double dh = 0.0;
};

struct ReparamSpec {
    std::string name;
    std::function<ReparamWeight(double alpha, const SupportJet&)> weight;

    static ReparamSpec identity() {
        return {"identity", [](double, const SupportJet&) { return ReparamWeight{1.0, 0.0}; }};
    }

    /// Arc length: h = 1 / (p'' + p).
    static ReparamSpec arc_length() {
        return {"arc-length", [](double, const SupportJet& j) {
                    const double rho = j.rho();
                    return ReparamWeight{1.0 / rho, -j.drho() / (rho * rho)};
                }};
    }

    /// h = 1 + amp cos(alpha - phase), |amp| < 1.
    static ReparamSpec cosine(double amp, double phase) {
        if (!(std::abs(amp) < 1.0)) throw std::invalid_argument("cosine reparametrization: need |amp| < 1");
        return {"cosine", [amp, phase](double alpha, const SupportJet&) {
                    return ReparamWeight{1.0 + amp * std::cos(alpha - phase), -amp * std::sin(alpha - phase)};
                }};
    }
};

/// Antiderivative of a smooth positive 2pi-periodic function, held as a
/// secular term plus a Fourier series; evaluable and invertible anywhere.
class PeriodicAntiderivative {
public:
    PeriodicAntiderivative(const std::vector<double>& samples) {
        const std::size_t m = samples.size();
        if (m < 8) throw std::invalid_argument("PeriodicAntiderivative: too few samples");
        CompensatedSum acc;
        for (double v : samples) acc += v;
        mean_ = acc.value() / static_cast<double>(m);
        const std::size_t kmax = m / 2 - 1;
        std::vector<double> cos_table(m), sin_table(m);
        for (std::size_t j = 0; j < m; ++j) {
            cos_table[j] = std::cos(two_pi * static_cast<double>(j) / static_cast<double>(m));
            sin_table[j] = std::sin(two_pi * static_cast<double>(j) / static_cast<double>(m));
        }
        double scale = std::abs(mean_);
        std::size_t quiet = 0;
        for (std::size_t k = 1; k <= kmax && quiet < 8; ++k) {
            CompensatedSum c, s;
            for (std::size_t j = 0; j < m; ++j) {
                const std::size_t idx = (k * j) % m;
                c += samples[j] * cos_table[idx];
                s += samples[j] * sin_table[idx];
            }
            cos_.push_back(2.0 * c.value() / static_cast<double>(m));
            sin_.push_back(2.0 * s.value() / static_cast<double>(m));
            const double mag = std::hypot(cos_.back(), sin_.back());
            scale = std::max(scale, mag);
            quiet = mag < 1e-15 * scale ? quiet + 1 : 0;
        }
        // drop the negligible tail
        std::size_t keep = cos_.size();
        while (keep > 0 && std::hypot(cos_[keep - 1], sin_[keep - 1]) < 1e-15 * scale) --keep;
        cos_.resize(keep);
        sin_.resize(keep);
        offset_ = 0.0;
        for (std::size_t i = 0; i < sin_.size(); ++i) offset_ += sin_[i] / static_cast<double>(i + 1);
    }

    /// Integral of the function over [0, 2pi].
    double period_integral() const { return two_pi * mean_; }

    /// Integral over [0, alpha] and the integrand at alpha.
    void eval(double alpha, double& value, double& derivative) const {
        double v = mean_ * alpha + offset_;
        double d = mean_;
        for (std::size_t i = 0; i < cos_.size(); ++i) {
            const double k = static_cast<double>(i + 1);
            const double c = std::cos(k * alpha), s = std::sin(k * alpha);
            v += (cos_[i] * s - sin_[i] * c) / k;
            d += cos_[i] * c + sin_[i] * s;
        }
        value = v;
        derivative = d;
    }

    /// alpha near [0, 2pi] with integral over [0, alpha] equal to `target`.
    double inverse(double target) const {
        auto fdf = [&](double a, double& f, double& df) {
            eval(a, f, df);
            f -= target;
        };
        if (target == 0.0) return 0.0;
        return solve_bracketed(fdf, -0.5, two_pi + 0.5, RootOptions{1e-2, 1e-14, 200}).x;
    }

    std::size_t modes() const { return cos_.size(); }

private:
    double mean_ = 0.0;
    double offset_ = 0.0;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

/// Boundary data on a uniform grid of a parameter s in [0, S) with
/// alpha = g(s).  tangent and accel are d gamma/ds and d^2 gamma/ds^2.
struct ParamGrid {
    double period = two_pi;
    std::vector<double> alpha;
    std::vector<PlaneVector> point;
    std::vector<PlaneVector> tangent;
    std::vector<PlaneVector> accel;

    std::size_t size() const { return alpha.size(); }
    double spacing() const { return period / static_cast<double>(alpha.size()); }
};

/// Builds the s-grid for a reparametrization: s(alpha) is the cumulative
/// integral of 1/h, sampled on `line_grid` points and integrated spectrally.
template <SupportFunction S>
ParamGrid param_grid(const S& s, const ReparamSpec& rp, std::size_t n, std::size_t line_grid = 4096) {
    ParamGrid g;
    g.alpha.resize(n);
    if (rp.name == "identity") {
        g.period = two_pi;
        for (std::size_t j = 0; j < n; ++j) g.alpha[j] = two_pi * static_cast<double>(j) / static_cast<double>(n);
    } else {
        std::vector<double> inv_h(line_grid);
        for (std::size_t j = 0; j < line_grid; ++j) {
            const double a = two_pi * static_cast<double>(j) / static_cast<double>(line_grid);
            const double h = rp.weight(a, s.jet(a)).h;
            if (!(h > 0.0)) throw DomainError("reparametrization weight h must be positive");
            inv_h[j] = 1.0 / h;
        }
        const PeriodicAntiderivative cumulative(inv_h);
        g.period = cumulative.period_integral();
        for (std::size_t j = 0; j < n; ++j)
            g.alpha[j] = cumulative.inverse(g.period * static_cast<double>(j) / static_cast<double>(n));
    }
    g.point.resize(n);
    g.tangent.resize(n);
    g.accel.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto b = boundary_sample(s, g.alpha[j]);
        const ReparamWeight w = rp.weight(g.alpha[j], b.jet);
        if (!(w.h > 0.0)) throw DomainError("reparametrization weight h must be positive");
        g.point[j] = b.point;
        g.tangent[j] = w.h * b.d1;
        // g''(s) = h'(alpha) h(alpha)
        g.accel[j] = (w.h * w.h) * b.d2 + (w.dh * w.h) * b.d1;
    }
    return g;
}

/// Double integrals over the full torus of the parameter.
struct TorusIntegrals {
    double mixed = 0.0;   ///< of (L11 + L22) L12
    double l12sq = 0.0;   ///< of L12^2
    double cross = 0.0;   ///< of 2 L12^2 + (L11 + L22) L12, the Bialy integrand
};

inline TorusIntegrals torus_integrals(const ParamGrid& g) {
    const std::size_t n = g.size();
    CompensatedSum mixed, sq;
    for (std::size_t i = 0; i < n; ++i) {
        double row_mixed = 0.0, row_sq = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double l11 = omega(g.accel[i], g.point[j]);
            const double l22 = omega(g.point[i], g.accel[j]);
            const double l12 = omega(g.tangent[i], g.tangent[j]);
            row_mixed += (l11 + l22) * l12;
            row_sq += l12 * l12;
        }
        mixed += row_mixed;
        sq += row_sq;
    }
    const double w = g.spacing() * g.spacing();
    TorusIntegrals t{mixed.value() * w, sq.value() * w, 0.0};
    t.cross = t.mixed + 2.0 * t.l12sq;
    return t;
}

namespace detail {

inline void check_converged(const std::string& what, double fine, double coarse, double tol) {
    if (std::abs(fine - coarse) > tol * std::max(1.0, std::abs(fine)))
        throw QuadratureError(what + ": grid too coarse (fine " + std::to_string(fine) + " vs half grid " +
                              std::to_string(coarse) + ")");
}

template <SupportFunction S>
TorusIntegrals checked_torus(const S& s, const ReparamSpec& rp, const GridSpec& grid) {
    grid.validate();
    const auto fine = torus_integrals(param_grid(s, rp, grid.n1, grid.n));
    const auto coarse = torus_integrals(param_grid(s, rp, grid.n1 / 2, grid.n));
    check_converged("torus integral of (L11+L22)L12", fine.mixed, coarse.mixed, grid.convergence_tol);
    check_converged("torus integral of L12^2", fine.l12sq, coarse.l12sq, grid.convergence_tol);
    return fine;
}

}  // namespace detail

/// Integral of (L11 + 2 L12 + L22) L12 over the full parameter torus.  The
/// phase-space integral over the open strip is half of it.
template <SupportFunction S>
double bialy_torus(const S& s, const ReparamSpec& rp = ReparamSpec::identity(), const GridSpec& grid = {}) {
    return detail::checked_torus(s, rp, grid).cross;
}

/// Weighted moments of (p'' + p)^power h^hpow against 1, cos 2a, sin 2a.
struct SecondMoments {
    double total = 0.0;
    double cos2 = 0.0;
    double sin2 = 0.0;

    /// total^2 - cos2^2 - sin2^2
    double combined() const { return total * total - cos2 * cos2 - sin2 * sin2; }
};

template <SupportFunction S>
SecondMoments curvature_moments(const S& s, const ReparamSpec& rp, int rho_power, int h_power, std::size_t n) {
    CompensatedSum t, c, sn;
    for (std::size_t j = 0; j < n; ++j) {
        const double a = two_pi * static_cast<double>(j) / static_cast<double>(n);
        const SupportJet jt = s.jet(a);
        const double v = std::pow(jt.rho(), rho_power) * std::pow(rp.weight(a, jt).h, h_power);
        t += v;
        c += v * std::cos(2.0 * a);
        sn += v * std::sin(2.0 * a);
    }
    const double w = two_pi / static_cast<double>(n);
    return {t.value() * w, c.value() * w, sn.value() * w};
}

template <SupportFunction S>
double isoperimetric_defect(const S& s, std::size_t n = default_line_grid) {
    const double l = perimeter(s, n);
    return l * l - 4.0 * pi * area(s, n);
}

/// Strip integral over 0 < a2 - a1 < pi in the shifted coordinates
/// (a1, delta = a2 - a1): periodic trapezoid in a1, Gauss-Legendre in delta.
template <SupportFunction S, class Integrand>
double strip_integral(const S& s, Integrand&& f, std::size_t n1, std::size_t n2) {
    const auto rule = gauss_legendre(n2, 0.0, pi);
    std::vector<BoundarySample> base(n1);
    for (std::size_t i = 0; i < n1; ++i)
        base[i] = boundary_sample(s, two_pi * static_cast<double>(i) / static_cast<double>(n1));
    CompensatedSum acc;
    for (std::size_t i = 0; i < n1; ++i) {
        double row = 0.0;
        for (std::size_t k = 0; k < n2; ++k) {
            const double a1 = two_pi * static_cast<double>(i) / static_cast<double>(n1);
            const auto b2 = boundary_sample(s, a1 + rule.nodes[k]);
            row += rule.weights[k] * f(gen_derivs(base[i], b2));
        }
        acc += row;
    }
    return acc.value() * two_pi / static_cast<double>(n1);
}

namespace integrand {
inline double bialy(const GenDerivs& g) { return (g.L11 + 2.0 * g.L12 + g.L22) * g.L12; }
inline double mixed(const GenDerivs& g) { return (g.L11 + g.L22) * g.L12; }
inline double l12sq(const GenDerivs& g) { return g.L12 * g.L12; }
}  // namespace integrand

/// Twice the strip integral against the torus integral, for the Bialy
/// integrand (which="bialy"), or one of its parts ("mixed", "l12sq").
template <SupportFunction S>
IdentityReport halving_check(const S& s, const GridSpec& grid = {}, const std::string& which = "bialy") {
    grid.validate();
    double (*f)(const GenDerivs&) = nullptr;
    if (which == "bialy") f = integrand::bialy;
    else if (which == "mixed") f = integrand::mixed;
    else if (which == "l12sq") f = integrand::l12sq;
    else throw std::invalid_argument("halving_check: unknown integrand " + which);

    const double strip = strip_integral(s, f, grid.n1, grid.n2);
    const double strip_coarse = strip_integral(s, f, grid.n1 / 2, grid.n2 / 2);
    detail::check_converged("strip integral", strip, strip_coarse, grid.convergence_tol);
    const auto t = detail::checked_torus(s, ReparamSpec::identity(), grid);
    const double torus = which == "bialy" ? t.cross : which == "mixed" ? t.mixed : t.l12sq;
    return {"strip halving (" + which + ")", 2.0 * strip, torus, grid.describe()};
}

/// Torus integral of (L11 + L22) L12 against -2 A(D) int (p''+p)^2.
template <SupportFunction S>
IdentityReport identity_area(const S& s, const GridSpec& grid = {}) {
    const auto t = detail::checked_torus(s, ReparamSpec::identity(), grid);
    const double A = area(s, grid.n);
    const auto m = curvature_moments(s, ReparamSpec::identity(), 2, 0, grid.n);
    return {"area identity (tangent angle)", t.mixed, -2.0 * A * m.total, grid.describe()};
}

/// Parametrization-free form: torus integral of (L11 + L22) L12 against
/// -2 A(D) times the integral of omega(gamma', gamma'') in the same
/// parameter.  The orientation here makes omega(gamma', gamma'') = (p''+p)^2
/// in tangent angle, which is what reproduces the circle exactly.
template <SupportFunction S>
IdentityReport identity_area_raw(const S& s, const ReparamSpec& rp, const GridSpec& grid = {}) {
    const auto t = detail::checked_torus(s, rp, grid);
    const auto g = param_grid(s, rp, grid.n, grid.n);
    CompensatedSum acc;
    for (std::size_t j = 0; j < g.size(); ++j) acc += omega(g.tangent[j], g.accel[j]);
    const double rhs = -2.0 * area(s, grid.n) * acc.value() * g.spacing();
    return {"area identity, raw form (" + rp.name + ")", t.mixed, rhs, grid.describe()};
}

/// 2 x torus integral of L12^2 against the second-moment combination of (p''+p)^2.
template <SupportFunction S>
IdentityReport identity_l12sq(const S& s, const GridSpec& grid = {}) {
    const auto t = detail::checked_torus(s, ReparamSpec::identity(), grid);
    const auto m = curvature_moments(s, ReparamSpec::identity(), 2, 0, grid.n);
    return {"L12^2 identity (tangent angle)", 2.0 * t.l12sq, m.combined(), grid.describe()};
}

struct ReparamReports {
    IdentityReport area;  ///< weight h^2
    IdentityReport l12sq; ///< weight h
};

/// Both identities with the double integrals taken on a uniform grid of the
/// new parameter and the right-hand sides in tangent angle.
template <SupportFunction S>
ReparamReports identity_reparam(const S& s, const ReparamSpec& rp, const GridSpec& grid = {}) {
    const auto t = detail::checked_torus(s, rp, grid);
    const double A = area(s, grid.n);
    const auto m2 = curvature_moments(s, rp, 2, 2, grid.n);
    const auto m1 = curvature_moments(s, rp, 2, 1, grid.n);
    return {{"area identity (" + rp.name + ")", t.mixed, -2.0 * A * m2.total, grid.describe()},
            {"L12^2 identity (" + rp.name + ")", 2.0 * t.l12sq, m1.combined(), grid.describe()}};
}

/// Arc-length specializations: -4 pi A and the moment combination of p'' + p.
template <SupportFunction S>
ReparamReports identity_arc_length(const S& s, const GridSpec& grid = {}) {
    const auto t = detail::checked_torus(s, ReparamSpec::arc_length(), grid);
    const double A = area(s, grid.n);
    const auto m = curvature_moments(s, ReparamSpec::identity(), 1, 0, grid.n);
    return {{"area identity, arc length closed form", t.mixed, -4.0 * pi * A, grid.describe()},
            {"L12^2 identity, arc length closed form", 2.0 * t.l12sq, m.combined(), grid.describe()}};
}

/// Every identity at once, in a fixed order.
template <SupportFunction S>
std::vector<IdentityReport> identity_suite(const S& s, const GridSpec& grid = {}) {
    std::vector<IdentityReport> out;
    out.push_back(identity_area(s, grid));
    out.push_back(identity_area_raw(s, ReparamSpec::identity(), grid));
    out.push_back(identity_l12sq(s, grid));
    const auto w = identity_reparam(s, ReparamSpec::cosine(0.3, 0.4), grid);
    out.push_back(w.area);
    out.push_back(w.l12sq);
    const auto arc = identity_reparam(s, ReparamSpec::arc_length(), grid);
    out.push_back(arc.area);
    out.push_back(arc.l12sq);
    const auto rem = identity_arc_length(s, grid);
    out.push_back(rem.area);
    out.push_back(rem.l12sq);
    out.push_back(halving_check(s, grid, "bialy"));
    out.push_back(halving_check(s, grid, "mixed"));
    out.push_back(halving_check(s, grid, "l12sq"));
    return out;
}

struct BialyReport {
    std::string reparam;
    double mixed = 0.0;          ///< torus integral of (L11 + L22) L12
    double l12sq_twice = 0.0;    ///< 2 x torus integral of L12^2
    double sum = 0.0;            ///< torus integral of (L11 + 2 L12 + L22) L12
    double phase_space = 0.0;    ///< the same integrand over the open strip, sum / 2
    SecondMoments moments;       ///< moments of (p''+p)^2 h entering the L12^2 identity
    double area = 0.0;
    double perimeter = 0.0;
    double defect = 0.0;
};

template <SupportFunction S>
BialyReport bialy_report(const S& s, const ReparamSpec& rp = ReparamSpec::arc_length(), const GridSpec& grid = {}) {
    const auto t = detail::checked_torus(s, rp, grid);
    BialyReport r;
    r.reparam = rp.name;
    r.mixed = t.mixed;
    r.l12sq_twice = 2.0 * t.l12sq;
    r.sum = t.cross;
    r.phase_space = 0.5 * t.cross;
    r.moments = curvature_moments(s, rp, 2, 1, grid.n);
    r.area = area(s, grid.n);
    r.perimeter = perimeter(s, grid.n);
    r.defect = r.perimeter * r.perimeter - 4.0 * pi * r.area;
    return r;
}

}  // namespace sympb
