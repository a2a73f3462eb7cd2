#pragma once

#include <sympb/gauss_legendre.hpp>
#include <sympb/geometry.hpp>
#include <sympb/roots.hpp>
#include <sympb/support.hpp>
#include <sympb/trapezoid.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sympb {

class NormalizationError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Rotation by -sigma followed by the unimodular scaling (x, y) -> (a x, y / a).
struct AffineParams {
    double a = 1.0;
    double sigma = 0.0;

    AffineParams() = default;
    AffineParams(double scale, double angle) : a(scale), sigma(angle) {
        if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(sigma))
            throw std::invalid_argument("affine parameters: need finite a > 0");
    }

    PlaneVector apply(const PlaneVector& v) const {
        const double c = std::cos(sigma), s = std::sin(sigma);
        const double x = c * v.x + s * v.y;
        const double y = -s * v.x + c * v.y;
        return {a * x, y / a};
    }

    /// Same map, with sigma reduced to [0, pi/2) through the symmetries
    /// (sigma + pi, a) ~ (sigma, a) and (sigma + pi/2, 1/a) ~ (sigma, a) of
    /// the second Fourier moments.
    AffineParams canonical() const {
        double s = std::fmod(sigma, pi);
        if (s < 0.0) s += pi;
        double scale = a;
        if (s >= 0.5 * pi) {
            s -= 0.5 * pi;
            scale = 1.0 / scale;
        }
        if (0.5 * pi - s < 1e-10) {
            s = 0.0;
            scale = 1.0 / scale;
        }
        return {scale, s};
    }
};

/// Tangent angle of the preimage direction: the continuous branch of
/// arctan(tan(psi) / a^2), with alpha(psi + pi) = alpha(psi) + pi.
inline double alpha_of_psi(double a, double psi) {
    return psi + std::remainder(std::atan2(std::sin(psi), a * a * std::cos(psi)) - psi, two_pi);
}

/// d alpha / d psi = 1 / (a^2 cos^2 psi + a^-2 sin^2 psi).
inline double alpha_of_psi_derivative(double a, double psi) {
    const double c = std::cos(psi), s = std::sin(psi);
    return 1.0 / (a * a * c * c + s * s / (a * a));
}

/// Support function of the affine image: p(alpha(psi) + sigma) w(psi) with
/// w^2 = a^2 cos^2 psi + a^-2 sin^2 psi.  Derivatives by the chain rule.
template <SupportFunction S>
class TransformedSupport {
public:
    TransformedSupport(S base, AffineParams params) : base_(std::move(base)), params_(params) {}

    const S& base() const { return base_; }
    const AffineParams& params() const { return params_; }

    SupportJet jet(double psi) const {
        const double a2 = params_.a * params_.a;
        const double mid = 0.5 * (a2 + 1.0 / a2);
        const double half = 0.5 * (a2 - 1.0 / a2);
        const double c2 = std::cos(2.0 * psi), s2 = std::sin(2.0 * psi);
        // q = w^2 and its derivatives
        const double q = mid + half * c2;
        const double q1 = -2.0 * half * s2;
        const double q2 = -4.0 * half * c2;
        const double q3 = 8.0 * half * s2;

        const double w = std::sqrt(q);
        const double w1 = q1 / (2.0 * w);
        const double w2 = (q2 - 2.0 * w1 * w1) / (2.0 * w);
        const double w3 = (q3 - 6.0 * w1 * w2) / (2.0 * w);

        // alpha' = 1/q
        const double t1 = 1.0 / q;
        const double t2 = -q1 / (q * q);
        const double t3 = -q2 / (q * q) + 2.0 * q1 * q1 / (q * q * q);

        const SupportJet b = base_.jet(alpha_of_psi(params_.a, psi) + params_.sigma);
        const double f0 = b.p;
        const double f1 = b.dp * t1;
        const double f2 = b.d2p * t1 * t1 + b.dp * t2;
        const double f3 = b.d3p * t1 * t1 * t1 + 3.0 * b.d2p * t1 * t2 + b.dp * t3;

        return {f0 * w, f1 * w + f0 * w1, f2 * w + 2.0 * f1 * w1 + f0 * w2,
                f3 * w + 3.0 * f2 * w1 + 3.0 * f1 * w2 + f0 * w3};
    }

private:
    S base_;
    AffineParams params_;
};

template <SupportFunction S>
TransformedSupport<S> transform_support(const S& s, const AffineParams& params) {
    return TransformedSupport<S>(s, params);
}

/// (int p cos 2psi, int p sin 2psi) over one period.
template <SupportFunction S>
std::array<double, 2> fourier2(const S& s, std::size_t n = default_line_grid) {
    CompensatedSum c, sn;
    for (std::size_t j = 0; j < n; ++j) {
        const double a = two_pi * static_cast<double>(j) / static_cast<double>(n);
        const double p = s.jet(a).p;
        c += p * std::cos(2.0 * a);
        sn += p * std::sin(2.0 * a);
    }
    const double w = two_pi / static_cast<double>(n);
    return {c.value() * w, sn.value() * w};
}

/// Grid for the I-integrals.  The kernels peak with width ~ min(a, 1/a)^2,
/// so small or large a gets an 8x finer grid and is refined further until
/// the peak is resolved.
inline std::size_t i_integral_grid(double a, std::size_t base) {
    const double m = std::min(a, 1.0 / a);
    std::size_t n = base;
    if (m < 0.2) n *= 8;
    while (static_cast<double>(n) * m * m < 40.0) n *= 2;
    return n;
}

/// Second Fourier moments of the transformed support written in the
/// original tangent angle:
///   I1 = int p(alpha + sigma) (a^-2 c^2 - a^2 s^2) / r^{5/2},
///   I2 = int p(alpha + sigma) 2 s c / r^{5/2},  r = a^-2 c^2 + a^2 s^2.
template <SupportFunction S>
std::array<double, 2> I_integrals(const S& s, double sigma, double a, std::size_t base_grid = default_line_grid) {
    if (!(a > 0.0)) throw std::invalid_argument("I_integrals: need a > 0");
    const std::size_t n = i_integral_grid(a, base_grid);
    const double a2 = a * a;
    CompensatedSum i1, i2;
    for (std::size_t j = 0; j < n; ++j) {
        const double alpha = two_pi * static_cast<double>(j) / static_cast<double>(n);
        const double c = std::cos(alpha), sn = std::sin(alpha);
        const double r = c * c / a2 + a2 * sn * sn;
        const double r52 = r * r * std::sqrt(r);
        const double p = s.jet(alpha + sigma).p;
        i1 += p * (c * c / a2 - a2 * sn * sn) / r52;
        i2 += p * 2.0 * sn * c / r52;
    }
    const double w = two_pi / static_cast<double>(n);
    return {i1.value() * w, i2.value() * w};
}

struct AsymptoticConstants {
    double c = 0.0;
    double d = 0.0;
};

/// c = 2 int_0^inf (t^2 - 1)/(t^2 + 1)^{5/2} dt and
/// d = -4 int_0^inf t^2/(1 + t^2)^{5/2} dt, by the map t = tan(theta) and
/// Gauss-Legendre on [0, pi/2).
inline AsymptoticConstants asymptotic_constants(std::size_t nodes = 64) {
    const auto rule = gauss_legendre(nodes, 0.0, 0.5 * pi);
    CompensatedSum c, d;
    for (std::size_t k = 0; k < nodes; ++k) {
        const double t = std::tan(rule.nodes[k]);
        const double jac = 1.0 + t * t;
        const double base = std::pow(1.0 + t * t, 2.5);
        c += rule.weights[k] * jac * (t * t - 1.0) / base;
        d += rule.weights[k] * jac * t * t / base;
    }
    return {2.0 * c.value(), -4.0 * d.value()};
}

struct AsymptoticSample {
    double a = 0.0;
    double scaled_I1 = 0.0;  ///< a I1(sigma, a)
    double scaled_I2 = 0.0;  ///< I2(sigma, a) / a
};

struct AsymptoticReport {
    double sigma = 0.0;
    double limit_I1 = 0.0;  ///< c (p(sigma + pi/2) + p(sigma + 3pi/2))
    double limit_I2 = 0.0;  ///< d (p'(sigma + pi/2) + p'(sigma + 3pi/2))
    std::vector<AsymptoticSample> samples;
};

/// Behaviour of the I-integrals as a -> 0+, at a = 0.2, 0.1, 0.05 unless
/// other scales are given.
template <SupportFunction S>
AsymptoticReport asymptotic_check(const S& s, double sigma, std::vector<double> scales = {0.2, 0.1, 0.05},
                                  std::size_t base_grid = default_line_grid) {
    const auto k = asymptotic_constants();
    const SupportJet up = s.jet(sigma + 0.5 * pi);
    const SupportJet down = s.jet(sigma + 1.5 * pi);
    AsymptoticReport r{sigma, k.c * (up.p + down.p), k.d * (up.dp + down.dp), {}};
    for (double a : scales) {
        const auto I = I_integrals(s, sigma, a, base_grid);
        r.samples.push_back({a, a * I[0], I[1] / a});
    }
    return r;
}

/// (e^{-|log a|} I1, e^{|log a|} I2).
template <SupportFunction S>
std::array<double, 2> epsilon_curve(const S& s, double sigma, double a, std::size_t base_grid = default_line_grid) {
    const auto I = I_integrals(s, sigma, a, base_grid);
    const double e = std::exp(std::abs(std::log(a)));
    return {I[0] / e, I[1] * e};
}

struct NormalizationOptions {
    std::size_t grid = default_line_grid;
    double tolerance = 1e-8;       ///< certificate bound, relative to the mean radius
    double newton_tolerance = 1e-13;
    int max_iterations = 60;
    double fd_step = 1e-6;
    double log_a_box = 1.6;
    std::size_t starts_per_axis = 8;
    bool collect_all_roots = false;
};

struct NormalizationResult {
    AffineParams params;
    std::array<double, 2> residual_I{};
    std::array<double, 2> residual_fourier2{};
    int iterations = 0;
    bool converged = false;
    std::size_t start_index = 0;
    std::vector<AffineParams> roots;  ///< every distinct converged root seen
};

namespace detail {

struct NewtonOutcome {
    double sigma = 0.0;
    double log_a = 0.0;
    double residual = INFINITY;
    int iterations = 0;
};

/// Damped Newton on R(sigma, log a) = (I1, I2) with a central-difference
/// Jacobian; log a is clamped to [-box, box].
template <SupportFunction S>
NewtonOutcome newton_normalize(const S& s, double sigma, double log_a, double box, double scale,
                               const NormalizationOptions& opt) {
    auto R = [&](double sg, double la) { return I_integrals(s, sg, std::exp(la), opt.grid); };
    auto norm = [](const std::array<double, 2>& v) { return std::hypot(v[0], v[1]); };
    NewtonOutcome out{sigma, log_a, INFINITY, 0};
    auto r = R(sigma, log_a);
    double rn = norm(r);
    for (int it = 0; it < opt.max_iterations; ++it) {
        out.iterations = it + 1;
        if (rn <= opt.newton_tolerance * scale) break;
        const double h = opt.fd_step;
        const auto rs_p = R(sigma + h, log_a), rs_m = R(sigma - h, log_a);
        const auto rl_p = R(sigma, log_a + h), rl_m = R(sigma, log_a - h);
        const double j11 = (rs_p[0] - rs_m[0]) / (2 * h), j12 = (rl_p[0] - rl_m[0]) / (2 * h);
        const double j21 = (rs_p[1] - rs_m[1]) / (2 * h), j22 = (rl_p[1] - rl_m[1]) / (2 * h);
        const double det = j11 * j22 - j12 * j21;
        if (!(std::abs(det) > 0.0)) break;
        const double ds = -(j22 * r[0] - j12 * r[1]) / det;
        const double dl = -(-j21 * r[0] + j11 * r[1]) / det;
        double t = 1.0;
        bool improved = false;
        for (int k = 0; k < 30; ++k, t *= 0.5) {
            const double ns = sigma + t * ds;
            const double nl = std::clamp(log_a + t * dl, -box, box);
            const auto nr = R(ns, nl);
            if (norm(nr) < rn) {
                const double moved = std::hypot(ns - sigma, nl - log_a);
                sigma = ns;
                log_a = nl;
                r = nr;
                rn = norm(nr);
                improved = true;
                if (moved < 1e-15) t = 0.0;
                break;
            }
        }
        if (!improved || t == 0.0) break;
    }
    out.sigma = sigma;
    out.log_a = log_a;
    out.residual = rn;
    return out;
}

}  // namespace detail

/// Searches (a, sigma) making both second Fourier moments of the affine
/// image vanish.  Starts: a crude estimate from the input's own second
/// moments, then a regular grid over sigma in [0, pi/2] and
/// log a in [-box, box]; the lowest-index converged start wins.  The result
/// is certified on the transformed support function directly.
template <SupportFunction S>
NormalizationResult find_normalization(const S& s, const NormalizationOptions& opt = {}) {
    const double scale = perimeter(s, opt.grid) / two_pi;
    const double tol = opt.tolerance * std::max(1.0, scale);

    // crude axis-ratio estimate from the second moments of the input
    const auto f = fourier2(s, opt.grid);
    const double m2 = std::hypot(f[0], f[1]) / pi;
    const double ratio = std::clamp((scale - m2) / (scale + m2), 1e-6, 1.0);
    const AffineParams estimate = AffineParams(std::sqrt(ratio), 0.5 * std::atan2(f[1], f[0])).canonical();
    const double box = std::max(opt.log_a_box, std::abs(std::log(estimate.a)) + 0.5);

    std::vector<std::pair<double, double>> starts{{estimate.sigma, std::log(estimate.a)}};
    const std::size_t k = std::max<std::size_t>(opt.starts_per_axis, 2);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            starts.emplace_back(0.5 * pi * static_cast<double>(i) / static_cast<double>(k - 1),
                                -opt.log_a_box + 2.0 * opt.log_a_box * static_cast<double>(j) /
                                                     static_cast<double>(k - 1));

    NormalizationResult best;
    double best_residual = INFINITY;
    for (std::size_t idx = 0; idx < starts.size(); ++idx) {
        const auto o = detail::newton_normalize(s, starts[idx].first, starts[idx].second, box, scale, opt);
        if (!std::isfinite(o.residual)) continue;
        const AffineParams p = AffineParams(std::exp(o.log_a), o.sigma).canonical();
        const bool ok = o.residual <= tol;
        if (ok && std::none_of(best.roots.begin(), best.roots.end(), [&](const AffineParams& q) {
                return std::abs(q.sigma - p.sigma) < 1e-6 && std::abs(std::log(q.a / p.a)) < 1e-6;
            }))
            best.roots.push_back(p);
        if (!best.converged && (ok || o.residual < best_residual)) {
            best.params = p;
            best.iterations = o.iterations;
            best.start_index = idx;
            best.converged = ok;
            best_residual = o.residual;
        }
        if (best.converged && !opt.collect_all_roots) break;
    }
    best.residual_I = I_integrals(s, best.params.sigma, best.params.a, opt.grid);
    const auto transformed = transform_support(s, best.params);
    best.residual_fourier2 = fourier2(transformed, opt.grid);
    best.converged = best.converged && std::hypot(best.residual_fourier2[0], best.residual_fourier2[1]) <= tol &&
                     std::hypot(best.residual_I[0], best.residual_I[1]) <= tol &&
                     support_violations(transformed).empty();
    return best;
}

template <SupportFunction S>
struct NormalizedDomain {
    TransformedSupport<S> support;
    NormalizationResult result;
};

/// find_normalization followed by transform_support; throws if no root was
/// certified or the image fails validation.
template <SupportFunction S>
NormalizedDomain<S> normalize_domain(const S& s, const NormalizationOptions& opt = {}) {
    auto r = find_normalization(s, opt);
    if (!r.converged)
        throw NormalizationError("normalization did not converge: best residual (" +
                                 std::to_string(r.residual_fourier2[0]) + ", " +
                                 std::to_string(r.residual_fourier2[1]) + ") at a=" + std::to_string(r.params.a) +
                                 ", sigma=" + std::to_string(r.params.sigma));
    auto t = transform_support(s, r.params);
    return {std::move(t), std::move(r)};
}

}  // namespace sympb
