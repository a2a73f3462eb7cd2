#pragma once

#include <sympb/geometry.hpp>
#include <sympb/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sympb {

/// Ordered pair of lifted tangent angles with 0 < alpha2 - alpha1 < pi.
class PhasePoint {
public:
    PhasePoint(double alpha1, double alpha2) : a1_(alpha1), a2_(alpha2) {
        const double gap = alpha2 - alpha1;
        if (!(gap > 0.0 && gap < pi))
            throw DomainError("phase point outside the open strip: gap " + std::to_string(gap));
    }

    double alpha1() const { return a1_; }
    double alpha2() const { return a2_; }
    double gap() const { return a2_ - a1_; }

private:
    double a1_;
    double a2_;
};

/// Inputs closer to the diagonal than this are rejected.
inline constexpr double min_phase_gap = 1e-6;

/// Generating function L(a1, a2) = omega(gamma(a1), gamma(a2)) and its partials.
struct GenDerivs {
    double L = 0.0;
    double L1 = 0.0;
    double L2 = 0.0;
    double L11 = 0.0;
    double L12 = 0.0;
    double L22 = 0.0;
};

inline GenDerivs gen_derivs(const BoundarySample& b1, const BoundarySample& b2) {
    return {omega(b1.point, b2.point), omega(b1.d1, b2.point), omega(b1.point, b2.d1),
            omega(b1.d2, b2.point),    omega(b1.d1, b2.d1),    omega(b1.point, b2.d2)};
}

template <SupportFunction S>
GenDerivs gen_derivs(const S& s, double alpha1, double alpha2) {
    return gen_derivs(boundary_sample(s, alpha1), boundary_sample(s, alpha2));
}

template <SupportFunction S>
double gen_fn(const S& s, double alpha1, double alpha2) {
    return omega(boundary_point(s, alpha1), boundary_point(s, alpha2));
}

/// Bound K on |L11|, |L22| and L12 from the C^2 data of the boundary,
/// sampled on a uniform grid.
template <SupportFunction S>
double c2_bound(const S& s, std::size_t grid = default_validation_grid) {
    double max_pt = 0.0, max_d1 = 0.0, max_d2 = 0.0;
    for (std::size_t i = 0; i < grid; ++i) {
        const auto b = boundary_sample(s, two_pi * static_cast<double>(i) / static_cast<double>(grid));
        max_pt = std::max(max_pt, b.point.norm());
        max_d1 = std::max(max_d1, b.d1.norm());
        max_d2 = std::max(max_d2, b.d2.norm());
    }
    return std::max(max_pt * max_d2, max_d1 * max_d1);
}

struct SCoords {
    double s1 = 0.0;
    double s2 = 0.0;
};

template <SupportFunction S>
SCoords s_coords(const S& s, const PhasePoint& q) {
    const auto b1 = boundary_sample(s, q.alpha1());
    const auto b2 = boundary_sample(s, q.alpha2());
    return {omega(b1.d1, b2.point), omega(b1.point, b2.d1)};
}

/// One bounce (a1, a2) -> (a2, a3), where a3 is the root of
/// omega(gamma'(a2), gamma(a) - gamma(a1)) on (a2, a2 + pi).
template <SupportFunction S>
PhasePoint step(const S& s, const PhasePoint& q, const RootOptions& opt = {}) {
    if (q.gap() < min_phase_gap)
        throw std::invalid_argument("step: phase point too close to the diagonal (gap " +
                                    std::to_string(q.gap()) + ")");
    const auto b2 = boundary_sample(s, q.alpha2());
    const PlaneVector from = boundary_point(s, q.alpha1());
    auto fdf = [&](double a, double& f, double& df) {
        const auto b = boundary_sample(s, a);
        f = omega(b2.d1, b.point - from);
        df = omega(b2.d1, b.d1);
    };
    const auto r = solve_bracketed(fdf, q.alpha2(), q.alpha2() + pi, opt);
    return PhasePoint(q.alpha2(), r.x);
}

/// Time reversal of `step`: (a2, a3) -> (a1, a2) with a1 in (a2 - pi, a2).
template <SupportFunction S>
PhasePoint inverse_step(const S& s, const PhasePoint& q, const RootOptions& opt = {}) {
    if (q.gap() < min_phase_gap)
        throw std::invalid_argument("inverse_step: phase point too close to the diagonal (gap " +
                                    std::to_string(q.gap()) + ")");
    const auto b2 = boundary_sample(s, q.alpha1());
    const PlaneVector to = boundary_point(s, q.alpha2());
    auto fdf = [&](double a, double& f, double& df) {
        const auto b = boundary_sample(s, a);
        f = omega(b2.d1, to - b.point);
        df = -omega(b2.d1, b.d1);
    };
    const auto r = solve_bracketed(fdf, q.alpha1() - pi, q.alpha1(), opt);
    return PhasePoint(r.x, q.alpha1());
}

/// Finite billiard trajectory in lifted angles with the stationarity
/// residual omega(gamma'(a_k), gamma(a_{k+1}) - gamma(a_{k-1})) at each
/// interior index.  residuals[k] is meaningful for 0 < k < size-1; the two
/// endpoint slots hold zero.
struct Configuration {
    std::vector<double> alphas;
    std::vector<double> residuals;

    std::size_t size() const { return alphas.size(); }
    PhasePoint phase_point(std::size_t k) const { return PhasePoint(alphas.at(k), alphas.at(k + 1)); }

    double max_residual() const {
        double m = 0.0;
        for (double r : residuals) m = std::max(m, std::abs(r));
        return m;
    }
};

template <SupportFunction S>
std::vector<double> stationarity_residuals(const S& s, const std::vector<double>& alphas) {
    std::vector<double> res(alphas.size(), 0.0);
    for (std::size_t k = 1; k + 1 < alphas.size(); ++k) {
        const auto bk = boundary_sample(s, alphas[k]);
        res[k] = omega(bk.d1, boundary_point(s, alphas[k + 1]) - boundary_point(s, alphas[k - 1]));
    }
    return res;
}

/// Wraps an explicit angle sequence, checking that consecutive pairs are
/// phase points.
template <SupportFunction S>
Configuration make_configuration(const S& s, std::vector<double> alphas) {
    for (std::size_t k = 0; k + 1 < alphas.size(); ++k) PhasePoint(alphas[k], alphas[k + 1]);
    auto res = stationarity_residuals(s, alphas);
    return {std::move(alphas), std::move(res)};
}

/// `n` forward bounces from `start`; the configuration holds n + 2 angles.
template <SupportFunction S>
Configuration orbit(const S& s, const PhasePoint& start, std::size_t n, const RootOptions& opt = {}) {
    std::vector<double> alphas;
    alphas.reserve(n + 2);
    alphas.push_back(start.alpha1());
    alphas.push_back(start.alpha2());
    PhasePoint q = start;
    for (std::size_t i = 0; i < n; ++i) {
        q = step(s, q, opt);
        alphas.push_back(q.alpha2());
    }
    auto res = stationarity_residuals(s, alphas);
    return {std::move(alphas), std::move(res)};
}

/// Ratio L12(a2, a3) det D / L12(a1, a2) for the finite-difference Jacobian
/// D of the map; equals 1 when the invariant form is preserved.
template <SupportFunction S>
double area_preservation_check(const S& s, const PhasePoint& q, double h, const RootOptions& opt = {}) {
    const double room = std::min(q.gap(), pi - q.gap());
    if (!(h > 0.0) || h > 0.1 * room)
        throw std::invalid_argument("area_preservation_check: step " + std::to_string(h) +
                                    " too large for phase point with gap " + std::to_string(q.gap()));
    auto image = [&](double a1, double a2) { return step(s, PhasePoint(a1, a2), opt).alpha2(); };
    const double d31 = (image(q.alpha1() + h, q.alpha2()) - image(q.alpha1() - h, q.alpha2())) / (2.0 * h);
    // D = [[0, 1], [d31, d32]], so det D = -d31 whatever d32 is
    const double det = -d31;
    const PhasePoint next = step(s, q, opt);
    return gen_derivs(s, next.alpha1(), next.alpha2()).L12 * det / gen_derivs(s, q.alpha1(), q.alpha2()).L12;
}

/// Mean lifted advance per bounce, in turns.
inline double rotation_number(const Configuration& cfg) {
    if (cfg.size() < 2) throw std::invalid_argument("rotation_number: orbit too short");
    return (cfg.alphas.back() - cfg.alphas.front()) / (two_pi * static_cast<double>(cfg.size() - 1));
}

}  // namespace sympb
