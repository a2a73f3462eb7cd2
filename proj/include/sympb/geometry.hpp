#pragma once

#include <sympb/plane.hpp>
#include <sympb/support.hpp>
#include <sympb/trapezoid.hpp>

#include <stdexcept>
#include <string>

namespace sympb {

/// Support function or one of its derivatives, order 0..3.
inline double support_eval(const Domain& d, double alpha, int order) {
    const SupportJet j = d.jet(alpha);
    switch (order) {
        case 0: return j.p;
        case 1: return j.dp;
        case 2: return j.d2p;
        case 3: return j.d3p;
        default: throw std::invalid_argument("support_eval: order must be 0..3, got " + std::to_string(order));
    }
}

inline PlaneVector boundary_point(const SupportJet& j, const TangentFrame& f) {
    return j.dp * f.tangent - j.p * f.turned;
}

/// gamma(alpha) = p'(alpha) e - p(alpha) J e.
template <SupportFunction S>
PlaneVector boundary_point(const S& s, double alpha) {
    return boundary_point(s.jet(alpha), TangentFrame(alpha));
}

struct BoundaryDerivatives {
    PlaneVector first;
    PlaneVector second;
};

inline BoundaryDerivatives boundary_derivatives(const SupportJet& j, const TangentFrame& f) {
    return {j.rho() * f.tangent, j.drho() * f.tangent + j.rho() * f.turned};
}

/// gamma' = (p''+p) e and gamma'' = (p'''+p') e + (p''+p) J e.
template <SupportFunction S>
BoundaryDerivatives boundary_derivatives(const S& s, double alpha) {
    return boundary_derivatives(s.jet(alpha), TangentFrame(alpha));
}

/// Everything about the boundary at one tangent angle.
struct BoundarySample {
    SupportJet jet;
    PlaneVector point;
    PlaneVector d1;
    PlaneVector d2;
};

template <SupportFunction S>
BoundarySample boundary_sample(const S& s, double alpha) {
    const SupportJet j = s.jet(alpha);
    const TangentFrame f(alpha);
    const auto d = boundary_derivatives(j, f);
    return {j, boundary_point(j, f), d.first, d.second};
}

template <SupportFunction S>
double curvature_radius(const S& s, double alpha) {
    const double rho = s.jet(alpha).rho();
    if (!(rho > 0.0))
        throw DomainError("curvature radius p'' + p = " + std::to_string(rho) + " <= 0 at alpha=" +
                          std::to_string(alpha));
    return rho;
}

inline constexpr std::size_t default_line_grid = 4096;

template <SupportFunction S>
double perimeter(const S& s, std::size_t grid = default_line_grid) {
    return periodic_integral([&](double a) { return s.jet(a).p; }, grid);
}

template <SupportFunction S>
double area(const S& s, std::size_t grid = default_line_grid) {
    return 0.5 * periodic_integral(
                     [&](double a) {
                         const SupportJet j = s.jet(a);
                         return j.rho() * j.p;
                     },
                     grid);
}

/// Parameter of the point whose tangent is antiparallel to the one at alpha.
constexpr double conjugate_param(double alpha) { return alpha + pi; }

}  // namespace sympb
