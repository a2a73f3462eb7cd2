#pragma once

#include <sympb/plane.hpp>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sympb {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi], nodes by Newton iteration on P_n.
inline QuadratureRule gauss_legendre(std::size_t n, double lo = -1.0, double hi = 1.0) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: need at least one node");
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    const double nd = static_cast<double>(n);
    // Legendre P_n and its derivative at x
    auto legendre = [n, nd](double x, double& dp) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double kd = static_cast<double>(k);
            const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
            p0 = p1;
            p1 = p2;
        }
        dp = nd * (x * p1 - p0) / (x * x - 1.0);
        return p1;
    };
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            const double dx = legendre(x, dp) / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-15) break;
        }
        legendre(x, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = mid - half * x;
        r.nodes[n - 1 - i] = mid + half * x;
        r.weights[i] = half * w;
        r.weights[n - 1 - i] = half * w;
    }
    return r;
}

}  // namespace sympb
