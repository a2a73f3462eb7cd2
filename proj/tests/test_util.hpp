#pragma once

#include <sympb/variational.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <random>

namespace sympb::testkit {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

struct ShotSegment {
    Configuration cfg;
    std::size_t M = 0;
    std::size_t N = 0;
    double gap = 0.0;
};

/// Terminal value of the normalized Jacobi field from index 0 along the
/// orbit started at (a1, a1 + gap), relative to the field's peak.
template <SupportFunction S>
double terminal_ratio(const S& s, double a1, double gap, std::size_t N) {
    const auto c = orbit(s, PhasePoint(a1, a1 + gap), N - 1);
    const auto f = jacobi_propagate(s, c, 0, N, 0.0, 1.0);
    return f.values.back() / f.max_abs();
}

/// Genuine conjugate segment (0, N): shoots on the initial gap until the
/// terminal field value changes sign, then bisects it to machine precision.
template <SupportFunction S>
std::optional<ShotSegment> shoot_conjugate(const S& s, double a1, double gap_lo, double gap_hi, std::size_t N,
                                           std::size_t samples = 200) {
    double lo = gap_lo;
    double flo = terminal_ratio(s, a1, lo, N);
    for (std::size_t i = 1; i <= samples; ++i) {
        const double hi = gap_lo + (gap_hi - gap_lo) * static_cast<double>(i) / static_cast<double>(samples);
        const double fhi = terminal_ratio(s, a1, hi, N);
        if (flo * fhi < 0.0) {
            double a = lo, b = hi, fa = flo;
            for (int it = 0; it < 200 && b - a > 1e-16 * b; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = terminal_ratio(s, a1, m, N);
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if (fa * fm < 0.0) {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            const double g = std::abs(terminal_ratio(s, a1, a, N)) < std::abs(terminal_ratio(s, a1, b, N)) ? a : b;
            return ShotSegment{orbit(s, PhasePoint(a1, a1 + g), N - 1), 0, N, g};
        }
        lo = hi;
        flo = fhi;
    }
    return std::nullopt;
}

}  // namespace sympb::testkit
