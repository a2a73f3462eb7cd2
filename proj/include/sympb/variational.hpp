#pragma once

#include <sympb/dynamics.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sympb {

/// Discrete Jacobi field xi_n, n = first .. first + values.size() - 1,
/// attached to a configuration in the tangent-angle parametrization.  The
/// recurrence is covariant under reparametrization, so the conjugacy verdict
/// does not depend on that choice.
struct JacobiField {
    std::size_t first = 0;
    std::vector<double> values;

    std::size_t last() const { return first + values.size() - 1; }
    double at(std::size_t n) const { return values.at(n - first); }
    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

inline constexpr double default_stationarity_tol = 1e-8;
inline constexpr double default_conjugacy_tol = 1e-8;

namespace detail {

/// Ensures indices lo..hi are inside the configuration and every interior
/// point there is stationary relative to the local size of the pairing.
template <SupportFunction S>
void require_stationary(const S& s, const Configuration& cfg, std::size_t lo, std::size_t hi, double tol) {
    if (hi >= cfg.size() || lo >= hi)
        throw std::invalid_argument("segment [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                    "] not inside configuration of size " + std::to_string(cfg.size()));
    for (std::size_t k = std::max<std::size_t>(lo, 1); k < hi && k + 1 < cfg.size(); ++k) {
        const auto bk = boundary_sample(s, cfg.alphas[k]);
        const PlaneVector next = boundary_point(s, cfg.alphas[k + 1]);
        const PlaneVector prev = boundary_point(s, cfg.alphas[k - 1]);
        const double r = omega(bk.d1, next - prev);
        const double scale = bk.d1.norm() * (next.norm() + prev.norm());
        if (std::abs(r) > tol * scale)
            throw std::invalid_argument("configuration not stationary at index " + std::to_string(k) +
                                        " (residual " + std::to_string(r) + ")");
    }
}

}  // namespace detail

/// Coefficients of the three-term recurrence at interior index n:
/// E(n-1) xi_{n-1} + D(n) xi_n + E(n) xi_{n+1} = 0 with
/// D(n) = L22(a_{n-1}, a_n) + L11(a_n, a_{n+1}) and E(n) = L12(a_n, a_{n+1}).
struct JacobiCoefficients {
    std::vector<double> diag;      ///< D(n), indexed by n (ends unused)
    std::vector<double> coupling;  ///< E(n), indexed by n
};

template <SupportFunction S>
JacobiCoefficients jacobi_coefficients(const S& s, const Configuration& cfg, std::size_t lo, std::size_t hi) {
    std::vector<BoundarySample> b;
    b.reserve(hi - lo + 1);
    for (std::size_t k = lo; k <= hi; ++k) b.push_back(boundary_sample(s, cfg.alphas[k]));
    JacobiCoefficients c;
    c.diag.assign(hi + 1, 0.0);
    c.coupling.assign(hi + 1, 0.0);
    for (std::size_t k = lo; k < hi; ++k) {
        const GenDerivs g = gen_derivs(b[k - lo], b[k + 1 - lo]);
        c.coupling[k] = g.L12;
        c.diag[k] += g.L11;
        c.diag[k + 1] += g.L22;
    }
    return c;
}

/// Forward solve of the Jacobi recurrence from the seed pair (xi_M, xi_{M+1})
/// up to index N.
template <SupportFunction S>
JacobiField jacobi_propagate(const S& s, const Configuration& cfg, std::size_t M, std::size_t N, double xi_M,
                             double xi_M1, double stationarity_tol = default_stationarity_tol) {
    if (N < M + 1) throw std::invalid_argument("jacobi_propagate: need N >= M + 1");
    detail::require_stationary(s, cfg, M, N, stationarity_tol);
    const auto c = jacobi_coefficients(s, cfg, M, N);
    JacobiField f{M, {xi_M, xi_M1}};
    f.values.reserve(N - M + 1);
    for (std::size_t n = M + 1; n < N; ++n) {
        const double prev = f.values[n - 1 - M];
        const double cur = f.values[n - M];
        f.values.push_back(-(c.coupling[n - 1] * prev + c.diag[n] * cur) / c.coupling[n]);
    }
    return f;
}

struct ConjugacyResult {
    bool conjugate = false;
    JacobiField witness;
};

inline bool vanishes_relative(double terminal, double scale, double tol) {
    return std::abs(terminal) < tol * scale;
}

/// Propagates xi_M = 0, xi_{M+1} = slope and tests |xi_N| against the field
/// magnitude.  Every field vanishing at M is a multiple of this one.
template <SupportFunction S>
ConjugacyResult conjugate_test(const S& s, const Configuration& cfg, std::size_t M, std::size_t N,
                               double slope = 1.0, double tol = default_conjugacy_tol) {
    if (N <= M + 1) throw std::invalid_argument("conjugate_test: span too short (need N > M + 1)");
    if (slope == 0.0) throw std::invalid_argument("conjugate_test: zero seed is not a witness");
    JacobiField f = jacobi_propagate(s, cfg, M, N, 0.0, slope);
    const bool conj = vanishes_relative(f.values.back(), f.max_abs(), tol);
    return {conj, std::move(f)};
}

/// Second variation of the action sum_{k=M}^{N-1} L(a_k, a_{k+1}) with the
/// endpoints held fixed: symmetric tridiagonal over a_{M+1} .. a_{N-1}.
struct SegmentHessian {
    std::size_t M = 0;
    std::size_t N = 0;
    std::vector<double> diag;         ///< size N - M - 1
    std::vector<double> off;          ///< size N - M - 2
    double terminal_coupling = 0.0;   ///< L12(a_{N-1}, a_N), outside the matrix

    std::size_t dim() const { return diag.size(); }

    /// Determinant by the continuant recurrence.
    double determinant() const {
        double prev = 1.0, cur = diag.empty() ? 1.0 : diag[0];
        for (std::size_t i = 1; i < diag.size(); ++i) {
            const double next = diag[i] * cur - off[i - 1] * off[i - 1] * prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }

    /// det(H) / prod(couplings), equal to (-1)^m xi_N for the normalized
    /// Jacobi field started at M.
    double reduced_determinant() const {
        double d = determinant();
        for (double e : off) d /= e;
        return d / terminal_coupling;
    }
};

template <SupportFunction S>
SegmentHessian segment_hessian(const S& s, const Configuration& cfg, std::size_t M, std::size_t N,
                               double stationarity_tol = default_stationarity_tol) {
    if (N < M + 2) throw std::invalid_argument("segment_hessian: need at least one interior point");
    detail::require_stationary(s, cfg, M, N, stationarity_tol);
    const auto c = jacobi_coefficients(s, cfg, M, N);
    SegmentHessian h{M, N, {}, {}, c.coupling[N - 1]};
    for (std::size_t n = M + 1; n < N; ++n) h.diag.push_back(c.diag[n]);
    for (std::size_t n = M + 1; n + 1 < N; ++n) h.off.push_back(c.coupling[n]);
    return h;
}

/// All pairs (M, N) with 2 <= N - M <= max_span that are conjugate.
template <SupportFunction S>
std::vector<std::pair<std::size_t, std::size_t>> conjugate_scan(const S& s, const Configuration& cfg,
                                                                std::size_t max_span,
                                                                double tol = default_conjugacy_tol) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (cfg.size() < 3) return out;
    const std::size_t last = cfg.size() - 1;
    detail::require_stationary(s, cfg, 0, last, default_stationarity_tol);
    const auto c = jacobi_coefficients(s, cfg, 0, last);
    for (std::size_t M = 0; M + 2 <= last; ++M) {
        const std::size_t top = std::min(last, M + max_span);
        double prev = 0.0, cur = 1.0, peak = 1.0;
        for (std::size_t n = M + 1; n < top; ++n) {
            const double next = -(c.coupling[n - 1] * prev + c.diag[n] * cur) / c.coupling[n];
            prev = cur;
            cur = next;
            peak = std::max(peak, std::abs(cur));
            if (vanishes_relative(cur, peak, tol)) out.emplace_back(M, n + 1);
        }
    }
    return out;
}

}  // namespace sympb
