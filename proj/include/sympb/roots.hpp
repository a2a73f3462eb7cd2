#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sympb {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RootOptions {
    double bisect_width = 1e-3;  ///< bracket width at which Newton takes over
    double tolerance = 1e-12;    ///< absolute step size at which iteration stops
    int max_iterations = 200;
};

struct RootResult {
    double x = 0.0;
    int iterations = 0;
};

/// Root of f on [lo, hi] given a sign change.  Plain bisection shrinks the
/// bracket to `bisect_width`, then Newton polishes with the analytic
/// derivative; any Newton iterate that leaves the live bracket is replaced by
/// a bisection step.  `fdf(x, f, df)` fills value and derivative.
template <class FDF>
RootResult solve_bracketed(FDF&& fdf, double lo, double hi, const RootOptions& opt = {}) {
    double flo = 0.0, fhi = 0.0, dummy = 0.0;
    fdf(lo, flo, dummy);
    fdf(hi, fhi, dummy);
    if (flo == 0.0) return {lo, 0};
    if (fhi == 0.0) return {hi, 0};
    if (!(flo * fhi < 0.0))
        throw SolverError("root not bracketed on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "]: f = " + std::to_string(flo) + ", " + std::to_string(fhi));
    // orient so that f(neg) < 0 < f(pos)
    double neg = flo < 0.0 ? lo : hi;
    double pos = flo < 0.0 ? hi : lo;

    int it = 0;
    double x = 0.5 * (lo + hi);
    while (std::abs(pos - neg) > opt.bisect_width && it < opt.max_iterations) {
        ++it;
        double fx = 0.0;
        fdf(x, fx, dummy);
        if (fx == 0.0) return {x, it};
        (fx < 0.0 ? neg : pos) = x;
        x = 0.5 * (neg + pos);
    }

    while (it < opt.max_iterations) {
        ++it;
        double fx = 0.0, dfx = 0.0;
        fdf(x, fx, dfx);
        if (fx == 0.0) return {x, it};
        (fx < 0.0 ? neg : pos) = x;
        const double a = std::min(neg, pos);
        const double b = std::max(neg, pos);
        double next = x - fx / dfx;
        // a converged Newton step can round onto the bracket end it starts from
        if (dfx != 0.0 && std::abs(next - x) <= opt.tolerance) return {next, it};
        if (!(dfx != 0.0) || !(next > a && next < b)) next = 0.5 * (a + b);
        const double step = std::abs(next - x);
        x = next;
        if (step <= opt.tolerance || (b - a) <= opt.tolerance) return {x, it};
    }
    throw SolverError("root solver: tolerance " + std::to_string(opt.tolerance) + " not reached after " +
                      std::to_string(opt.max_iterations) + " iterations");
}

}  // namespace sympb
