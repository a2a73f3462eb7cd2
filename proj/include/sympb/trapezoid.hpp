#pragma once

#include <sympb/plane.hpp>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sympb {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            carry_ += (sum_ - t) + v;
        else
            carry_ += (v - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double v) {
        add(v);
        return *this;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Equispaced nodes on [0, period).
inline std::vector<double> periodic_nodes(std::size_t n, double period = two_pi) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = period * static_cast<double>(i) / static_cast<double>(n);
    return x;
}

/// Periodic trapezoid rule for the integral of f over one period.
template <class F>
double periodic_integral(F&& f, std::size_t n, double period = two_pi) {
    if (n == 0) throw std::invalid_argument("periodic_integral: empty grid");
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) acc += f(period * static_cast<double>(i) / static_cast<double>(n));
    return acc.value() * period / static_cast<double>(n);
}

}  // namespace sympb
