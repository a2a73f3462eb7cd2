#pragma once

#include <cmath>

namespace sympb {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

struct PlaneVector {
    double x = 0.0;
    double y = 0.0;

    constexpr PlaneVector operator+(const PlaneVector& o) const { return {x + o.x, y + o.y}; }
    constexpr PlaneVector operator-(const PlaneVector& o) const { return {x - o.x, y - o.y}; }
    constexpr PlaneVector operator-() const { return {-x, -y}; }
    constexpr PlaneVector operator*(double s) const { return {s * x, s * y}; }
    friend constexpr PlaneVector operator*(double s, const PlaneVector& v) { return v * s; }

    double norm() const { return std::hypot(x, y); }
};

/// Standard area form of the plane.
constexpr double omega(const PlaneVector& u, const PlaneVector& v) { return u.x * v.y - u.y * v.x; }

constexpr double dot(const PlaneVector& u, const PlaneVector& v) { return u.x * v.x + u.y * v.y; }

/// Positive quarter turn, (x, y) -> (-y, x).
constexpr PlaneVector quarter_turn(const PlaneVector& v) { return {-v.y, v.x}; }

/// Frame attached to a tangent direction angle.  The unit tangent e(alpha)
/// points along (-sin, cos); its quarter turn J e(alpha) is the inward normal.
struct TangentFrame {
    double angle = 0.0;
    PlaneVector tangent;
    PlaneVector turned;

    explicit TangentFrame(double alpha)
        : angle(alpha), tangent{-std::sin(alpha), std::cos(alpha)}, turned(quarter_turn(tangent)) {}

    /// Outward unit normal, -J e(alpha) = (cos, sin).
    PlaneVector outward() const { return -turned; }
};

}  // namespace sympb
