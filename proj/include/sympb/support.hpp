#pragma once

#include <sympb/plane.hpp>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sympb {

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Support function value and its first three derivatives at one angle.
struct SupportJet {
    double p = 0.0;
    double dp = 0.0;
    double d2p = 0.0;
    double d3p = 0.0;

    /// Radius of curvature p'' + p.
    double rho() const { return d2p + p; }
    /// Its derivative p''' + p'.
    double drho() const { return d3p + dp; }
};

/// Anything that can report the support function jet at a tangent angle.
template <class S>
concept SupportFunction = requires(const S& s, double alpha) {
    { s.jet(alpha) } -> std::convertible_to<SupportJet>;
};

/// p(alpha) = a0 + sum_k (c_k cos k alpha + s_k sin k alpha), k = 1..N.
class FourierSupport {
public:
    FourierSupport() = default;

    FourierSupport(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
        : a0_(a0), cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
        const auto n = std::max(cos_.size(), sin_.size());
        cos_.resize(n, 0.0);
        sin_.resize(n, 0.0);
        if (!std::isfinite(a0_) ||
            !std::all_of(cos_.begin(), cos_.end(), [](double v) { return std::isfinite(v); }) ||
            !std::all_of(sin_.begin(), sin_.end(), [](double v) { return std::isfinite(v); }))
            throw DomainError("fourier support: non-finite coefficient");
    }

    static FourierSupport circle(double radius) { return FourierSupport(radius, {}, {}); }

    /// a0 + amplitude * cos(mode * alpha)
    static FourierSupport single_mode(double a0, std::size_t mode, double amplitude) {
        std::vector<double> c(mode, 0.0);
        c[mode - 1] = amplitude;
        return FourierSupport(a0, std::move(c), {});
    }

    double mean() const { return a0_; }
    std::size_t modes() const { return cos_.size(); }
    const std::vector<double>& cos_coeffs() const { return cos_; }
    const std::vector<double>& sin_coeffs() const { return sin_; }

    SupportJet jet(double alpha) const {
        SupportJet j{a0_, 0.0, 0.0, 0.0};
        const double c1 = std::cos(alpha);
        const double s1 = std::sin(alpha);
        double ck = c1;
        double sk = s1;
        for (std::size_t i = 0; i < cos_.size(); ++i) {
            const double k = static_cast<double>(i + 1);
            const double a = cos_[i];
            const double b = sin_[i];
            const double even = a * ck + b * sk;
            const double odd = b * ck - a * sk;
            j.p += even;
            j.dp += k * odd;
            j.d2p -= k * k * even;
            j.d3p -= k * k * k * odd;
            if (i % 16 == 15) {
                // re-seed the angle recurrence to keep rounding from drifting
                ck = std::cos((k + 1.0) * alpha);
                sk = std::sin((k + 1.0) * alpha);
            } else {
                const double next_c = ck * c1 - sk * s1;
                sk = sk * c1 + ck * s1;
                ck = next_c;
            }
        }
        return j;
    }

    FourierSupport scaled(double lambda) const {
        auto c = cos_;
        auto s = sin_;
        for (auto& v : c) v *= lambda;
        for (auto& v : s) v *= lambda;
        return FourierSupport(lambda * a0_, std::move(c), std::move(s));
    }

private:
    double a0_ = 1.0;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

/// Ellipse with semi-axes along a frame rotated by `rotation`, stored in
/// closed form: p(alpha)^2 = A^2 cos^2(alpha - rot) + B^2 sin^2(alpha - rot).
class EllipseSupport {
public:
    EllipseSupport(double semi_axis_x, double semi_axis_y, double rotation = 0.0)
        : ax_(semi_axis_x), ay_(semi_axis_y), rot_(rotation) {
        if (!(ax_ > 0.0) || !(ay_ > 0.0) || !std::isfinite(ax_) || !std::isfinite(ay_) ||
            !std::isfinite(rot_))
            throw DomainError("ellipse support: semi-axes must be positive and finite");
    }

    double semi_axis_x() const { return ax_; }
    double semi_axis_y() const { return ay_; }
    double rotation() const { return rot_; }

    /// Normalized form A >= B, rotation reduced to [0, pi).
    EllipseSupport canonical() const {
        double a = ax_, b = ay_, r = rot_;
        if (b > a) {
            std::swap(a, b);
            r += 0.5 * pi;
        }
        r = std::fmod(r, pi);
        if (r < 0.0) r += pi;
        return EllipseSupport(a, b, r);
    }

    SupportJet jet(double alpha) const {
        const double mid = 0.5 * (ax_ * ax_ + ay_ * ay_);
        const double half = 0.5 * (ax_ * ax_ - ay_ * ay_);
        const double c2 = std::cos(2.0 * (alpha - rot_));
        const double s2 = std::sin(2.0 * (alpha - rot_));
        const double q = mid + half * c2;
        const double q1 = -2.0 * half * s2;
        const double q2 = -4.0 * half * c2;
        const double q3 = 8.0 * half * s2;
        SupportJet j;
        j.p = std::sqrt(q);
        j.dp = q1 / (2.0 * j.p);
        j.d2p = (q2 - 2.0 * j.dp * j.dp) / (2.0 * j.p);
        j.d3p = (q3 - 6.0 * j.dp * j.d2p) / (2.0 * j.p);
        return j;
    }

    /// Tangent angle of the boundary point R(rot) (A cos u, B sin u).
    double angle_of_circle_param(double u) const {
        const double raw = std::atan2(ax_ * std::sin(u), ay_ * std::cos(u));
        return u + rot_ + std::remainder(raw - u, two_pi);
    }

    /// Inverse of angle_of_circle_param, continuous lift.
    double circle_param_of_angle(double alpha) const {
        const double t = alpha - rot_;
        const double raw = std::atan2(ay_ * std::sin(t), ax_ * std::cos(t));
        return t + std::remainder(raw - t, two_pi);
    }

private:
    double ax_;
    double ay_;
    double rot_;
};

struct FourierSpec {
    double a0 = 1.0;
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;
};

struct EllipseSpec {
    double semi_axis_x = 1.0;
    double semi_axis_y = 1.0;
    double rotation = 0.0;
};

struct DomainSpec {
    std::string name;
    std::variant<FourierSpec, EllipseSpec> shape;
};

/// A support function that has passed grid validation.  Only `validate`
/// (and `make_domain`, which throws on failure) can produce one.
class Domain {
public:
    using Shape = std::variant<FourierSupport, EllipseSupport>;

    SupportJet jet(double alpha) const {
        return std::visit([alpha](const auto& s) { return s.jet(alpha); }, shape_);
    }

    const std::string& name() const { return name_; }
    const Shape& shape() const { return shape_; }
    bool is_ellipse() const { return std::holds_alternative<EllipseSupport>(shape_); }

private:
    Domain(std::string name, Shape shape) : name_(std::move(name)), shape_(std::move(shape)) {}

    friend struct DomainFactory;

    std::string name_;
    Shape shape_;
};

inline constexpr std::size_t default_validation_grid = 4096;

struct Violation {
    std::string invariant;
    double alpha = 0.0;
    double value = 0.0;
};

struct SupportMargins {
    double min_p = 0.0;
    double argmin_p = 0.0;
    double min_rho = 0.0;
    double argmin_rho = 0.0;
};

template <SupportFunction S>
SupportMargins support_margins(const S& s, std::size_t grid = default_validation_grid) {
    SupportMargins m{INFINITY, 0.0, INFINITY, 0.0};
    for (std::size_t i = 0; i < grid; ++i) {
        const double alpha = two_pi * static_cast<double>(i) / static_cast<double>(grid);
        const SupportJet j = s.jet(alpha);
        if (!(j.p >= m.min_p)) {
            m.min_p = j.p;
            m.argmin_p = alpha;
        }
        if (!(j.rho() >= m.min_rho)) {
            m.min_rho = j.rho();
            m.argmin_rho = alpha;
        }
    }
    return m;
}

template <SupportFunction S>
std::vector<Violation> support_violations(const S& s, std::size_t grid = default_validation_grid) {
    const SupportMargins m = support_margins(s, grid);
    std::vector<Violation> out;
    if (!(m.min_p > 0.0)) out.push_back({"support p > 0", m.argmin_p, m.min_p});
    if (!(m.min_rho > 0.0)) out.push_back({"curvature radius p'' + p > 0", m.argmin_rho, m.min_rho});
    return out;
}

/// max p - min p on a uniform grid; zero exactly for circles about the origin.
template <SupportFunction S>
double support_spread(const S& s, std::size_t grid = default_validation_grid) {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < grid; ++i) {
        const double p = s.jet(two_pi * static_cast<double>(i) / static_cast<double>(grid)).p;
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    return hi - lo;
}

struct ValidationReport {
    std::optional<Domain> domain;
    SupportMargins margins;
    std::vector<Violation> violations;

    bool ok() const { return domain.has_value(); }
};

struct DomainFactory {
    static ValidationReport validate(const DomainSpec& spec, std::size_t grid) {
        ValidationReport report;
        Domain::Shape shape = [&]() -> Domain::Shape {
            if (const auto* f = std::get_if<FourierSpec>(&spec.shape))
                return FourierSupport(f->a0, f->cos_coeffs, f->sin_coeffs);
            const auto& e = std::get<EllipseSpec>(spec.shape);
            return EllipseSupport(e.semi_axis_x, e.semi_axis_y, e.rotation).canonical();
        }();
        std::visit(
            [&](const auto& s) {
                report.margins = support_margins(s, grid);
                report.violations = support_violations(s, grid);
            },
            shape);
        if (report.violations.empty()) report.domain = Domain(spec.name, std::move(shape));
        return report;
    }
};

/// Grid-checks positivity of p and of p'' + p.  Malformed coefficients
/// (non-finite, non-positive semi-axes) are reported as a violation too.
inline ValidationReport validate(const DomainSpec& spec, std::size_t grid = default_validation_grid) {
    try {
        return DomainFactory::validate(spec, grid);
    } catch (const DomainError& e) {
        ValidationReport r;
        r.violations.push_back({e.what(), 0.0, NAN});
        return r;
    }
}

inline std::string describe(const std::vector<Violation>& violations) {
    std::string msg;
    for (const auto& v : violations) {
        if (!msg.empty()) msg += "; ";
        msg += v.invariant + " violated at alpha=" + std::to_string(v.alpha) +
               " (value " + std::to_string(v.value) + ")";
    }
    return msg;
}

/// Validates and throws DomainError listing every violation.
inline Domain make_domain(const DomainSpec& spec, std::size_t grid = default_validation_grid) {
    auto r = validate(spec, grid);
    if (!r.ok()) throw DomainError("invalid domain '" + spec.name + "': " + describe(r.violations));
    return std::move(*r.domain);
}

inline DomainSpec circle_spec(double radius = 1.0) {
    return {"circle", FourierSpec{radius, {}, {}}};
}

inline DomainSpec ellipse_spec(double ax, double ay, double rotation = 0.0) {
    return {"ellipse", EllipseSpec{ax, ay, rotation}};
}

inline DomainSpec fourier_spec(std::string name, double a0, std::vector<double> c, std::vector<double> s = {}) {
    return {std::move(name), FourierSpec{a0, std::move(c), std::move(s)}};
}

/// Truncated Fourier series of any support function, by trapezoid
/// projection on `samples` equispaced points.
template <SupportFunction S>
FourierSupport fourier_projection(const S& s, std::size_t modes, std::size_t samples = 0) {
    if (samples == 0) samples = std::max<std::size_t>(1024, 8 * modes);
    if (samples < 2 * modes + 1) throw std::invalid_argument("fourier_projection: too few samples");
    std::vector<double> values(samples);
    for (std::size_t j = 0; j < samples; ++j)
        values[j] = s.jet(two_pi * static_cast<double>(j) / static_cast<double>(samples)).p;
    double a0 = 0.0;
    for (double v : values) a0 += v;
    a0 /= static_cast<double>(samples);
    std::vector<double> c(modes), sn(modes);
    for (std::size_t k = 1; k <= modes; ++k) {
        double acc_c = 0.0, acc_s = 0.0;
        for (std::size_t j = 0; j < samples; ++j) {
            const double phase = two_pi * static_cast<double>((k * j) % samples) / static_cast<double>(samples);
            acc_c += values[j] * std::cos(phase);
            acc_s += values[j] * std::sin(phase);
        }
        c[k - 1] = 2.0 * acc_c / static_cast<double>(samples);
        sn[k - 1] = 2.0 * acc_s / static_cast<double>(samples);
    }
    return FourierSupport(a0, std::move(c), std::move(sn));
}

}  // namespace sympb
