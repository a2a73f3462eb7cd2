#include <sympb/geometry.hpp>

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace sympb;

namespace {

Domain f3() { return make_domain(fourier_spec("f3", 1.0, {0.0, 0.0, 0.1})); }

Domain wobbly() {
    return make_domain(fourier_spec("wobbly", 1.3, {0.05, 0.08, -0.02, 0.01}, {0.03, -0.04, 0.015, 0.0, 0.004}));
}

}  // namespace

TEST(PlaneVector, OmegaAntisymmetricAndBilinear) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const PlaneVector a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
        const double l = u(rng);
        EXPECT_NEAR(omega(a, b), -omega(b, a), 1e-13);
        EXPECT_DOUBLE_EQ(omega(a, a), 0.0);
        EXPECT_NEAR(omega(a + l * b, c), omega(a, c) + l * omega(b, c), 1e-12);
        EXPECT_NEAR(omega(c, a + l * b), omega(c, a) + l * omega(c, b), 1e-12);
    }
}

TEST(TangentFrame, UnitTangentAndOrthogonalTurn) {
    for (double a : {0.0, 0.4, 1.7, 3.0, -2.2, 9.0}) {
        const TangentFrame f(a);
        EXPECT_NEAR(f.tangent.norm(), 1.0, 1e-15);
        EXPECT_NEAR(dot(f.tangent, f.turned), 0.0, 1e-15);
        EXPECT_NEAR(f.turned.x, -std::cos(a), 1e-15);
        EXPECT_NEAR(f.turned.y, -std::sin(a), 1e-15);
    }
}

TEST(SupportEval, CircleIsConstant) {
    const auto d = make_domain(circle_spec());
    EXPECT_DOUBLE_EQ(support_eval(d, 0.7, 0), 1.0);
    EXPECT_DOUBLE_EQ(support_eval(d, 0.7, 2), 0.0);
}

TEST(SupportEval, CosineTwoMode) {
    const auto d = make_domain(fourier_spec("c2", 1.0, {0.0, 0.1}));
    EXPECT_NEAR(support_eval(d, 0.0, 0), 1.1, 1e-15);
    EXPECT_NEAR(support_eval(d, 0.0, 2), -0.4, 1e-15);
}

TEST(SupportEval, EllipseClosedForm) {
    const auto d = make_domain(ellipse_spec(2.0, 1.0));
    EXPECT_NEAR(support_eval(d, 0.0, 0), 2.0, 1e-15);
    EXPECT_NEAR(support_eval(d, 0.5 * pi, 0), 1.0, 1e-15);
    for (double a : {0.3, 1.1, 2.5}) {
        EXPECT_NEAR(support_eval(d, a, 0), std::sqrt(4.0 * std::cos(a) * std::cos(a) + std::sin(a) * std::sin(a)),
                    1e-14);
    }
}

TEST(SupportEval, RejectsBadOrder) {
    const auto d = make_domain(circle_spec());
    EXPECT_THROW(support_eval(d, 0.0, 4), std::invalid_argument);
    EXPECT_THROW(support_eval(d, 0.0, -1), std::invalid_argument);
}

TEST(SupportEval, DerivativesMatchFiniteDifferences) {
    const double h = 1e-5;
    for (const auto& d : {wobbly(), make_domain(ellipse_spec(2.0, 1.0, 0.3)), make_domain(ellipse_spec(1.0, 3.0, -1.0))}) {
        for (double a : {0.1, 0.9, 2.0, 4.4, 6.0}) {
            for (int k = 0; k < 3; ++k) {
                const double fd = (support_eval(d, a + h, k) - support_eval(d, a - h, k)) / (2.0 * h);
                EXPECT_NEAR(fd, support_eval(d, a, k + 1), 1e-7) << d.name() << " order " << k << " at " << a;
            }
        }
    }
}

TEST(FourierSupport, LongSeriesStaysAccurate) {
    // 40 modes crosses the re-seeding of the angle recurrence
    std::vector<double> c(40), s(40);
    for (std::size_t k = 0; k < 40; ++k) {
        c[k] = 1e-4 / static_cast<double>((k + 1) * (k + 1));
        s[k] = -2e-4 / static_cast<double>((k + 1) * (k + 1));
    }
    const FourierSupport f(1.0, c, s);
    for (double a : {0.3, 2.9, 5.1}) {
        double p = 1.0, d3 = 0.0;
        for (std::size_t k = 0; k < 40; ++k) {
            const double kk = static_cast<double>(k + 1);
            p += c[k] * std::cos(kk * a) + s[k] * std::sin(kk * a);
            d3 += kk * kk * kk * (c[k] * std::sin(kk * a) - s[k] * std::cos(kk * a));
        }
        EXPECT_NEAR(f.jet(a).p, p, 1e-15);
        EXPECT_NEAR(f.jet(a).d3p, d3, 1e-13);
    }
}

TEST(Validation, AcceptsConvexDomains) {
    EXPECT_TRUE(validate(circle_spec()).ok());
    EXPECT_TRUE(validate(ellipse_spec(5.0, 0.2, 1.0)).ok());
    EXPECT_TRUE(validate(fourier_spec("f3", 1.0, {0.0, 0.0, 0.1})).ok());
}

TEST(Validation, RejectsNegativeCurvatureRadius) {
    // 1 + 0.2 cos 3a has p'' + p = 1 - 1.6 cos 3a < 0 near a = 0
    const auto r = validate(fourier_spec("dented", 1.0, {0.0, 0.0, 0.2}));
    ASSERT_FALSE(r.ok());
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_NE(r.violations[0].invariant.find("curvature"), std::string::npos);
    EXPECT_NEAR(r.margins.min_rho, -0.6, 1e-12);
    EXPECT_THROW(make_domain(fourier_spec("dented", 1.0, {0.0, 0.0, 0.2})), DomainError);
}

TEST(Validation, RejectsNonPositiveSupport) {
    // translated far enough that the origin leaves the body
    const auto r = validate(fourier_spec("shifted", 1.0, {1.5}));
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.violations[0].invariant, "support p > 0");
}

TEST(Validation, RejectsMalformedCoefficients) {
    EXPECT_FALSE(validate(ellipse_spec(-1.0, 1.0)).ok());
    EXPECT_FALSE(validate(fourier_spec("nan", 1.0, {NAN})).ok());
}

TEST(BoundaryPoint, TangentLineAtSupportDistance) {
    const auto d = wobbly();
    for (double a : {0.0, 0.8, 2.2, 3.9, 5.5}) {
        const TangentFrame f(a);
        const PlaneVector g = boundary_point(d, a);
        // outward normal is -J e
        EXPECT_NEAR(dot(g, PlaneVector{} - f.turned), support_eval(d, a, 0), 1e-14);
        EXPECT_NEAR(omega(boundary_derivatives(d, a).first, f.tangent), 0.0, 1e-14);
        EXPECT_GT(dot(boundary_derivatives(d, a).first, f.tangent), 0.0);
    }
}

TEST(BoundaryPoint, CircleAndEllipseExamples) {
    const auto c = make_domain(circle_spec());
    const PlaneVector g = boundary_point(c, 0.0);
    EXPECT_NEAR(g.x, 1.0, 1e-15);
    EXPECT_NEAR(g.y, 0.0, 1e-15);
    const auto e = make_domain(ellipse_spec(2.0, 1.0));
    const PlaneVector top = boundary_point(e, 0.5 * pi);
    EXPECT_NEAR(top.x, 0.0, 1e-15);
    EXPECT_NEAR(top.y, 1.0, 1e-15);
    const PlaneVector right = boundary_point(e, 0.0);
    EXPECT_NEAR(right.x, 2.0, 1e-15);
    EXPECT_NEAR(right.y, 0.0, 1e-15);
}

TEST(BoundaryPoint, EllipseCircleParameterization) {
    const EllipseSupport e(2.0, 1.0, 0.4);
    for (double u : {0.0, 0.5, 1.9, 3.3, 5.0, 7.1}) {
        const double a = e.angle_of_circle_param(u);
        const PlaneVector g = boundary_point(e, a);
        const double c = std::cos(0.4), s = std::sin(0.4);
        const PlaneVector want{c * 2.0 * std::cos(u) - s * std::sin(u), s * 2.0 * std::cos(u) + c * std::sin(u)};
        EXPECT_NEAR(g.x, want.x, 1e-14);
        EXPECT_NEAR(g.y, want.y, 1e-14);
        EXPECT_NEAR(e.circle_param_of_angle(a), u, 1e-13);
    }
}

TEST(BoundaryDerivatives, MatchFiniteDifferences) {
    const auto d = wobbly();
    const double h = 1e-5;
    for (double a : {0.2, 1.3, 3.7, 5.9}) {
        const auto bd = boundary_derivatives(d, a);
        const PlaneVector fd1 = (1.0 / (2.0 * h)) * (boundary_point(d, a + h) - boundary_point(d, a - h));
        const PlaneVector fd2 = (1.0 / (2.0 * h)) * (boundary_derivatives(d, a + h).first -
                                                     boundary_derivatives(d, a - h).first);
        EXPECT_NEAR(fd1.x, bd.first.x, 1e-8);
        EXPECT_NEAR(fd1.y, bd.first.y, 1e-8);
        EXPECT_NEAR(fd2.x, bd.second.x, 1e-8);
        EXPECT_NEAR(fd2.y, bd.second.y, 1e-8);
    }
}

TEST(CurvatureRadius, CircleAndThrowOnNonConvex) {
    EXPECT_DOUBLE_EQ(curvature_radius(make_domain(circle_spec(2.5)), 1.0), 2.5);
    const FourierSupport dented(1.0, {0.0, 0.0, 0.2}, {});
    EXPECT_THROW(curvature_radius(dented, 0.0), DomainError);
}

TEST(PerimeterArea, ClosedForms) {
    const auto c = make_domain(circle_spec(1.5));
    EXPECT_NEAR(perimeter(c), 3.0 * pi, 1e-13);
    EXPECT_NEAR(area(c), 2.25 * pi, 1e-13);
    const auto e = make_domain(ellipse_spec(2.0, 1.0, 0.7));
    EXPECT_NEAR(area(e), 2.0 * pi, 1e-12);
    EXPECT_NEAR(perimeter(e), 9.688448220547675, 1e-11);
    // area of a0 + c_k cos k a: pi (a0^2 - sum (k^2 - 1) c_k^2 / 2)
    EXPECT_NEAR(area(f3()), pi * (1.0 - 0.5 * 8.0 * 0.01), 1e-13);
    EXPECT_NEAR(perimeter(f3()), two_pi, 1e-13);
}

TEST(ConjugateParam, AntiparallelTangents) {
    const auto d = wobbly();
    for (double a : {0.0, 1.0, 2.5, 4.0}) {
        const double b = conjugate_param(a);
        const auto ta = boundary_derivatives(d, a).first;
        const auto tb = boundary_derivatives(d, b).first;
        EXPECT_NEAR(omega(ta, tb), 0.0, 1e-13);
        EXPECT_LT(dot(ta, tb), 0.0);
        EXPECT_GT(ta.norm(), 0.0);
        // the chord to the conjugate point crosses the tangent direction
        const PlaneVector chord = boundary_point(d, b) - boundary_point(d, a);
        EXPECT_GT(std::abs(omega(ta, chord)), 1e-3);
    }
}

TEST(FourierProjection, ReproducesFourierDomains) {
    const auto f = fourier_projection(FourierSupport(1.3, {0.05, 0.08}, {0.0, -0.04}), 4);
    EXPECT_NEAR(f.mean(), 1.3, 1e-14);
    EXPECT_NEAR(f.cos_coeffs()[1], 0.08, 1e-14);
    EXPECT_NEAR(f.sin_coeffs()[1], -0.04, 1e-14);
    EXPECT_NEAR(f.cos_coeffs()[3], 0.0, 1e-14);
}

TEST(FourierProjection, EllipseAt64Modes) {
    const EllipseSupport e(2.0, 1.0, 0.3);
    const auto f = fourier_projection(e, 64);
    for (double a : {0.0, 0.7, 2.1, 4.0, 5.8}) {
        EXPECT_NEAR(f.jet(a).p, e.jet(a).p, 1e-10);
    }
}
