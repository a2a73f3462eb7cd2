#include <sympb/variational.hpp>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace sympb;
using sympb::testkit::shoot_conjugate;

namespace {

Domain f3() { return make_domain(fourier_spec("f3", 1.0, {0.0, 0.0, 0.1})); }

Eigen::MatrixXd dense(const SegmentHessian& h) {
    const auto m = static_cast<Eigen::Index>(h.dim());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) H(i, i) = h.diag[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < m; ++i) H(i, i + 1) = H(i + 1, i) = h.off[static_cast<std::size_t>(i)];
    return H;
}

/// Action of a segment with free interior angles.
double action(const Domain& d, const std::vector<double>& a) {
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < a.size(); ++k) s += gen_fn(d, a[k], a[k + 1]);
    return s;
}

}  // namespace

TEST(JacobiField, CircleFieldIsLinear) {
    // D = -2 sin g and E = sin g, so xi_{n+1} = 2 xi_n - xi_{n-1}
    const auto c = make_domain(circle_spec());
    const auto cfg = orbit(c, PhasePoint(0.0, 0.9), 30);
    const auto f = jacobi_propagate(c, cfg, 3, 25, 0.0, 1.0);
    ASSERT_EQ(f.first, 3u);
    ASSERT_EQ(f.last(), 25u);
    for (std::size_t n = 3; n <= 25; ++n) EXPECT_NEAR(f.at(n), static_cast<double>(n - 3), 1e-8);
}

TEST(JacobiField, SatisfiesRecurrence) {
    const auto d = f3();
    const auto cfg = orbit(d, PhasePoint(0.2, 1.1), 40);
    const auto f = jacobi_propagate(d, cfg, 5, 35, 0.3, -0.7);
    for (std::size_t n = 6; n < 35; ++n) {
        const auto a = gen_derivs(d, cfg.alphas[n - 1], cfg.alphas[n]);
        const auto b = gen_derivs(d, cfg.alphas[n], cfg.alphas[n + 1]);
        const double r = a.L12 * f.at(n - 1) + (a.L22 + b.L11) * f.at(n) + b.L12 * f.at(n + 1);
        EXPECT_NEAR(r, 0.0, 1e-10 * std::max(1.0, f.max_abs()));
    }
}

TEST(JacobiField, LinearInSeeds) {
    const auto d = f3();
    const auto cfg = orbit(d, PhasePoint(0.2, 1.1), 30);
    const auto f1 = jacobi_propagate(d, cfg, 2, 28, 1.0, 0.0);
    const auto f2 = jacobi_propagate(d, cfg, 2, 28, 0.0, 1.0);
    const auto f = jacobi_propagate(d, cfg, 2, 28, 2.0, -3.0);
    for (std::size_t n = 2; n <= 28; ++n) EXPECT_NEAR(f.at(n), 2.0 * f1.at(n) - 3.0 * f2.at(n), 1e-9 * f.max_abs());
}

TEST(JacobiField, RejectsNonStationaryConfiguration) {
    const auto c = make_domain(circle_spec());
    const auto bent = make_configuration(c, {0.0, 0.5, 1.2, 1.7});
    EXPECT_THROW(jacobi_propagate(c, bent, 0, 3, 0.0, 1.0), std::invalid_argument);
    const auto cfg = orbit(c, PhasePoint(0.0, 0.5), 5);
    EXPECT_THROW(jacobi_propagate(c, cfg, 0, 10, 0.0, 1.0), std::invalid_argument);
}

TEST(ConjugateTest, CircleNeverConjugate) {
    const auto c = make_domain(circle_spec());
    const auto cfg = orbit(c, PhasePoint(0.0, 1.3), 60);
    for (std::size_t N = 2; N <= 60; ++N) {
        const auto r = conjugate_test(c, cfg, 0, N);
        EXPECT_FALSE(r.conjugate);
        EXPECT_NEAR(r.witness.values.back(), static_cast<double>(N), 1e-7);
    }
}

TEST(ConjugateTest, ArgumentErrors) {
    const auto c = make_domain(circle_spec());
    const auto cfg = orbit(c, PhasePoint(0.0, 1.3), 10);
    EXPECT_THROW(conjugate_test(c, cfg, 3, 4), std::invalid_argument);
    EXPECT_THROW(conjugate_test(c, cfg, 3, 3), std::invalid_argument);
    EXPECT_THROW(conjugate_test(c, cfg, 0, 5, 0.0), std::invalid_argument);
}

TEST(ConjugateTest, SlopeDoesNotChangeVerdict) {
    const auto d = f3();
    const auto shot = shoot_conjugate(d, 0.3, 0.3, 0.45, 14);
    ASSERT_TRUE(shot.has_value());
    for (double slope : {1.0, -2.0, 1e-3, 1e4}) {
        EXPECT_TRUE(conjugate_test(d, shot->cfg, 0, 14, slope).conjugate);
        EXPECT_FALSE(conjugate_test(d, shot->cfg, 0, 13, slope).conjugate);
    }
}

TEST(ConjugateTest, ShotSegmentIsConjugate) {
    const auto d = f3();
    const auto shot = shoot_conjugate(d, 0.3, 0.3, 0.45, 14);
    ASSERT_TRUE(shot.has_value());
    const auto r = conjugate_test(d, shot->cfg, 0, 14);
    EXPECT_TRUE(r.conjugate);
    EXPECT_LT(std::abs(r.witness.values.back()), 1e-10 * r.witness.max_abs());
    EXPECT_LT(shot->cfg.max_residual(), 1e-11);
}

TEST(ConjugateScan, CircleAndEllipseHaveNoPairs) {
    const auto c = make_domain(circle_spec());
    EXPECT_TRUE(conjugate_scan(c, orbit(c, PhasePoint(0.0, 0.8), 300), 200).empty());
    const auto e = make_domain(ellipse_spec(2.0, 1.0, 0.3));
    for (double gap : {0.1, 0.9, 2.0, 3.0}) {
        EXPECT_TRUE(conjugate_scan(e, orbit(e, PhasePoint(0.5, 0.5 + gap), 300), 200).empty()) << gap;
    }
}

TEST(ConjugateScan, FindsShotPair) {
    const auto d = f3();
    const auto shot = shoot_conjugate(d, 0.3, 0.3, 0.45, 14);
    ASSERT_TRUE(shot.has_value());
    const auto pairs = conjugate_scan(d, shot->cfg, 20);
    EXPECT_NE(std::find(pairs.begin(), pairs.end(), std::make_pair<std::size_t, std::size_t>(0, 14)), pairs.end());
}

TEST(ConjugateScan, ShortConfigurations) {
    const auto c = make_domain(circle_spec());
    EXPECT_TRUE(conjugate_scan(c, orbit(c, PhasePoint(0.0, 0.8), 0), 10).empty());
}

TEST(SegmentHessian, MatchesFiniteDifferenceActionHessian) {
    const auto d = f3();
    const auto cfg = orbit(d, PhasePoint(0.4, 1.4), 12);
    const std::size_t M = 2, N = 9;
    const auto h = segment_hessian(d, cfg, M, N);
    ASSERT_EQ(h.dim(), N - M - 1);
    std::vector<double> a(cfg.alphas.begin() + M, cfg.alphas.begin() + N + 1);
    const double eps = 1e-4;
    const auto H = dense(h);
    for (std::size_t i = 1; i + 1 < a.size(); ++i) {
        for (std::size_t j = 1; j + 1 < a.size(); ++j) {
            auto at = [&](double di, double dj) {
                auto b = a;
                b[i] += di;
                b[j] += dj;
                return action(d, b);
            };
            const double fd = (at(eps, eps) - at(eps, -eps) - at(-eps, eps) + at(-eps, -eps)) / (4 * eps * eps);
            EXPECT_NEAR(H(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1)), fd, 1e-6);
        }
    }
    // first variation vanishes on the orbit; a smaller step keeps truncation out
    const double h1 = 1e-6;
    for (std::size_t i = 1; i + 1 < a.size(); ++i) {
        auto b = a, c = a;
        b[i] += h1;
        c[i] -= h1;
        EXPECT_NEAR((action(d, b) - action(d, c)) / (2 * h1), 0.0, 1e-8);
    }
}

TEST(SegmentHessian, ContinuantMatchesDenseDeterminant) {
    const auto d = make_domain(fourier_spec("w", 1.2, {0.02, 0.05, 0.01}, {0.0, 0.03, -0.02, 0.005}));
    const auto cfg = orbit(d, PhasePoint(0.1, 2.2), 40);
    for (std::size_t N : {2u, 3u, 8u, 20u, 40u}) {
        const auto h = segment_hessian(d, cfg, 0, N);
        const double dense_det = dense(h).determinant();
        EXPECT_NEAR(h.determinant(), dense_det, 1e-10 * std::max(1.0, std::abs(dense_det)));
    }
}

TEST(SegmentHessian, TerminalFieldProportionality) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> gap(0.2, 2.9);
    const auto d = f3();
    for (int i = 0; i < 30; ++i) {
        const auto cfg = orbit(d, PhasePoint(0.0, gap(rng)), 30);
        const std::size_t M = 3, N = 5 + static_cast<std::size_t>(i % 20);
        const auto h = segment_hessian(d, cfg, M, N);
        const auto f = conjugate_test(d, cfg, M, N);
        const double sign = ((N - M - 1) % 2 == 0) ? 1.0 : -1.0;
        EXPECT_NEAR(sign * h.reduced_determinant(), f.witness.values.back(), 1e-8 * f.witness.max_abs());
    }
}

TEST(SegmentHessian, SingularExactlyAtConjugatePairs) {
    const auto d = f3();
    const auto shot = shoot_conjugate(d, 0.3, 0.3, 0.45, 14);
    ASSERT_TRUE(shot.has_value());
    const auto h = segment_hessian(d, shot->cfg, 0, 14);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense(h));
    const auto sv = svd.singularValues();
    EXPECT_LT(sv(sv.size() - 1) / sv(0), 1e-10);
    // a non-conjugate neighbour is well conditioned
    const auto h2 = segment_hessian(d, shot->cfg, 0, 12);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd2(dense(h2));
    EXPECT_GT(svd2.singularValues()(svd2.singularValues().size() - 1) / svd2.singularValues()(0), 1e-6);
}

TEST(SegmentHessian, NeedsInteriorPoint) {
    const auto c = make_domain(circle_spec());
    const auto cfg = orbit(c, PhasePoint(0.0, 1.0), 5);
    EXPECT_THROW(segment_hessian(c, cfg, 2, 3), std::invalid_argument);
}

TEST(ScaleCovariance, PartialsScaleQuadraticallyVerdictUnchanged) {
    const FourierSupport base(1.0, {0.0, 0.0, 0.1}, {});
    const double lambda = 2.7;
    const FourierSupport big = base.scaled(lambda);
    const auto g = gen_derivs(base, 0.3, 1.5);
    const auto G = gen_derivs(big, 0.3, 1.5);
    EXPECT_NEAR(G.L11, lambda * lambda * g.L11, 1e-13);
    EXPECT_NEAR(G.L12, lambda * lambda * g.L12, 1e-13);
    EXPECT_NEAR(G.L22, lambda * lambda * g.L22, 1e-13);

    const auto shot = shoot_conjugate(base, 0.3, 0.3, 0.45, 14);
    ASSERT_TRUE(shot.has_value());
    // orbits are scale invariant in tangent-angle coordinates
    const auto cfg = orbit(big, PhasePoint(0.3, 0.3 + shot->gap), 13);
    for (std::size_t N = 2; N <= 14; ++N)
        EXPECT_EQ(conjugate_test(base, shot->cfg, 0, N).conjugate, conjugate_test(big, cfg, 0, N).conjugate) << N;
}
