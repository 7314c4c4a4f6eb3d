#include <gtest/gtest.h>

#include <algorithm>

#include "annulus_lab/catalog.hpp"
#include "annulus_lab/trace.hpp"
#include "oracles.hpp"

using namespace annulus_lab;

namespace {

JordanPolygon unit_square() { return JordanPolygon({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}); }

}  // namespace

TEST(AnnularDomain, BoundedAnnulusMembership) {
    auto d = make_annulus(1, 2);
    EXPECT_TRUE(d.contains({1.5, 0}));
    EXPECT_FALSE(d.contains({0.5, 0}));
    EXPECT_FALSE(d.contains({1.0, 0}));
    EXPECT_FALSE(d.punctured());
    EXPECT_FALSE(d.unbounded());
    EXPECT_DOUBLE_EQ(d.trunc_inner(), 1.0);
    EXPECT_DOUBLE_EQ(d.trunc_outer(), 2.0);
}

TEST(AnnularDomain, PuncturedDiskExcludesOrigin) {
    auto d = make_annulus(0, 1);
    EXPECT_TRUE(d.punctured());
    EXPECT_FALSE(d.contains({0, 0}));
    EXPECT_TRUE(d.contains({1e-6, 0}));
    EXPECT_GT(d.trunc_inner(), 0.0);
}

TEST(AnnularDomain, ExteriorBandUsesTruncation) {
    auto d = make_annulus(1, kInf, Truncation{std::nullopt, 50.0});
    EXPECT_TRUE(d.unbounded());
    EXPECT_DOUBLE_EQ(d.trunc_inner(), 1.0);
    EXPECT_DOUBLE_EQ(d.trunc_outer(), 50.0);
    EXPECT_TRUE(d.contains({1e6, 0}));
}

TEST(AnnularDomain, RejectsInvalidRadii) {
    EXPECT_THROW(make_annulus(2, 1), DomainError);
    EXPECT_THROW(make_annulus(-1, 1), DomainError);
    EXPECT_THROW(make_annulus(1, 2, Truncation{0.5, std::nullopt}), DomainError);
    EXPECT_THROW(make_annulus(1, 2, Truncation{std::nullopt, 3.0}), DomainError);
    EXPECT_THROW(make_annulus(1, 2, Truncation{1.8, 1.5}), DomainError);
}

TEST(AnnularDomain, ContainsMatchesRadiusTestOnRandomPoints) {
    oracle::Rng rng(11);
    auto d = make_annulus(0.7, 2.3);
    for (int k = 0; k < 1000; ++k) {
        Vec2 x = rng.in_box(-3, 3);
        double r = std::sqrt(x.x * x.x + x.y * x.y);
        EXPECT_EQ(d.contains(x), 0.7 < r && r < 2.3);
    }
}

TEST(PolarGrid, UniformRadiiOnModerateBand) {
    auto g = polar_grid(make_annulus(1, 2), 5, 8);
    std::vector<double> expect{1, 1.25, 1.5, 1.75, 2};
    ASSERT_EQ(g.n_r(), 5u);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(g.radii()[i], expect[i], 1e-15);
    EXPECT_NEAR(g.dtheta(), kTwoPi / 8, 1e-15);
    Vec2 p = g.node(2, 2);
    EXPECT_NEAR(p.x, 0.0, 1e-15);
    EXPECT_NEAR(p.y, 1.5, 1e-15);
}

TEST(PolarGrid, GeometricRadiiOnWideBand) {
    auto g = polar_grid(make_annulus(0, 1, Truncation{0.001, std::nullopt}), 7, 16);
    double q = std::pow(1000.0, 1.0 / 6.0);
    EXPECT_TRUE(g.geometric());
    for (std::size_t i = 1; i < g.n_r(); ++i) EXPECT_NEAR(g.radii()[i] / g.radii()[i - 1], q, 1e-12);
    EXPECT_NEAR(g.r_min(), 0.001, 1e-18);
    EXPECT_NEAR(g.r_max(), 1.0, 1e-15);
}

TEST(PolarGrid, RejectsTooFewAngles) { EXPECT_THROW(polar_grid(make_annulus(1, 2), 5, 3), DomainError); }

TEST(CircleSamples, QuarterPoints) {
    auto pts = circle_samples(1, 4);
    std::vector<Vec2> expect{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(pts[k].x, expect[k].x, 1e-15);
        EXPECT_NEAR(pts[k].y, expect[k].y, 1e-15);
    }
}

TEST(CircleSamples, RejectsTooFewPoints) { EXPECT_THROW(circle_samples(2, 1), PreconditionError); }

TEST(CircleSamples, PointsLieOnTheCircle) {
    oracle::Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        double r = rng.uniform(1e-3, 1e3);
        std::size_t n = 3 + rng.next() % 500;
        for (Vec2 p : circle_samples(r, n)) EXPECT_LE(std::abs(norm(p) - r), 1e-12 * r);
    }
    for (Vec2 p : circle_samples(0.5, 8)) EXPECT_NEAR(norm(p), 0.5, 1e-16);
}

TEST(Winding, SquareAboutCentreAndOutside) {
    auto sq = unit_square();
    EXPECT_EQ(winding_number(sq, {0, 0}), 1);
    EXPECT_EQ(winding_number(sq, {10, 0}), 0);
    EXPECT_EQ(winding_number(sq.reversed(), {0, 0}), -1);
    EXPECT_THROW(winding_number(sq, {0.5, 0.0}), BoundaryAmbiguityError);
    EXPECT_EQ(locate(sq, {0.5, 0.0}), PointLocation::boundary);
}

TEST(Winding, TracedRigidStreamlineSurroundsOrigin) {
    auto s = trace_streamline(catalog("rigid"), {1.5, 0});
    ASSERT_TRUE(s.closed);
    EXPECT_EQ(winding_number(streamline_polygon(s), {0, 0}), 1);
}

TEST(Winding, InvariantUnderRelabelingAndNegatedUnderReversal) {
    oracle::Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        // Random star-shaped polygon about the origin.
        std::size_t n = 5 + rng.next() % 40;
        std::vector<Vec2> v;
        for (std::size_t k = 0; k < n; ++k) {
            double t = kTwoPi * (k + rng.uniform(0.1, 0.9)) / n;
            v.push_back(polar_point(rng.uniform(0.5, 2.0), t));
        }
        JordanPolygon p(v);
        std::vector<Vec2> rot(v.begin() + static_cast<long>(n / 3), v.end());
        rot.insert(rot.end(), v.begin(), v.begin() + static_cast<long>(n / 3));
        JordanPolygon q(rot);
        for (int k = 0; k < 20; ++k) {
            Vec2 x = rng.in_box(-2.5, 2.5);
            if (p.boundary_distance(x) < 1e-9) continue;
            int w = winding_number(p, x);
            EXPECT_EQ(winding_number(q, x), w);
            EXPECT_EQ(winding_number(p.reversed(), x), -w);
            EXPECT_EQ(w != 0, oracle::inside_polygon(v, x));
        }
        EXPECT_EQ(winding_number(p, {0, 0}), 1);
    }
}

TEST(JordanPolygon, SimplicityAndDegeneracy) {
    EXPECT_TRUE(unit_square().is_simple());
    JordanPolygon bowtie({{0, 0}, {2, 2}, {2, 0}, {0, 1}});
    EXPECT_FALSE(bowtie.is_simple());
    EXPECT_THROW(JordanPolygon({{0, 0}, {1, 1}, {2, 2}}), DomainError);
    EXPECT_THROW(JordanPolygon({{0, 0}, {1, 1}}), DomainError);
}
