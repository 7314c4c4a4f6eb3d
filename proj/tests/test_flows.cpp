#include <gtest/gtest.h>

#include "annulus_lab/catalog.hpp"
#include "annulus_lab/io.hpp"
#include "oracles.hpp"

using namespace annulus_lab;

namespace {

struct Entry {
    std::string name;
    Params params;
};

/// Every catalog flow, with truncations that keep the band away from the
/// puncture where double rounding of |grad p| ~ r^-3 dominates.
std::vector<Entry> catalog_suite() {
    return {{"circular", {{"power", 2.0}, {"scale", 0.5}}},
            {"rigid", {}},
            {"log", {{"trunc_inner", 0.01}}},
            {"inverse_square", {{"trunc_outer", 50.0}}},
            {"quartic", {{"R", 1.0}, {"trunc_inner", 0.01}}},
            {"shifted", {{"a", 1.0}}},
            {"ext_counterexample", {{"a", 1.0}, {"trunc_outer", 20.0}}},
            {"punct_counterexample", {{"b", 1.0}, {"trunc_inner", 0.1}}},
            {"eigenflow_m1", {{"a", 1.0}, {"b", 2.0}}},
            {"eigenflow_m0", {{"a", 1.0}, {"b", 2.0}}}};
}

void expect_vec(Vec2 got, Vec2 want, double tol) {
    EXPECT_NEAR(got.x, want.x, tol);
    EXPECT_NEAR(got.y, want.y, tol);
}

double frob(const Mat2& m) { return std::sqrt(m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22); }

}  // namespace

TEST(Catalog, PointValues) {
    expect_vec(catalog("rigid")({1, 0}), {0, 1}, 1e-15);
    expect_vec(catalog("ext_counterexample", {{"a", 1.0}})({1, 0}), {0, 6}, 1e-14);
    expect_vec(catalog("quartic", {{"R", 1.0}})({0.5, 0}), {0, -0.5}, 1e-15);
    expect_vec(catalog("log")({0.5, 0}), {0, 2}, 1e-14);
    expect_vec(catalog("inverse_square")({2, 0}), {0, 0.25}, 1e-15);
    expect_vec(catalog("shifted", {{"a", 1.0}})({0, 1.5}), {-0.5, 0}, 1e-15);
}

TEST(Catalog, ExteriorCounterexampleMatchesPolarFormula) {
    // v = (4r/a^2 + (1/a + a/r^2) cos t) e_t + (1/a - a/r^2) sin t e_r
    const double a = 1.5;
    auto f = catalog("ext_counterexample", {{"a", a}});
    oracle::Rng rng(2);
    for (int k = 0; k < 200; ++k) {
        Vec2 x = rng.in_band(a, 10 * a);
        double r = norm(x), t = std::atan2(x.y, x.x);
        double vt = 4 * r / (a * a) + (1 / a + a / (r * r)) * std::cos(t);
        double vr = (1 / a - a / (r * r)) * std::sin(t);
        Vec2 want = vr * unit_radial(x) + vt * unit_angular(x);
        expect_vec(f(x), want, 1e-12 * std::max(1.0, norm(want)));
    }
}

TEST(Catalog, ParameterValidation) {
    EXPECT_THROW(catalog("nonsense"), CatalogError);
    EXPECT_THROW(catalog("quartic"), CatalogError);
    EXPECT_THROW(catalog("quartic", {{"R", -1.0}}), CatalogError);
    EXPECT_THROW(catalog("rigid", {{"typo", 1.0}}), CatalogError);
    EXPECT_THROW(catalog("shifted"), CatalogError);
    EXPECT_NO_THROW(catalog("rigid", {{"a", 2.0}, {"b", 3.0}, {"trunc_outer", 2.5}}));
}

TEST(Vorticity, CatalogValues) {
    auto ext = catalog("ext_counterexample", {{"a", 1.0}});
    auto ext2 = catalog("ext_counterexample", {{"a", 2.0}});
    auto inv = catalog("inverse_square");
    auto lg = catalog("log");
    oracle::Rng rng(4);
    for (int k = 0; k < 100; ++k) {
        EXPECT_NEAR(vorticity_at(ext, rng.in_band(1, 10)), 8.0, 1e-8);
        EXPECT_NEAR(vorticity_at(ext2, rng.in_band(2, 20)), 2.0, 1e-8);
        EXPECT_NEAR(vorticity_at(lg, rng.in_band(0.01, 1)), 0.0, 1e-8);
    }
    EXPECT_NEAR(vorticity_at(inv, {2, 0}), -0.125, 1e-12);
    EXPECT_NEAR(vorticity_at(inv, polar_point(2, 1.0)), -0.125, 1e-12);
}

TEST(Divergence, NonSolenoidalExpressionField) {
    auto f = expression_field("r", "0", make_annulus(1, 2));
    EXPECT_NEAR(divergence_at(f, {1.3, 0.4}), 2.0, 1e-8);
}

TEST(Divergence, GridSampledRigidFlow) {
    auto rigid = catalog("rigid");
    auto g = grid_sampled_field(rigid, polar_grid(rigid.domain, 33, 64));
    EXPECT_EQ(g.kind, FieldKind::grid_sampled);
    oracle::Rng rng(8);
    for (int k = 0; k < 100; ++k) {
        Vec2 x = rng.in_band(1.05, 1.95);
        EXPECT_LE(std::abs(divergence_at(g, x)), 1e-6);
        EXPECT_LE(norm(g(x) - rigid(x)), 1e-3);
    }
}

TEST(Divergence, GridSampledErrorIsSecondOrder) {
    auto f = catalog("eigenflow_m1", {{"a", 1.0}, {"b", 2.0}});
    auto err = [&](std::size_t nr) {
        auto g = grid_sampled_field(f, polar_grid(f.domain, nr, 4 * (nr - 1)));
        double e = 0;
        oracle::Rng rng(9);
        for (int k = 0; k < 400; ++k) {
            Vec2 x = rng.in_band(1.1, 1.9);
            e = std::max(e, norm(g(x) - f(x)));
        }
        return e;
    };
    double e1 = err(17), e2 = err(33);
    EXPECT_GE(e1 / e2, 3.0);
}

TEST(EulerResidual, RigidAndLog) {
    auto rigid = catalog("rigid");
    auto lg = catalog("log", {{"trunc_inner", 0.01}});
    oracle::Rng rng(12);
    for (int k = 0; k < 100; ++k) {
        EXPECT_LE(norm(euler_residual(rigid, rng.in_band(1, 2))), 1e-8);
        EXPECT_LE(norm(euler_residual(lg, rng.in_band(0.01, 1))), 1e-8);
    }
}

TEST(EulerResidual, WrongPressureLeavesCentripetalTerm) {
    auto rigid = catalog("rigid");
    rigid.pressure.reset();
    rigid.pressure_gradient = [](Vec2) { return Vec2{}; };
    Vec2 x{1.2, -0.7};
    EXPECT_NEAR(norm(euler_residual(rigid, x)), norm(x), 1e-12);
}

TEST(EulerResidual, StatedPressuresMatchClosedForms) {
    // p = |x|^2/2, -1/(2|x|^2), (8/3)|x|^6 and for inverse_square -1/(4|x|^4).
    struct Case {
        VectorField f;
        std::function<double(double)> p;
        double lo, hi;
    };
    std::vector<Case> cases{{catalog("rigid"), [](double r) { return r * r / 2; }, 1, 2},
                            {catalog("log"), [](double r) { return -1 / (2 * r * r); }, 0.1, 1},
                            {catalog("quartic", {{"R", 1.0}}), [](double r) { return 8.0 / 3 * std::pow(r, 6); }, 0.1, 1},
                            {catalog("inverse_square"), [](double r) { return -0.25 / std::pow(r, 4); }, 1, 10}};
    for (auto& c : cases) {
        ASSERT_TRUE(c.f.pressure.has_value()) << c.f.name;
        for (double r : {c.lo, 0.5 * (c.lo + c.hi), c.hi}) {
            double dp = (*c.f.pressure)(polar_point(r, 0.3)) - (*c.f.pressure)(polar_point(c.lo, 1.1));
            EXPECT_NEAR(dp, c.p(r) - c.p(c.lo), 1e-10 * std::max(1.0, std::abs(c.p(c.lo)))) << c.f.name;
        }
    }
}

TEST(BernoulliPressure, ZeroProfileUnitSpeed) {
    auto prof = VorticityProfile::from_function([](double) { return 0.0; }, -1, 1);
    EXPECT_DOUBLE_EQ(bernoulli_pressure(0.3, 1.0, prof), -0.5);
}

TEST(BernoulliPressure, RigidFlowGradientMatches) {
    // u = r^2/2 has Laplacian 2, so Lap u + f(u) = 0 with f = -2.
    auto prof = VorticityProfile::from_function([](double) { return -2.0; }, 0.0, 4.0);
    auto p = [&](double r) { return bernoulli_pressure(r * r / 2, r, prof); };
    for (double r : {1.1, 1.4, 1.9}) EXPECT_NEAR(p(r) - p(1.0), (r * r - 1) / 2, 1e-12);
}

TEST(BernoulliPressure, QuarticFlowGradientMatches) {
    // u = 1 - r^4, |v| = 4 r^3, f(s) = 16 sqrt(1 - s).
    auto prof = VorticityProfile::from_function([](double s) { return 16 * std::sqrt(std::max(0.0, 1 - s)); }, 0.0, 1.0, 8193);
    auto p = [&](double r) { return bernoulli_pressure(1 - std::pow(r, 4), 4 * r * r * r, prof); };
    for (double r : {0.2, 0.5, 0.8}) EXPECT_NEAR(p(r) - p(1.0), 8.0 / 3 * (std::pow(r, 6) - 1), 1e-6);
}

TEST(CircularField, ProfilesReproduceCatalogVorticity) {
    auto rig = circular_field(parse_profile("r"), make_annulus(1, 2));
    auto lg = circular_field(parse_profile("1/r"), make_annulus(0.5, 2));
    auto sh = circular_field(parse_profile("r - 1"), make_annulus(1, 2));
    oracle::Rng rng(14);
    for (int k = 0; k < 50; ++k) {
        EXPECT_NEAR(vorticity_at(rig.field, rng.in_band(1, 2)), 2.0, 1e-8);
        EXPECT_NEAR(vorticity_at(lg.field, rng.in_band(0.5, 2)), 0.0, 1e-8);
    }
    EXPECT_EQ(rig.sign.sign, 1);
    EXPECT_EQ(sh.sign.sign, 0);
    for (Vec2 x : circle_samples(1.0, 64)) EXPECT_EQ(norm(sh.field(x)), 0.0);
}

TEST(Invariants, DivergenceFreeEverywhere) {
    for (const auto& e : catalog_suite()) {
        auto f = catalog(e.name, e.params);
        oracle::Rng rng(100);
        for (int k = 0; k < 1000; ++k) {
            Vec2 x = rng.in_band(f.domain.trunc_inner(), f.domain.trunc_outer());
            double scale = std::max(1.0, frob(jacobian_at(f, x)));
            ASSERT_LE(std::abs(divergence_at(f, x)), 1e-8 * scale) << e.name << " at " << x.x << "," << x.y;
        }
    }
}

TEST(Invariants, TangencyOnFixedCircles) {
    for (const auto& e : catalog_suite()) {
        auto f = catalog(e.name, e.params);
        const auto& d = f.domain;
        std::vector<double> walls;
        if (d.has_inner_wall() && d.trunc_inner() == d.inner_radius()) walls.push_back(d.inner_radius());
        if (d.has_outer_wall() && d.trunc_outer() == d.outer_radius()) walls.push_back(d.outer_radius());
        EXPECT_FALSE(walls.empty()) << e.name;
        for (double R : walls)
            for (Vec2 x : circle_samples(R, 720))
                ASSERT_LE(std::abs(radial_velocity(f, x)), 1e-10 * std::max(1.0, norm(f(x)))) << e.name << " r=" << R;
    }
    // The counterexamples are tangent only on their single fixed circle.
    auto ext = catalog("ext_counterexample", {{"a", 1.0}});
    EXPECT_GT(std::abs(radial_velocity(ext, polar_point(3, 1.0))), 0.1);
    auto punct = catalog("punct_counterexample", {{"b", 1.0}});
    EXPECT_GT(std::abs(radial_velocity(punct, polar_point(0.5, 1.0))), 0.1);
}

TEST(Invariants, VorticityTransported) {
    for (const auto& e : catalog_suite()) {
        auto f = catalog(e.name, e.params);
        oracle::Rng rng(200);
        for (int k = 0; k < 1000; ++k) {
            Vec2 x = rng.in_band(f.domain.trunc_inner(), f.domain.trunc_outer());
            double scale = std::max(1.0, norm(f(x)) * frob(jacobian_at(f, x)) / norm(x));
            ASSERT_LE(std::abs(vorticity_transport_at(f, x)), 1e-6 * scale) << e.name << " at r=" << norm(x);
        }
    }
}

TEST(Invariants, EulerResidualWhereverPressureIsAttached) {
    for (const auto& e : catalog_suite()) {
        auto f = catalog(e.name, e.params);
        ASSERT_TRUE(f.pressure_gradient || f.pressure) << e.name;
        oracle::Rng rng(300);
        for (int k = 0; k < 1000; ++k) {
            Vec2 x = rng.in_band(f.domain.trunc_inner(), f.domain.trunc_outer());
            double scale = std::max(1.0, norm(jacobian_at(f, x) * f(x)));
            ASSERT_LE(norm(euler_residual(f, x)), 1e-8 * scale) << e.name << " at r=" << norm(x);
        }
    }
}

TEST(Invariants, StreamFunctionGeneratesVelocity) {
    for (const auto& e : catalog_suite()) {
        auto f = catalog(e.name, e.params);
        if (!f.stream) continue;
        oracle::Rng rng(400);
        for (int k = 0; k < 200; ++k) {
            Vec2 x = rng.in_band(f.domain.trunc_inner(), f.domain.trunc_outer());
            Vec2 g = (*f.stream)(x).grad;
            Vec2 v = f(x);
            ASSERT_LE(norm(Vec2{-g.y, g.x} - v), 1e-8 * std::max(1.0, norm(v))) << e.name;
        }
    }
}
