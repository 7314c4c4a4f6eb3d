// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cstdio>
#include <functional>
#include <string>

#include "annulus_lab.hpp"
#include "oracles.hpp"

using namespace annulus_lab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<Vec2> band_points(const AnnularDomain& d, std::size_t n = 1000) {
    std::vector<Vec2> pts;
    double lo = d.trunc_inner(), hi = d.trunc_outer();
    for (std::size_t k = 0; k < n; ++k) {
        Vec2 q = halton2(k);
        pts.push_back(polar_point(lo + (hi - lo) * q.x, kTwoPi * q.y));
    }
    return pts;
}

struct Flow {
    std::string name;
    Params params;
};

const std::vector<Flow>& catalog_flows() {
    static const std::vector<Flow> flows{{"circular", {{"power", 0.5}}},
                                         {"rigid", {}},
                                         {"log", {}},
                                         {"inverse_square", {}},
                                         {"quartic", {{"R", 1.0}}},
                                         {"shifted", {{"a", 1.0}}},
                                         {"ext_counterexample", {{"a", 1.0}}},
                                         {"punct_counterexample", {{"b", 1.0}}},
                                         {"eigenflow_m1", {{"a", 1.0}, {"b", 2.0}}},
                                         {"eigenflow_m0", {{"a", 1.0}, {"b", 2.0}}}};
    return flows;
}

/// Radius on the positive x-axis where 2(r^2 - 1) + r - 1/r = level.
double ext_seed_radius(double level) {
    auto u = [](double r) { return 2 * (r * r - 1) + r - 1 / r; };
    double lo = 1.0, hi = 1.0 + std::sqrt(level);
    for (int k = 0; k < 200; ++k) {
        double mid = 0.5 * (lo + hi);
        (u(mid) < level ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Outcome explicit_identities() {
    double worst = 0.0;
    std::string worst_name;
    for (const auto& fl : catalog_flows()) {
        auto f = catalog(fl.name, fl.params);
        if (!f.pressure_gradient) continue;
        for (Vec2 x : band_points(f.domain)) {
            double e = norm(euler_residual(f, x));
            if (e > worst) worst = e, worst_name = fl.name;
        }
    }
    double w_ext = 0.0, w_log = 0.0;
    for (double a : {0.5, 1.0, 2.0}) {
        auto ext = catalog("ext_counterexample", {{"a", a}, {"trunc_outer", 10 * a}});
        for (Vec2 x : band_points(ext.domain)) w_ext = std::max(w_ext, std::abs(vorticity_at(ext, x) - 8 / (a * a)));
    }
    auto lg = catalog("log", {{"trunc_inner", 1e-2}});
    for (Vec2 x : band_points(lg.domain)) w_log = std::max(w_log, std::abs(vorticity_at(lg, x)));
    return {worst <= 1e-8 && w_ext <= 1e-8 && w_log <= 1e-8,
            fmt("max euler residual %.2e (%s); |omega_ext - 8/a^2| %.2e; |omega_log| %.2e", worst, worst_name.c_str(), w_ext,
                w_log)};
}

Outcome flux_law() {
    auto f = catalog("punct_counterexample", {{"b", 1.0}});
    double worst = 0.0;
    for (double eps : {0.4, 0.2, 0.1}) worst = std::max(worst, std::abs(flux_abs_on_circle(f, eps) / (4 * (1 / eps - eps)) - 1));
    return {worst <= 0.01, fmt("max relative deviation from 4(1/eps - eps): %.2e", worst)};
}

Outcome streamline_width() {
    auto f = catalog("ext_counterexample", {{"a", 1.0}});
    std::vector<double> widths;
    bool closed = true;
    for (double level : {1e2, 1e3, 1e4}) {
        auto s = trace_streamline(f, {ext_seed_radius(level), 0});
        closed = closed && s.closed && s.winding == 1;
        widths.push_back(s.r_max - s.r_min);
    }
    bool toward = std::abs(widths[2] - 0.5) < std::abs(widths[1] - 0.5) && std::abs(widths[1] - 0.5) < std::abs(widths[0] - 0.5);
    return {closed && toward && std::abs(widths[2] - 0.5) <= 0.05 * 0.5,
            fmt("widths %.6f %.6f %.6f (limit 0.5)", widths[0], widths[1], widths[2])};
}

Outcome eigen_machinery() {
    auto e = eigenpair_mode1(1, 2);
    double sturm = oracle::sturm_principal_eigenvalue(1, 1, 2, 4096);
    double rel_oracle = std::abs(e.eigenvalue - sturm) / sturm;
    auto f = catalog("eigenflow_m1", {{"a", 1.0}, {"b", 2.0}});
    auto sg = sample_stream(polar_grid(f.domain, 129, 256), f);
    auto cps = critical_points(sg, default_critical_tol(sg));
    std::size_t in = 0, ci = 0, co = 0;
    for (const auto& c : cps) {
        in += c.location == Location::interior;
        ci += c.location == Location::inner_boundary;
        co += c.location == Location::outer_boundary;
    }
    bool ok = e.cross_check_rel <= 1e-6 && rel_oracle <= 1e-6 && cps.size() == 6 && in == 2 && ci == 2 && co == 2;
    return {ok, fmt("lambda %.10f; FD cross-check %.1e; Sturm oracle %.1e; clusters %zu (interior %zu, inner %zu, outer %zu)",
                    e.eigenvalue, e.cross_check_rel, rel_oracle, cps.size(), in, ci, co)};
}

Outcome vorticity_extraction() {
    GradientOptions go;
    go.max_du = 1e-3;
    auto q = catalog("quartic", {{"R", 1.0}});
    auto eq = extract_vorticity_profile(q, trace_gradient_curve(q, {0.05, 0}, -1, go));
    double err_q = 0.0;
    // The traced range starts at the integrated u of the wall, zero up to the
    // integrator tolerance.
    for (int k = 0; k <= 990; ++k) {
        double s = std::max(eq.profile.lo(), 0.99 * k / 990.0);
        err_q = std::max(err_q, std::abs(eq.profile.f(s) - 16 * std::sqrt(1 - s)));
    }
    auto sh = catalog("shifted", {{"a", 1.0}});
    auto es = extract_vorticity_profile(sh, trace_gradient_curve(sh, {1.01, 0}, 1, go));
    double err_s = 0.0;
    for (int k = 0; k <= 1000; ++k) {
        double s = es.profile.lo() + (es.profile.hi() - es.profile.lo()) * k / 1000.0;
        err_s = std::max(err_s, std::abs(es.profile.f(s) - (-2 + 1 / (1 + std::sqrt(2 * s)))));
    }
    double ratio = eq.lipschitz.end / eq.lipschitz.mid;
    bool covers = eq.profile.lo() <= 1e-7 && eq.profile.hi() >= 0.99;
    return {covers && err_q <= 1e-4 && err_s <= 1e-4 && ratio > 10,
            fmt("quartic err %.2e on [0, 0.99]; shifted err %.2e on [%.3g, %.3g]; Lipschitz end/mid %.1f", err_q, err_s,
                es.profile.lo(), es.profile.hi(), ratio)};
}

Outcome semilinear_residuals() {
    auto reduction = [](const VectorField& f, double fc) {
        auto res = [&](std::size_t nr) {
            return semilinear_residual(sample_stream(polar_grid(f.domain, nr, 2 * (nr - 1)), f), [fc](double) { return fc; }).max;
        };
        return res(129) / res(257);
    };
    double r_log = reduction(catalog("log", {{"a", 0.5}, {"b", 2.0}}), 0.0);
    double r_ext = reduction(catalog("ext_counterexample", {{"a", 1.0}, {"trunc_outer", 4.0}}), -8.0);
    return {r_log >= 3.5 && r_ext >= 3.5, fmt("x2 refinement reductions: log %.2f, ext %.2f", r_log, r_ext)};
}

Outcome kelvin() {
    auto f = catalog("inverse_square", {{"trunc_outer", 50.0}});
    double worst_ratio = 0.0, w_err = 0.0;
    for (std::size_t nr : {129u, 257u}) {
        auto sg = sample_stream(polar_grid(f.domain, nr, 2 * (nr - 1)), f);
        auto w = kelvin_transform(sg);
        const auto& rs = w.grid().radii();
        double h = 0.0;
        for (std::size_t i = 0; i < w.grid().n_r(); ++i) {
            if (i) h = std::max(h, rs[i] - rs[i - 1]);
            for (std::size_t j = 0; j < w.grid().n_theta(); ++j)
                w_err = std::max(w_err, std::abs(w.value(i, j) + norm(w.grid().node(i, j))));
        }
        worst_ratio = std::max(worst_ratio, kelvin_residual(w, [](double s) { return -s * s * s; }).max / (h * h));
    }
    auto sg = sample_stream(polar_grid(f.domain, 129, 256), f);
    auto back = kelvin_transform(kelvin_transform(sg));
    double inv = 0.0;
    for (std::size_t i = 0; i < sg.grid().n_r(); ++i)
        for (std::size_t j = 0; j < sg.grid().n_theta(); ++j) inv = std::max(inv, std::abs(back.value(i, j) - sg.value(i, j)));
    return {worst_ratio <= 1.0 && w_err <= 1e-12 && inv <= 1e-12,
            fmt("residual/h^2 <= %.2e; |w + |x|| %.1e; kelvin o kelvin %.1e", worst_ratio, w_err, inv)};
}

Outcome moving_planes() {
    auto d = make_annulus(0.45, 2.05);
    auto sg = sample_stream(polar_grid(d, 161, 256), [](Vec2 x) { return -std::log(norm(x)); });
    std::vector<double> lambdas;
    for (int k = 1; k <= 9; ++k) lambdas.push_back(0.2 * k);
    auto rows = deficit_sweep(sg, circle_polygon(2, 512), circle_polygon(0.5, 512), 16, lambdas);
    double worst = 0.0;
    std::size_t ok = 0;
    for (const auto& r : rows) {
        worst = std::max(worst, r.deficit);
        ok += r.status == "ok" || r.status == "empty";
    }
    auto f = catalog("eigenflow_m1", {{"a", 1.0}, {"b", 2.0}});
    auto se = sample_stream(polar_grid(f.domain, 129, 256), f);
    auto cap = build_cap(circle_polygon(2, 512), circle_polygon(1, 512), ReflectionSpec({1, 0}, 0.2));
    double eig = moving_plane_deficit(se, cap).deficit;
    return {rows.size() == 144 && ok == rows.size() && worst <= 1e-10 && eig > 1e-3,
            fmt("radial max deficit %.1e over %zu planes; eigenflow deficit %.3f", worst, rows.size(), eig)};
}

Outcome serrin_audit() {
    auto q = catalog("quartic", {{"R", 1.0}, {"trunc_inner", 0.1}});
    auto aq = overdetermined_audit(sample_stream(polar_grid(q.domain, 129, 256), q), circle_polygon(1, 512));
    auto f = catalog("eigenflow_m1", {{"a", 1.0}, {"b", 2.0}});
    auto ae = overdetermined_audit(sample_stream(polar_grid(f.domain, 129, 256), f), circle_polygon(1, 512));
    double dphi1 = std::abs(catalog_eigenpair("eigenflow_m1", {{"a", 1.0}, {"b", 2.0}}).dphi_at(1.0));
    return {aq.osc_u <= 1e-4 && aq.osc_normal_derivative <= 1e-4 && ae.osc_normal_derivative >= 0.5 * dphi1,
            fmt("quartic osc u %.1e, osc du/dn %.1e; eigenflow osc du/dn %.3f vs 0.5|phi'(1)| %.3f", aq.osc_u,
                aq.osc_normal_derivative, ae.osc_normal_derivative, 0.5 * dphi1)};
}

Outcome conservation() {
    const TracerOptions opts;
    // A positional error of rtol |x| moves u by |grad u| rtol |x| and omega by
    // |grad omega| rtol |x|; the drifts are held to ten times that.
    double worst_u = 0.0, worst_w = 0.0;
    std::size_t orbits = 0;
    for (const auto& fl : catalog_flows()) {
        auto f = catalog(fl.name, fl.params);
        if (f.domain.unbounded()) f = catalog(fl.name, [&] { auto p = fl.params; p["trunc_outer"] = 10.0 * f.domain.trunc_inner(); return p; }());
        double lo = f.domain.trunc_inner(), hi = f.domain.trunc_outer();
        for (int k = 1; k <= 5; ++k) {
            Vec2 x0 = polar_point(lo + (hi - lo) * k / 6.0, 0.3);
            if (norm(f(x0)) < 1e-6) continue;
            Streamline s;
            try {
                s = trace_streamline(f, x0, opts);
            } catch (const OutOfBandError&) {
                continue;  // open level curve, e.g. through the puncture
            }
            if (!s.closed) continue;
            ++orbits;
            double gu = 0.0, gw = 0.0;
            for (Vec2 p : s.polyline) {
                gu = std::max(gu, norm(f(p)));
                double h = 1e-5 * norm(p);
                double dx = (vorticity_at(f, p + Vec2{h, 0}) - vorticity_at(f, p - Vec2{h, 0})) / (2 * h);
                double dy = (vorticity_at(f, p + Vec2{0, h}) - vorticity_at(f, p - Vec2{0, h})) / (2 * h);
                gw = std::max(gw, std::hypot(dx, dy));
            }
            double delta = opts.control.rtol * s.r_max + opts.control.atol;
            worst_u = std::max(worst_u, s.u_drift / (10 * delta * gu));
            worst_w = std::max(worst_w, s.omega_drift / (10 * delta * std::max(gw, 1e-300) + 1e-12));
        }
    }
    double worst_period = 0.0;
    oracle::Rng rng(101);
    struct Circ {
        Flow flow;
        std::function<double(double)> V;
    };
    std::vector<Circ> circs{{{"rigid", {}}, [](double r) { return r; }},
                            {{"log", {}}, [](double r) { return 1 / r; }},
                            {{"inverse_square", {}}, [](double r) { return 1 / (r * r); }},
                            {{"circular", {{"power", 0.5}}}, [](double r) { return std::sqrt(r); }},
                            {{"quartic", {{"R", 1.0}}}, [](double r) { return 4 * r * r * r; }},
                            {{"shifted", {{"a", 1.0}}}, [](double r) { return r - 1; }}};
    for (int k = 0; k < 10; ++k) {
        const auto& c = circs[k % circs.size()];
        auto f = catalog(c.flow.name, c.flow.params);
        double lo = f.domain.trunc_inner(), hi = std::min(f.domain.trunc_outer(), 10.0 * std::max(lo, 0.1));
        double r = rng.uniform(lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo));
        auto s = trace_streamline(f, polar_point(r, rng.uniform(0, kTwoPi)), opts);
        double want = kTwoPi * r / std::abs(c.V(r));
        worst_period = std::max(worst_period, s.closed ? std::abs(*s.period / want - 1) : kInf);
    }
    return {orbits >= 20 && worst_u <= 1 && worst_w <= 1 && worst_period <= 1e-6,
            fmt("%zu orbits; u drift <= %.2f and omega drift <= %.2f of 10x tolerance; period rel err %.1e at 10 radii", orbits,
                worst_u, worst_w, worst_period)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"explicit-flow identities", explicit_identities}, {"flux law", flux_law},
        {"streamline width limit", streamline_width},      {"eigen machinery", eigen_machinery},
        {"vorticity-function extraction", vorticity_extraction}, {"semilinear residual", semilinear_residuals},
        {"kelvin transform", kelvin},                      {"moving planes", moving_planes},
        {"overdetermined audit", serrin_audit},            {"conservation", conservation}};
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
