// annulus_lab command line: scenarios, tracing, eigenpairs and reflection sweeps.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "annulus_lab.hpp"

using namespace annulus_lab;

namespace {

/// A builtin name or a path to a JSON scenario file.
Scenario load_scenario(const std::string& target) {
    if (auto s = find_builtin(target)) return *s;
    return scenario_from_json(read_json_file(target));
}

std::vector<Scenario> load_targets(const std::string& target) {
    if (target == "all") return builtin_scenarios();
    return {load_scenario(target)};
}

/// "k=v" pairs into a params object.
json parse_params(const std::vector<std::string>& kv) {
    json p = json::object();
    for (const auto& item : kv) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("--param expects key=value, got '" + item + "'");
        std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        if (val == "inf" || val == "infinity") {
            p[key] = "inf";
            continue;
        }
        try {
            std::size_t used = 0;
            double d = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
            p[key] = d;
        } catch (const std::exception&) {
            throw ConfigError("--param " + key + ": not a number: '" + val + "'");
        }
    }
    return p;
}

/// A catalog name (with --param overrides) or a JSON field file.
json field_definition(const std::string& field, const std::vector<std::string>& params) {
    const auto& names = catalog_names();
    if (std::find(names.begin(), names.end(), field) != names.end()) return catalog_field(field, parse_params(params));
    json j = read_json_file(field);
    if (j.contains("field")) j = j.at("field");
    if (!params.empty()) {
        json extra = parse_params(params);
        for (auto& [k, v] : extra.items()) j["params"][k] = v;
    }
    return j;
}

Vec2 parse_point(const std::string& s) {
    std::istringstream in(s);
    Vec2 p;
    char comma = 0;
    if (!(in >> p.x >> comma >> p.y) || comma != ',') throw ConfigError("expected a point 'x,y', got '" + s + "'");
    return p;
}

void with_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    body(out);
}

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

/// Gradient curve from `seed` to the level u = level, then the closed
/// streamline through the endpoint.
Streamline level_curve(const VectorField& field, Vec2 seed, double level) {
    GradientOptions go;
    go.stop_at_u = level;
    double u0 = field.stream ? (*field.stream)(seed).u : 0.0;
    int dir = level >= u0 ? 1 : -1;
    GradientCurve g = trace_gradient_curve(field, seed, dir, go);
    if (g.termination != Termination::reached_level)
        throw ConfigError("level " + format_number(level) + " not reached from the seed (" + to_string(g.termination) + ")");
    Streamline s = trace_streamline(field, g.polyline.back());
    if (!s.closed) throw ConfigError("streamline at level " + format_number(level) + " did not close");
    return s;
}

int cmd_scenarios() {
    for (const auto& s : builtin_scenarios()) {
        std::cout << s.name << "  " << s.description;
        if (!s.checks.empty()) {
            std::cout << "  [";
            for (std::size_t k = 0; k < s.checks.size(); ++k) std::cout << (k ? "," : "") << s.checks[k];
            std::cout << "]";
        }
        if (s.audit) std::cout << " +audit";
        std::cout << '\n';
    }
    return 0;
}

int cmd_run(const std::string& target, const std::string& out_path) {
    Scenario sc = load_scenario(target);
    Report rep = run_scenario(sc);
    json j = to_json(rep);
    std::string path = out_path.empty() ? sc.report_path : out_path;
    with_output(path, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    if (!sc.csv_path.empty()) with_output(sc.csv_path, [&](std::ostream& o) { write_report_csv(o, rep); });
    return rep.exit_code();
}

int cmd_report(const std::string& target, const std::string& format, const std::string& out_path) {
    std::vector<Report> reports;
    for (const auto& sc : load_targets(target)) reports.push_back(run_scenario(sc));
    bool fail = std::any_of(reports.begin(), reports.end(), [](const Report& r) { return r.any_fail(); });
    with_output(out_path, [&](std::ostream& o) {
        if (format == "csv") {
            std::ostringstream body;
            for (std::size_t k = 0; k < reports.size(); ++k) {
                std::ostringstream one;
                write_report_csv(one, reports[k]);
                std::string text = one.str();
                if (k) text = text.substr(text.find('\n') + 1);  // one header row in total
                body << text;
            }
            o << body.str();
        } else {
            json arr = json::array();
            for (const auto& r : reports) arr.push_back(to_json(r));
            o << (arr.size() == 1 ? arr[0] : json{{"schema", kSchema}, {"reports", arr}}).dump(2) << '\n';
        }
    });
    return fail ? 1 : 0;
}

struct TraceArgs {
    std::string field;
    std::vector<std::string> params;
    std::string seed;
    int gradient = 0;
    std::optional<double> stop_at_u;
    std::string csv;
};

int cmd_trace(const TraceArgs& a) {
    VectorField field = field_from_json(field_definition(a.field, a.params));
    Vec2 seed = parse_point(a.seed);
    json j = {{"schema", kSchema}, {"field", field.name}, {"seed", point_json(seed)}};
    if (a.gradient != 0) {
        GradientOptions go;
        go.stop_at_u = a.stop_at_u;
        GradientCurve c = trace_gradient_curve(field, seed, a.gradient, go);
        j["kind"] = "gradient-curve";
        j["direction"] = c.direction;
        j["termination"] = to_string(c.termination);
        j["points"] = c.polyline.size();
        j["end"] = point_json(c.polyline.back());
        j["u_start"] = c.u_values.front();
        j["u_end"] = c.u_values.back();
        if (!a.csv.empty()) with_output(a.csv, [&](std::ostream& o) { write_gradient_csv(o, c, field); });
    } else {
        Streamline s = trace_streamline(field, seed);
        j["kind"] = "streamline";
        j["closed"] = s.closed;
        j["termination"] = s.termination;
        j["period"] = s.period ? json(*s.period) : json(nullptr);
        j["winding"] = s.winding;
        j["suspect"] = s.suspect;
        j["r_min"] = s.r_min;
        j["r_max"] = s.r_max;
        j["length"] = s.length;
        j["closure_gap"] = s.closure_gap;
        j["u_drift"] = s.u_drift;
        j["omega_drift"] = s.omega_drift;
        j["points"] = s.polyline.size();
        if (!a.csv.empty()) with_output(a.csv, [&](std::ostream& o) { write_streamline_csv(o, s, field); });
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_eigen(int mode, double a, double b, std::size_t n, const std::string& csv) {
    EigenPair e = principal_eigenpair(mode, a, b, n);
    json j = {{"schema", kSchema},
              {"mode", mode},
              {"a", a},
              {"b", b},
              {"eigenvalue", e.eigenvalue},
              {"fd_eigenvalue", e.fd_eigenvalue},
              {"cross_check_rel", e.cross_check_rel},
              {"r_star", e.r_star},
              {"dphi_a", e.dphi.front()},
              {"dphi_b", e.dphi.back()},
              {"boundary_residual", e.boundary_residual}};
    if (!csv.empty()) with_output(csv, [&](std::ostream& o) { write_eigen_csv(o, e); });
    std::cout << j.dump(2) << '\n';
    return 0;
}

struct PlaneArgs {
    std::string field;
    std::vector<std::string> params;
    double outer_level = 0.0;
    double inner_level = 0.0;
    std::size_t directions = 16;
    std::vector<double> lambdas;
    std::optional<double> epsilon;
    std::string seed;
    std::size_t n_r = 161, n_theta = 256, n_audit = 2048;
    std::string csv;
};

int cmd_moving_planes(const PlaneArgs& a) {
    VectorField field = field_from_json(field_definition(a.field, a.params));
    const AnnularDomain& d = field.domain;
    Vec2 seed = a.seed.empty() ? Vec2{0.5 * (d.trunc_inner() + d.trunc_outer()), 0.0} : parse_point(a.seed);
    Streamline outer_s = level_curve(field, seed, a.outer_level);
    Streamline inner_s = level_curve(field, seed, a.inner_level);
    JordanPolygon outer = streamline_polygon(outer_s), inner = streamline_polygon(inner_s);
    if (outer_s.r_max <= inner_s.r_max) throw ConfigError("--outer-level curve does not enclose the --inner-level curve");

    // phi is sampled on a band slightly wider than the two curves.
    double lo = std::max(d.trunc_inner(), 0.9 * inner_s.r_min), hi = std::min(d.trunc_outer(), 1.1 * outer_s.r_max);
    AnnularDomain band(d.inner_radius(), d.outer_radius(), lo, hi);
    PolarGrid grid = polar_grid(band, a.n_r, a.n_theta);
    VectorField banded = field;
    banded.domain = band;
    StreamGrid sg = banded.stream ? sample_stream(grid, banded) : stream_on_grid(banded, grid, seed);
    // c1 on the outer curve, c2 > c1 on the inner one.
    double sign = a.inner_level > a.outer_level ? 1.0 : -1.0;
    if (sign < 0) {
        std::vector<double> vals;
        for (std::size_t i = 0; i < grid.n_r(); ++i)
            for (std::size_t j = 0; j < grid.n_theta(); ++j) vals.push_back(-sg.value(i, j));
        sg = StreamGrid(grid, std::move(vals), sg.base_point(), -sg.base_value());
    }

    double r_prime = inner_s.r_max;
    double eps = a.epsilon.value_or(0.05 * r_prime);
    std::vector<double> lambdas = a.lambdas;
    if (lambdas.empty()) {
        double top = 0.9 * outer_s.r_min;
        for (int k = 1; k <= 9; ++k) lambdas.push_back(eps + (top - eps) * k / 9.0);
    }
    auto rows = deficit_sweep(sg, outer, inner, a.directions, lambdas, a.n_audit);
    double worst = 0.0;
    std::size_t ok = 0, below_eps = 0;
    json failures = json::object();
    for (const auto& r : rows) {
        if (r.status == "ok") {
            ++ok;
            worst = std::max(worst, r.deficit);
        } else if (r.status != "empty") {
            failures[r.status] = failures.value(r.status, 0) + 1;
        }
        below_eps += r.lambda <= eps;
    }
    json j = {{"schema", kSchema},
              {"field", field.name},
              {"phi_sign", sign},
              {"outer_level", a.outer_level},
              {"inner_level", a.inner_level},
              {"outer_radius_range", {outer_s.r_min, outer_s.r_max}},
              {"inner_radius_range", {inner_s.r_min, inner_s.r_max}},
              {"r_prime", r_prime},
              {"epsilon", eps},
              {"lambdas", lambdas},
              {"directions", a.directions},
              {"rows", rows.size()},
              {"rows_audited", ok},
              {"rows_lambda_below_epsilon", below_eps},
              {"hypothesis_failures", failures},
              {"max_deficit", worst}};
    if (!a.csv.empty()) with_output(a.csv, [&](std::ostream& o) { write_sweep_csv(o, rows, eps); });
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady Euler flows on annular domains: scenarios, tracing and symmetry audits"};
    app.require_subcommand(1);

    app.add_subcommand("scenarios", "List the builtin scenarios");

    std::string run_target, run_out;
    auto* run = app.add_subcommand("run", "Run a scenario file or builtin and print its JSON report");
    run->add_option("target", run_target, "Scenario JSON file or builtin name")->required();
    run->add_option("-o,--output", run_out, "Write the report here instead of stdout");

    std::string rep_target = "all", rep_format = "json", rep_out;
    auto* report = app.add_subcommand("report", "Run scenarios and emit a combined report");
    report->add_option("target", rep_target, "Scenario file, builtin name or 'all'");
    report->add_option("--format", rep_format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    report->add_option("-o,--output", rep_out, "Output file");

    TraceArgs ta;
    auto* trace = app.add_subcommand("trace", "Trace a streamline or gradient curve");
    trace->add_option("--field", ta.field, "Catalog name or field JSON file")->required();
    trace->add_option("--param", ta.params, "Catalog parameter key=value (repeatable)");
    trace->add_option("--seed", ta.seed, "Seed point x,y")->required();
    trace->add_option("--gradient", ta.gradient, "Follow grad u (+1) or -grad u (-1) instead of v")
        ->check(CLI::IsMember({-1, 1}));
    trace->add_option("--stop-at-u", ta.stop_at_u, "Stop a gradient curve at this stream-function level");
    trace->add_option("--csv", ta.csv, "Write the polyline as CSV");

    int e_mode = 1;
    double e_a = 1.0, e_b = 2.0;
    std::size_t e_n = 512;
    std::string e_csv;
    auto* eigen = app.add_subcommand("eigen", "Principal Dirichlet eigenpair of the radial operator");
    eigen->add_option("--mode", e_mode, "Angular mode")->check(CLI::IsMember({0, 1}));
    eigen->add_option("--a", e_a, "Inner radius")->required();
    eigen->add_option("--b", e_b, "Outer radius")->required();
    eigen->add_option("--n", e_n, "Output samples");
    eigen->add_option("--csv", e_csv, "Write r,phi as CSV");

    PlaneArgs pa;
    auto* planes = app.add_subcommand("moving-planes", "Reflection deficit sweep between two level curves");
    planes->add_option("--field", pa.field, "Catalog name or field JSON file")->required();
    planes->add_option("--param", pa.params, "Catalog parameter key=value (repeatable)");
    planes->add_option("--outer-level", pa.outer_level, "Stream-function level of the outer curve")->required();
    planes->add_option("--inner-level", pa.inner_level, "Stream-function level of the inner curve")->required();
    planes->add_option("--directions", pa.directions, "Number of equally spaced directions");
    planes->add_option("--lambdas", pa.lambdas, "Plane offsets (default: 9 values from epsilon)")->delimiter(',');
    planes->add_option("--epsilon", pa.epsilon, "Lower end of the default sweep (default 0.05 R')");
    planes->add_option("--seed", pa.seed, "Start of the gradient curves x,y");
    planes->add_option("--n-r", pa.n_r, "Radial grid nodes");
    planes->add_option("--n-theta", pa.n_theta, "Angular grid nodes");
    planes->add_option("--audit-points", pa.n_audit, "Cap points per row");
    planes->add_option("--csv", pa.csv, "Write the sweep rows as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("scenarios")) return cmd_scenarios();
        if (run->parsed()) return cmd_run(run_target, run_out);
        if (report->parsed()) return cmd_report(rep_target, rep_format, rep_out);
        if (trace->parsed()) return cmd_trace(ta);
        if (eigen->parsed()) return cmd_eigen(e_mode, e_a, e_b, e_n, e_csv);
        if (planes->parsed()) return cmd_moving_planes(pa);
    } catch (const std::exception& e) {
        std::cerr << "annulus_lab: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
