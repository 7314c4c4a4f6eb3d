#pragma once

// CSV export of traced and tabulated objects, JSON field definitions.

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "annulus_lab/catalog.hpp"
#include "annulus_lab/radial.hpp"
#include "annulus_lab/stream.hpp"
#include "annulus_lab/symmetry.hpp"
#include "annulus_lab/trace.hpp"

namespace annulus_lab {

using json = nlohmann::json;

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Minimal CSV writer: header row first, values formatted round-trip.
class CsvWriter {
  public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out), columns_(header.size()) {
        write_cells(header);
    }
    void row(const std::vector<double>& values) {
        require(values.size() == columns_, "CsvWriter: row width does not match header");
        std::vector<std::string> cells;
        for (double v : values) cells.push_back(format_number(v));
        write_cells(cells);
    }
    void row_text(const std::vector<std::string>& cells) {
        require(cells.size() == columns_, "CsvWriter: row width does not match header");
        write_cells(cells);
    }

  private:
    void write_cells(const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) out_ << ',';
            const std::string& c = cells[k];
            if (c.find_first_of(",\"\n") != std::string::npos) {
                out_ << '"';
                for (char ch : c) out_ << (ch == '"' ? "\"\"" : std::string(1, ch));
                out_ << '"';
            } else {
                out_ << c;
            }
        }
        out_ << '\n';
    }
    std::ostream& out_;
    std::size_t columns_;
};

inline void write_streamline_csv(std::ostream& out, const Streamline& s, const VectorField& field) {
    CsvWriter w(out, {"t", "x", "y", "u", "omega"});
    for (std::size_t k = 0; k < s.polyline.size(); ++k) {
        Vec2 p = s.polyline[k];
        double u = field.stream ? (*field.stream)(p).u : std::numeric_limits<double>::quiet_NaN();
        w.row({s.times[k], p.x, p.y, u, vorticity_at(field, p)});
    }
}

inline void write_gradient_csv(std::ostream& out, const GradientCurve& c, const VectorField& field) {
    CsvWriter w(out, {"t", "x", "y", "u", "omega"});
    for (std::size_t k = 0; k < c.polyline.size(); ++k) {
        Vec2 p = c.polyline[k];
        double r = norm(p), rc = std::clamp(r, field.domain.trunc_inner(), field.domain.trunc_outer());
        w.row({c.times[k], p.x, p.y, c.u_values[k], vorticity_at(field, p * (rc / r))});
    }
}

inline void write_eigen_csv(std::ostream& out, const EigenPair& e) {
    CsvWriter w(out, {"r", "phi"});
    for (std::size_t k = 0; k < e.radii.size(); ++k) w.row({e.radii[k], e.phi[k]});
}

inline void write_profile_csv(std::ostream& out, const RadialSolution& s) {
    CsvWriter w(out, {"r", "U", "Uprime"});
    for (std::size_t k = 0; k < s.radii.size(); ++k) w.row({s.radii[k], s.U[k], s.Uprime[k]});
}

inline void write_decay_csv(std::ostream& out, const DecayReport& d) {
    CsvWriter w(out, {"radius", "sup_r_vr", "flux_abs", "verdict_decay_at_infinity", "verdict_flux_at_puncture"});
    for (const auto& r : d.rows)
        w.row_text({format_number(r.radius), format_number(r.sup_r_vr), format_number(r.flux_abs),
                    to_string(d.decay_at_infinity), to_string(d.flux_at_puncture)});
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, double epsilon) {
    CsvWriter w(out, {"e_angle", "lambda", "deficit", "audited", "status", "epsilon"});
    for (const auto& r : rows)
        w.row_text({format_number(r.e_angle), format_number(r.lambda), format_number(r.deficit), std::to_string(r.audited),
                    r.status, format_number(epsilon)});
}

// ---------------------------------------------------------------------------
// JSON field definitions

class ConfigError : public Error {
  public:
    using Error::Error;
};

inline double json_radius(const json& j, const char* key, double fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    const json& v = j.at(key);
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "inf" || s == "infinity") return kInf;
        throw ConfigError(std::string("domain.") + key + ": expected a number or \"inf\"");
    }
    if (!v.is_number()) throw ConfigError(std::string("domain.") + key + ": expected a number");
    return v.get<double>();
}

inline AnnularDomain domain_from_json(const json& d) {
    double a = json_radius(d, "a", 1.0), b = json_radius(d, "b", 2.0);
    Truncation t;
    if (d.contains("trunc_inner")) t.inner = json_radius(d, "trunc_inner", 0.0);
    if (d.contains("trunc_outer")) t.outer = json_radius(d, "trunc_outer", 0.0);
    return make_annulus(a, b, t);
}

inline Params params_from_json(const json& p) {
    Params out;
    if (p.is_null()) return out;
    if (!p.is_object()) throw ConfigError("params: expected an object");
    for (const auto& [k, v] : p.items()) {
        if (v.is_string() && (v == "inf" || v == "infinity")) out[k] = kInf;
        else if (v.is_number()) out[k] = v.get<double>();
        else throw ConfigError("params." + k + ": expected a number");
    }
    return out;
}

/// {"kind":"catalog","name":..,"params":{..}} or
/// {"kind":"expression","v_r":..,"v_theta":..,"domain":{"a":..,"b":..}}.
inline VectorField field_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("field: expected an object");
    std::string kind = j.value("kind", "catalog");
    if (kind == "catalog") {
        if (!j.contains("name")) throw ConfigError("field: catalog entry needs a name");
        return catalog(j.at("name").get<std::string>(), params_from_json(j.value("params", json::object())));
    }
    if (kind == "expression") {
        std::string vr = j.value("v_r", "0"), vt = j.value("v_theta", "0");
        return expression_field(vr, vt, domain_from_json(j.value("domain", json::object())));
    }
    throw ConfigError("field: unknown kind '" + kind + "'");
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_json_text(text, path);
}

inline json domain_to_json(const AnnularDomain& d) {
    auto num = [](double v) { return std::isinf(v) ? json("inf") : json(v); };
    return {{"a", d.inner_radius()}, {"b", num(d.outer_radius())}, {"trunc_inner", d.trunc_inner()},
            {"trunc_outer", d.trunc_outer()}};
}

}  // namespace annulus_lab
