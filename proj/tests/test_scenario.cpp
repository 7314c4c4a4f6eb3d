#include <gtest/gtest.h>

#include <sstream>

#include "annulus_lab/scenario.hpp"

using namespace annulus_lab;

namespace {

const CheckRecord& record(const Report& rep, const std::string& name) {
    for (const auto& c : rep.checks)
        if (c.check == name) return c;
    throw std::runtime_error("no record " + name);
}

Report run_builtin(const std::string& name) { return run_scenario(*find_builtin(name)); }

}  // namespace

TEST(Builtins, CircularAnnulusPassesEverything) {
    auto rep = run_builtin("th1-circular");
    ASSERT_EQ(rep.checks.size(), 5u);
    for (const auto& c : rep.checks) EXPECT_EQ(c.verdict, CheckVerdict::pass) << c.check << ": " << c.note;
    EXPECT_EQ(rep.exit_code(), 0);
}

TEST(Builtins, ExteriorCounterexampleFailsDecayAndCircularity) {
    auto rep = run_builtin("th2-counterexample");
    EXPECT_EQ(record(rep, "divergence").verdict, CheckVerdict::pass);
    EXPECT_EQ(record(rep, "euler_residual").verdict, CheckVerdict::pass);
    EXPECT_EQ(record(rep, "decay_at_infinity").verdict, CheckVerdict::fail);
    EXPECT_EQ(record(rep, "circularity").verdict, CheckVerdict::fail);
    EXPECT_EQ(rep.exit_code(), 1);
}

TEST(Builtins, PuncturedCounterexampleFailsFlux) {
    auto rep = run_builtin("punctured-counterexample");
    EXPECT_EQ(record(rep, "euler_residual").verdict, CheckVerdict::pass);
    EXPECT_EQ(record(rep, "flux_at_puncture").verdict, CheckVerdict::fail);
    EXPECT_EQ(record(rep, "circularity").verdict, CheckVerdict::fail);
}

TEST(Builtins, QuarticPasses) {
    auto rep = run_builtin("serrin-quartic");
    for (const auto& c : rep.checks)
        EXPECT_TRUE(c.verdict == CheckVerdict::pass || c.verdict == CheckVerdict::info) << c.check << ": " << c.note;
    EXPECT_EQ(rep.exit_code(), 0);
}

TEST(Builtins, EigenflowFailsItsStagnationHypothesis) {
    auto rep = run_builtin("eigenflow-six-points");
    EXPECT_EQ(record(rep, "eigen_crosscheck").verdict, CheckVerdict::pass);
    EXPECT_EQ(record(rep, "tangency").verdict, CheckVerdict::pass);
    EXPECT_EQ(record(rep, "stagnation_hypothesis").verdict, CheckVerdict::fail);
    EXPECT_EQ(record(rep, "critical_points").values["clusters"], 6);
}

TEST(Builtins, EveryBuiltinRunsWithoutErrors) {
    for (const auto& sc : builtin_scenarios()) {
        auto rep = run_scenario(sc);
        EXPECT_FALSE(rep.labels.contains("error")) << sc.name;
        for (const auto& c : rep.checks) EXPECT_EQ(c.note.rfind("error:", 0), std::string::npos) << sc.name << "/" << c.check;
    }
}

TEST(Audit, LogVortexOnPuncturedDisk) {
    auto rep = audit_flow(catalog_field("log", {{"a", 0}, {"b", 1}}));
    EXPECT_EQ(rep.labels["setting"], "punctured-disk");
    EXPECT_EQ(rep.labels["circular"], "CONFIRMED-NUMERICALLY");
    EXPECT_EQ(rep.labels["vorticity_transported"], "CONSISTENT");
    EXPECT_EQ(rep.labels["hypotheses"]["radial-flux-vanishes-at-puncture"], "CONSISTENT");
    EXPECT_EQ(rep.exit_code(), 0);
}

TEST(Audit, PuncturedCounterexampleIsInconsistentButDescriptive) {
    auto rep = audit_flow(catalog_field("punct_counterexample", {{"b", 1}, {"trunc_inner", 0.01}}));
    EXPECT_EQ(rep.labels["hypotheses"]["radial-flux-vanishes-at-puncture"], "INCONSISTENT");
    EXPECT_EQ(rep.labels["circular"], "INCONSISTENT");
    EXPECT_EQ(rep.exit_code(), 0);
}

TEST(Audit, ExteriorSettingLabels) {
    auto rep = audit_flow(catalog_field("inverse_square", {{"a", 1}, {"trunc_outer", 50}}));
    EXPECT_EQ(rep.labels["setting"], "exterior-domain");
    EXPECT_EQ(rep.labels["hypotheses"]["radial-velocity-o(1/r)-at-infinity"], "CONSISTENT");
    EXPECT_EQ(rep.labels["circular"], "CONFIRMED-NUMERICALLY");
}

TEST(Audit, ZeroFieldIsDegenerate) {
    json def = {{"kind", "expression"}, {"v_r", "0"}, {"v_theta", "0"}, {"domain", {{"a", 1}, {"b", 2}}}};
    auto rep = audit_flow(def);
    EXPECT_EQ(rep.labels["stagnation"], "everywhere");
    EXPECT_EQ(record(rep, "circularity").verdict, CheckVerdict::skip);
}

TEST(Config, UnknownCheckIsRejected) {
    json j = {{"name", "x"}, {"field", catalog_field("rigid")}, {"checks", {"divergence", "nonsense"}}};
    try {
        scenario_from_json(j);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("nonsense"), std::string::npos);
    }
    EXPECT_THROW(scenario_from_json(json{{"name", "x"}}), ConfigError);
}

TEST(Config, ExpressionParseErrorCarriesPosition) {
    json def = {{"kind", "expression"}, {"v_r", "0"}, {"v_theta", "r*("}, {"domain", {{"a", 1}, {"b", 2}}}};
    try {
        field_from_json(def);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 3u);
    }
}

TEST(Config, RoundTripFromJsonText) {
    auto sc = scenario_from_json(parse_json_text(R"({"name":"t","field":{"kind":"catalog","name":"rigid"},
        "checks":["divergence","circularity"],"grid":{"n_r":33,"n_theta":64}})",
                                                   "inline"));
    EXPECT_EQ(sc.grid.n_r, 33u);
    auto rep = run_scenario(sc);
    EXPECT_EQ(rep.exit_code(), 0);
    EXPECT_EQ(rep.environment["grid"]["n_r"], 33);
}

TEST(Report, DeterministicJson) {
    auto a = to_json(run_builtin("th2-counterexample"));
    auto b = to_json(run_builtin("th2-counterexample"));
    EXPECT_EQ(a.dump(), b.dump());
    EXPECT_EQ(a["schema"], kSchema);
    EXPECT_EQ(a["exit_code"], 1);
}

TEST(Report, CsvHasOneRowPerCheck) {
    auto rep = run_builtin("th1-circular");
    std::ostringstream out;
    write_report_csv(out, rep);
    std::string text = out.str();
    EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), rep.checks.size() + 1);
    EXPECT_EQ(text.rfind("scenario,check,verdict", 0), 0u);
}
