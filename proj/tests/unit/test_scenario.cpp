#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "vaxmed/detect.hpp"
#include "vaxmed/errors.hpp"
#include "vaxmed/estimands.hpp"
#include "vaxmed/report.hpp"
#include "vaxmed/scenario.hpp"

using namespace vaxmed;

namespace {

const char* kMinimal = R"json({
  "schema_version": 1,
  "name": "minimal",
  "nodes": [
    {"name": "A", "prob": 0.5},
    {"name": "B", "parents": ["A"], "prob": {"0": 0.3, "1": 0.7}},
    {"name": "Y", "parents": ["A", "B"], "prob": {"0,0": 0.25, "0,1": 0.35, "1,0": 0.14, "1,1": 0.21}}
  ],
  "roles": {"exposure": "A", "mediator": "B", "outcome": "Y"},
  "analyses": ["tau_rw"]
})json";

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

std::vector<ScenarioIssue> issues_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ScenarioError& e) {
        return e.issues();
    }
    return {};
}

bool mentions(const std::vector<ScenarioIssue>& issues, const std::string& needle) {
    return std::any_of(issues.begin(), issues.end(), [&](const ScenarioIssue& i) {
        return i.message.find(needle) != std::string::npos || i.location.find(needle) != std::string::npos;
    });
}

const ReportRow& row(const Report& r, const std::string& name) {
    for (const auto& x : r.rows)
        if (x.analysis == name) return x;
    FAIL("missing row " << name);
    return r.rows.front();
}

}  // namespace

TEST_CASE("built-in list") {
    const auto names = list_builtin();
    for (const char* required : {"table1", "fig1-panel1", "fig1-panel2", "fig1-panel3", "fig2", "fig3-panel1",
                                 "fig3-panel1-noedge", "fig3-panel2", "fig3-panel3", "figS1", "figS2-blinded",
                                 "negctrl-pop", "interference-demo"}) {
        CHECK(std::find(names.begin(), names.end(), required) != names.end());
    }
    CHECK_FALSE(builtin_source("nope").has_value());
}

TEST_CASE("built-ins parse, round-trip and carry their own name") {
    for (const auto& name : list_builtin()) {
        CAPTURE(name);
        const auto sc = parse_scenario(*builtin_source(name));
        CHECK(sc.name == name);
        const auto text = serialize_scenario(sc);
        CHECK(parse_scenario(text) == sc);
        CHECK(serialize_scenario(parse_scenario(text)) == text);
    }
}

TEST_CASE("table1 scenario reproduces the total effect") {
    const auto sc = parse_scenario(*builtin_source("table1"));
    CHECK(std::abs(total_effect(sc.model(), "A", "Y").difference + 0.091) < 1e-9);
}

TEST_CASE("noise weights that do not sum to one name the node") {
    const auto text = replace(kMinimal, R"({"name": "B", "parents": ["A"], "prob": {"0": 0.3, "1": 0.7}})",
                              R"({"name": "B", "parents": ["A"], "noise": [0.5, 0.4], "table": {"0": [0, 1], "1": [1, 1]}})");
    const auto issues = issues_of(text);
    REQUIRE_FALSE(issues.empty());
    CHECK(issues[0].location == "/nodes/1/noise");
    CHECK(issues[0].message.find("'B'") != std::string::npos);
    CHECK(issues[0].message.find("0.9") != std::string::npos);
}

TEST_CASE("unsatisfiable analyses and bad role bindings are reported") {
    CHECK(mentions(issues_of(replace(kMinimal, R"(["tau_rw"])", R"(["tau_vt"])")), "perception"));
    CHECK(mentions(issues_of(replace(kMinimal, R"("outcome": "Y")", R"("outcome": "Q")")), "unknown node 'Q'"));
    CHECK(mentions(issues_of(replace(kMinimal, R"("outcome": "Y")", R"("outcome": "B")")), "already bound"));
    CHECK(mentions(issues_of(replace(kMinimal, R"(["tau_rw"])", R"(["tau_rw", "frobnicate"])")), "unknown analysis"));
    CHECK(mentions(issues_of(replace(kMinimal, R"(["tau_rw"])", R"x(["cde(x)"])x")), "integer"));
    CHECK(mentions(issues_of(replace(kMinimal, R"(["tau_rw"])", R"(["interf_total"])")), "groups"));
    CHECK(mentions(issues_of(replace(kMinimal, R"(["tau_rw"])", R"x(["misclassified_nde(2)"])x")), "flip"));
    CHECK(mentions(issues_of(replace(kMinimal, R"("1,1": 0.21)", R"("1,1": 1.21)")), "outside [0,1]"));
    CHECK(mentions(issues_of(replace(kMinimal, R"(, "1,1": 0.21)", "")), "missing configuration '1,1'"));
    CHECK(mentions(issues_of(replace(kMinimal, R"("schema_version": 1)", R"("schema_version": 7)")), "schema"));
    CHECK(mentions(issues_of(replace(kMinimal, R"("parents": ["A"])", R"("parents": ["Y"])")), "/nodes"));
}

TEST_CASE("syntax errors carry a line and column") {
    const auto issues = issues_of("{\n  \"name\": \"x\",\n  \"nodes\": [,]\n}");
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].location.rfind("line 3", 0) == 0);
}

TEST_CASE("analysis requests") {
    const auto a = parse_analysis("plugin_nde(H, W)");
    CHECK(a.kind == "plugin_nde");
    CHECK(*a.args == std::vector<std::string>{"H", "W"});
    CHECK(parse_analysis("plugin_nde()").args->empty());
    CHECK_FALSE(parse_analysis("nde").args.has_value());
    CHECK_THROWS_AS(parse_analysis("nde(H"), InputError);
}

TEST_CASE("table1 report rows") {
    const auto r = run(parse_scenario(*builtin_source("table1")), {});
    CHECK_FALSE(r.has_errors());
    CHECK(std::abs(*row(r, "tau_rw").analytic + 0.091) < 1e-12);
    CHECK(std::abs(*row(r, "tau_rw.risk_treated").analytic - 0.189) < 1e-12);
    CHECK(std::abs(*row(r, "tau_rw.risk_control").analytic - 0.280) < 1e-12);
    CHECK(std::abs(*row(r, "nde").analytic + 0.119) < 1e-12);
    CHECK(std::abs(*row(r, "nde.risk_treated").analytic - 0.161) < 1e-12);
    CHECK(std::abs(*row(r, "nde.ve").analytic - 0.425) < 1e-12);
    std::ostringstream table;
    write_table(table, r);
    const auto text = table.str();
    CHECK(text.find("32.5%") != std::string::npos);
    CHECK(text.find("42.5%") != std::string::npos);
    CHECK(text.find("-0.09") != std::string::npos);
    CHECK(text.find("-0.12") != std::string::npos);
}

TEST_CASE("every requested analysis appears exactly once and no built-in fails") {
    for (const auto& name : list_builtin()) {
        CAPTURE(name);
        const auto sc = parse_scenario(*builtin_source(name));
        const auto r = run(sc, {std::nullopt, 4000, false});
        CHECK_FALSE(r.has_errors());
        for (const auto& analysis : sc.analyses) {
            CHECK(std::count_if(r.rows.begin(), r.rows.end(),
                                [&](const ReportRow& x) { return x.analysis == analysis; }) == 1);
        }
    }
}

TEST_CASE("reports are deterministic for a fixed seed") {
    const auto sc = parse_scenario(*builtin_source("table1"));
    auto render = [&](std::uint64_t seed) {
        std::ostringstream os;
        write_csv(os, run(sc, {seed, 5000, false}));
        return os.str();
    };
    CHECK(render(7) == render(7));
    CHECK(render(7) != render(8));
}

TEST_CASE("figure 2 flags the natural direct effect as non-identified") {
    const auto r = run(parse_scenario(*builtin_source("fig2")), {std::nullopt, 5000, false});
    const auto& nde = row(r, "nde");
    CHECK(nde.flags.find("non-identified") != std::string::npos);
    CHECK(nde.flags.find("A4 violated (H2)") != std::string::npos);
    CHECK(row(r, "plugin_nde").flags.find("inconsistent") != std::string::npos);
}

TEST_CASE("no-edge alternative outcome scenario reports no association") {
    const auto r = run(parse_scenario(*builtin_source("fig3-panel1-noedge")), {});
    const auto& alt = row(r, "alt_outcome");
    CHECK(alt.flags.rfind("no-association", 0) == 0);
    CHECK(std::abs(*alt.analytic) < 1e-12);
}

TEST_CASE("capacity problems become error rows") {
    auto sc = parse_scenario(kMinimal);
    sc.analyses = {"tau_rw", "nie"};
    sc.nodes.push_back(sc.nodes[0]);
    sc.nodes.back().name = "Q";
    sc.nodes.back().prob = {0.5};
    CHECK_FALSE(run(sc, {std::nullopt, 100, false}).has_errors());

    // 24 independent fair coins exceed the enumeration cap.
    auto big = parse_scenario(kMinimal);
    for (int k = 0; k < 24; ++k) {
        NodeSource n;
        n.name = "N" + std::to_string(k);
        n.prob = {0.5};
        n.coupling = Coupling::Independent;
        big.nodes.push_back(n);
    }
    const auto r = run(big, {std::nullopt, 100, false});
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].error);
    CHECK(r.rows[0].flags.find("error:") == 0);
}

TEST_CASE("csv report layout") {
    const auto r = run(parse_scenario(kMinimal), {3, 1000, false});
    std::ostringstream os;
    write_csv(os, r);
    const auto text = os.str();
    CHECK(text.find("# scenario: minimal\n") == 0);
    CHECK(text.find("\nanalysis,analytic,estimate,se,flags\n") != std::string::npos);
    CHECK(text.find("\ntau_rw,-0.09") != std::string::npos);
}

TEST_CASE("graphical and analytic coherence for every built-in probe") {
    for (const auto& name : list_builtin()) {
        const auto sc = parse_scenario(*builtin_source(name));
        if (sc.roles.probe.empty()) continue;
        CAPTURE(name);
        const auto m = sc.model();
        std::vector<std::vector<std::string>> sets{sc.roles.condition, {}};
        for (const auto& cond : sets) {
            if (!d_separated(m.dag(), sc.roles.exposure, sc.roles.probe, NodeSet(cond.begin(), cond.end()))) continue;
            const auto c = analytic_contrast(m, sc.roles.exposure, sc.roles.probe, cond);
            for (const auto& s : c.strata) CHECK(std::abs(s.difference) < 1e-12);
        }
    }
}
