// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: vaxmed_acceptance <path-to-vaxmed-cli>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/dsep_oracle.hpp"
#include "vaxmed/detect.hpp"
#include "vaxmed/estimands.hpp"
#include "vaxmed/estimation.hpp"
#include "vaxmed/graph.hpp"
#include "vaxmed/interference.hpp"
#include "vaxmed/scenario.hpp"

using namespace vaxmed;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Scenario builtin(const std::string& name) { return parse_scenario(*builtin_source(name)); }

std::vector<std::size_t> prefix(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

constexpr BootstrapOptions kNoBootstrap{0, 0};

void table1_reproduction(Outcome& out) {
    const auto start = Clock::now();
    const auto m = builtin("table1").model();
    const auto tau = total_effect(m, "A", "Y");
    const auto nde = natural_direct_effect(m, "A", "B", "Y");
    const double elapsed = seconds_since(start);
    auto near = [](double x, double target) { return std::abs(x - target) < 1e-9; };
    out.require(near(tau.risk_treated, 0.189) && near(tau.risk_control, 0.280) && near(tau.difference, -0.091),
                "tau_rw values");
    out.require(near(nde.risk_treated, 0.161) && near(nde.risk_control, 0.280) && near(nde.difference, -0.119),
                "nde values");
    out.require(near(*tau.ve, 0.325) && near(*nde.ve, 0.425), "VE values");
    out.require(display_probability(tau.difference) == "-0.09" && display_probability(nde.difference) == "-0.12",
                "difference display");
    out.require(display_probability(tau.risk_treated) == "0.19" && display_probability(tau.risk_control) == "0.28" &&
                    display_probability(nde.risk_treated) == "0.16",
                "risk display");
    out.require(display_ve(tau.ve) == "32.5%" && display_ve(nde.ve) == "42.5%", "VE display");
    out.require(elapsed < 1.0, "runtime");
    out.detail << "tau_rw=" << tau.difference << " nde=" << nde.difference << " runtime=" << elapsed << "s";
}

void plugin_consistency(Outcome& out) {
    const auto start = Clock::now();
    const auto m = builtin("fig1-panel3").model();
    const double truth = natural_direct_effect(m, "A", "B", "Y").difference;
    int monotone = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        // Samples of different sizes under one seed are nested prefixes.
        const auto full = sample_units(m, 1000000, seed);
        std::vector<double> err;
        for (std::size_t n : {10000u, 100000u, 1000000u}) {
            const auto d = n == full.rows() ? full : full.subset(prefix(n));
            err.push_back(std::abs(plugin_nde(d, "A", "B", "Y", {"H"}, kNoBootstrap).estimate - truth));
        }
        worst = std::max(worst, err[2]);
        if (err[0] > err[1] && err[1] > err[2]) ++monotone;
    }
    const double elapsed = seconds_since(start);
    out.require(worst < 0.01, "error at n=1e6");
    out.require(monotone >= 9, "monotone error decrease in >= 9 of 10 seeds");
    out.require(elapsed < 60.0, "runtime");
    out.detail << "oracle nde=" << truth << " max |err| at 1e6=" << worst << " monotone seeds=" << monotone
               << "/10 runtime=" << elapsed << "s";
}

void confounding_exhibit(Outcome& out) {
    for (const char* name : {"fig1-panel2", "fig1-panel3"}) {
        const auto m = builtin(name).model();
        const double tau = total_effect(m, "A", "Y").difference;
        const double nde = natural_direct_effect(m, "A", "B", "Y").difference;
        const auto d = sample_units(m, 1000000, 11);
        const BootstrapOptions boot{100, 12};
        const auto t_raw = plugin_total(d, "A", "Y", {}, boot);
        const auto t_adj = plugin_total(d, "A", "Y", {"H"}, boot);
        const auto n_raw = plugin_nde(d, "A", "B", "Y", {}, boot);
        const auto n_adj = plugin_nde(d, "A", "B", "Y", {"H"}, boot);
        auto z = [](const PluginEstimate& e, double target) { return std::abs(e.estimate - target) / e.se; };
        out.require(z(t_raw, tau) > 3 && z(n_raw, nde) > 3, std::string(name) + " unadjusted beyond 3 SE");
        out.require(z(t_adj, tau) <= 3 && z(n_adj, nde) <= 3, std::string(name) + " adjusted within 3 SE");
        out.detail << name << ": z(total raw/adj)=" << z(t_raw, tau) << "/" << z(t_adj, tau)
                   << " z(nde raw/adj)=" << z(n_raw, nde) << "/" << z(n_adj, nde) << "; ";
    }
}

void nonidentification_exhibit(Outcome& out) {
    const auto m = builtin("fig2").model();
    const auto report = check_nde_assumptions(m.dag(), "A", "B", "Y", {"H1"});
    const auto& a4 = report[4];
    const bool witness = std::find(a4.witness.begin(), a4.witness.end(), "H2") != a4.witness.end();
    out.require(a4.verdict == Verdict::Violated && witness, "A4 violated with witness H2");
    const double truth = natural_direct_effect(m, "A", "B", "Y").difference;
    const double limit = plugin_nde_limit(m, "A", "B", "Y", {"H1"});
    out.require(std::abs(limit - truth) >= 0.02, "plug-in limit gap >= 0.02");
    out.detail << "A4=" << to_string(a4.verdict) << " oracle nde=" << truth << " plug-in limit=" << limit
               << " gap=" << std::abs(limit - truth);
}

std::string mediator_of(const Scenario& sc) {
    if (!sc.roles.mediator.empty()) return sc.roles.mediator;
    if (!sc.roles.behaviour.empty()) return sc.roles.behaviour.front();
    return sc.roles.mask;
}

StructuralModel random_s1(std::mt19937_64& gen, Coupling coupling) {
    std::uniform_int_distribution<int> permille(0, 1000);
    auto draw = [&] { return permille(gen) / 1000.0; };
    std::vector<double> py(8);
    for (auto& p : py) p = draw();
    return StructuralModel({bernoulli_node("A", {}, {draw()}, coupling),
                            bernoulli_node("BM", {"A"}, {draw(), draw()}, coupling),
                            bernoulli_node("BSC", {"A"}, {draw(), draw()}, coupling),
                            bernoulli_node("Y", {"A", "BM", "BSC"}, py, coupling)});
}

void decomposition_identities(Outcome& out) {
    double worst_two = 0.0;
    double worst_three = 0.0;
    int scenarios = 0;
    for (const auto& name : list_builtin()) {
        const auto sc = builtin(name);
        const auto m = sc.model();
        const auto b = mediator_of(sc);
        const double tau = total_effect(m, sc.roles.exposure, sc.roles.outcome).difference;
        const double nde = natural_direct_effect(m, sc.roles.exposure, b, sc.roles.outcome).difference;
        const double nie = natural_indirect_effect(m, sc.roles.exposure, b, sc.roles.outcome).difference;
        worst_two = std::max(worst_two, std::abs(nde + nie - tau));
        if (!sc.roles.mask.empty() && !sc.roles.contacts.empty()) {
            const auto e = path_specific_effects(m, sc.roles.exposure, sc.roles.mask, sc.roles.contacts,
                                                 sc.roles.outcome);
            worst_three = std::max({worst_three, std::abs(e.residual), std::abs(e.total.difference - tau)});
        }
        ++scenarios;
    }
    std::mt19937_64 gen(2024);
    for (int k = 0; k < 100; ++k) {
        const auto m = random_s1(gen, k % 2 ? Coupling::Independent : Coupling::Monotone);
        const auto e = path_specific_effects(m, "A", "BM", "BSC", "Y");
        const double tau = total_effect(m, "A", "Y").difference;
        worst_three = std::max({worst_three, std::abs(e.residual), std::abs(e.total.difference - tau)});
        for (const char* b : {"BM", "BSC"}) {
            const double nde = natural_direct_effect(m, "A", b, "Y").difference;
            const double nie = natural_indirect_effect(m, "A", b, "Y").difference;
            worst_two = std::max(worst_two, std::abs(nde + nie - tau));
        }
    }
    out.require(worst_two <= 1e-12, "NDE + NIE = tau_rw");
    out.require(worst_three <= 1e-12, "three-term residual");
    out.detail << scenarios << " built-ins + 100 random two-behaviour models; max |NDE+NIE-tau|=" << worst_two
               << " max |residual|=" << worst_three;
}

void dseparation_suite(Outcome& out) {
    std::size_t graphs = 0;
    std::size_t queries = 0;
    std::size_t disagreements = 0;
    for (int n = 1; n <= 5; ++n) {
        for (const auto& adj : oracle::all_dags(n)) {
            const auto dag = oracle::to_dag(adj);
            ++graphs;
            for (int x = 0; x < n; ++x) {
                for (int y = x + 1; y < n; ++y) {
                    for (std::uint32_t z = 0; z < (1u << n); ++z) {
                        if (z >> x & 1u || z >> y & 1u) continue;
                        NodeSet cond;
                        for (int k = 0; k < n; ++k)
                            if (z >> k & 1u) cond.insert(oracle::node_name(k));
                        const bool ours = d_separated(dag, oracle::node_name(x), oracle::node_name(y), cond);
                        if (ours == oracle::open_path_exists(adj, x, y, z)) ++disagreements;
                        ++queries;
                    }
                }
            }
        }
    }
    out.require(disagreements == 0, "exhaustive agreement");
    const auto noedge = builtin("fig3-panel1-noedge").model().dag();
    const auto edge = builtin("fig3-panel1").model().dag();
    const auto yr = builtin("fig3-panel1-yr").model().dag();
    const bool claim1 = d_separated(noedge, "A", "R", {"H"});
    const bool claim2 = !d_separated(edge, "A", "R", {"H"});
    // This variant has Y -> R and no A -> B edge.
    const auto opened = find_open_path(yr, "A", "R", {"H", "Y"});
    const bool claim3 = !yr.has_edge("A", "B") && yr.has_edge("Y", "R") && opened &&
                        format_path(yr, *opened) == "A -> Y <- B -> R";
    out.require(claim1, "A independent of R given H without A->B");
    out.require(claim2, "dependence with A->B");
    out.require(claim3, "conditioning on Y opens a collider path when Y->R");
    out.detail << graphs << " DAGs, " << queries << " queries, " << disagreements << " disagreements; figure claims "
               << claim1 << claim2 << claim3;
}

void misclassification_bracketing(Outcome& out) {
    const auto m = builtin("table1").model();
    const double nde = natural_direct_effect(m, "A", "B", "Y").difference;
    const double tau = total_effect(m, "A", "Y").difference;
    std::vector<Dataset> samples;
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
        samples.push_back(sample_units(m, 1000000, seed));
    for (double p : {0.05, 0.1, 0.2}) {
        const auto corrupted = with_misclassified_copy(m, "B", "B_observed", p);
        const double limit = plugin_nde_limit(corrupted, "A", "B_observed", "Y", {});
        out.require(limit > nde && limit < tau, "exact limit strictly inside for p=" + std::to_string(p));
        int inside = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto noisy = misclassify_mediator(samples[seed - 1], "B", p, 100 + seed);
            const double est = plugin_nde(noisy, "A", "B", "Y", {}, kNoBootstrap).estimate;
            if (est > nde && est < tau) ++inside;
        }
        out.require(inside >= 9, "finite-sample estimate inside for p=" + std::to_string(p));
        out.detail << "p=" << p << ": limit=" << limit << " inside=" << inside << "/10; ";
    }
}

std::vector<AssignmentVector> all_vectors(std::size_t len) {
    std::vector<AssignmentVector> vs;
    for (std::size_t code = 0; code < (std::size_t{1} << len); ++code) {
        AssignmentVector v(len);
        for (std::size_t k = 0; k < len; ++k) v[k] = static_cast<int>(code >> k & 1u);
        vs.push_back(v);
    }
    return vs;
}

void interference_reductions(Outcome& out) {
    UnitTemplate unit;
    unit.pr_b = {0.30, 0.70};
    unit.pr_y = {{{0.25, 0.35}, {0.14, 0.21}}};
    const auto plain = unit_model(unit);
    const double tau = total_effect(plain, "A", "Y").difference;
    const double nde = natural_direct_effect(plain, "A", "B", "Y").difference;
    double worst = 0.0;
    for (auto kind : {SummaryKind::Count, SummaryKind::Fraction}) {
        const GroupedModel gm({1, 2, 3, 4, 5}, unit, kind);
        for (std::size_t i = 0; i < gm.groups(); ++i)
            for (std::size_t j = 0; j < gm.group_size(i); ++j)
                for (const auto& others : all_vectors(gm.group_size(i) - 1)) {
                    worst = std::max(worst, std::abs(individual_total_effect(gm, i, j, others) - tau));
                    worst = std::max(worst, std::abs(individual_nde_interf(gm, i, j, others) - nde));
                }
    }
    out.require(worst <= 1e-12, "reduction to the unit model");

    auto coupled = unit;
    coupled.y_coef = -0.06;
    coupled.b_coef = 0.08;
    coupled.mediator_reads_group = true;
    bool antisymmetric = true;
    for (std::size_t n = 1; n <= 5; ++n) {
        const GroupedModel gm({n}, coupled, SummaryKind::Fraction);
        for (const auto& a : all_vectors(n - 1))
            for (const auto& b : all_vectors(n - 1))
                antisymmetric = antisymmetric && spillover_effect(gm, 0, 0, a, b) == -spillover_effect(gm, 0, 0, b, a);
    }
    out.require(antisymmetric, "spillover antisymmetry");

    auto additive = unit;
    additive.y_coef = -0.05;
    const GroupedModel gm_total({4}, coupled, SummaryKind::Fraction);
    const GroupedModel gm_nde({4}, additive, SummaryKind::Fraction);
    const AssignmentVector a{1, 0, 1};
    const AssignmentVector star{0, 0, 0};
    double worst_z = 0.0;
    auto compare = [&](const MonteCarloEstimate& mc, double exact) {
        worst_z = std::max(worst_z, std::abs(mc.mean - exact) / mc.se);
    };
    compare(monte_carlo_individual(gm_total, EffectKind::Total, 0, 1, a, star, 100000, 31),
            individual_total_effect(gm_total, 0, 1, a));
    compare(monte_carlo_individual(gm_total, EffectKind::Spillover, 0, 1, a, star, 100000, 32),
            spillover_effect(gm_total, 0, 1, a, star));
    compare(monte_carlo_individual(gm_nde, EffectKind::Nde, 0, 2, a, star, 100000, 33),
            individual_nde_interf(gm_nde, 0, 2, a));
    out.require(worst_z <= 4.0, "Monte Carlo within 4 SE");
    out.detail << "max reduction error=" << worst << " antisymmetric=" << antisymmetric
               << " max MC |z|=" << worst_z;
}

void detection_coherence(Outcome& out) {
    int checked = 0;
    for (const char* name : {"fig3-panel1", "fig3-panel1-noedge", "fig3-panel1-yr", "fig3-panel2", "fig3-panel3"}) {
        const auto sc = builtin(name);
        const auto m = sc.model();
        const auto d = sample_units(m, 1000000, 41);
        std::vector<std::vector<std::string>> sets{sc.roles.condition};
        if (m.dag().has_edge("Y", "R")) sets.push_back({"H", "Y"});
        for (const auto& cond : sets) {
            const auto test = alt_outcome_test(d, sc.roles.exposure, sc.roles.probe, cond);
            const auto exact = analytic_contrast(m, sc.roles.exposure, sc.roles.probe, cond);
            const bool nonzero = std::any_of(exact.strata.begin(), exact.strata.end(),
                                             [](const StratumContrast& s) { return std::abs(s.difference) > 1e-12; });
            out.require(test.association == nonzero, std::string(name) + " verdict");
            ++checked;
        }
    }
    const PanelConclusion expected[] = {PanelConclusion::BehaviourRelevantToOutcome,
                                        PanelConclusion::BehaviourRelevantToOutcome, PanelConclusion::Inconclusive};
    const char* panels[] = {"fig3-panel1", "fig3-panel2", "fig3-panel3"};
    for (int k = 0; k < 3; ++k) {
        const auto sc = builtin(panels[k]);
        const auto p = panel_interpretation(sc.model().dag(), sc.roles.exposure, sc.roles.behaviour, sc.roles.outcome,
                                            sc.roles.probe, sc.roles.condition);
        out.require(p.conclusion == expected[k], std::string(panels[k]) + " panel conclusion");
        out.detail << panels[k] << "=" << to_string(p.conclusion) << " ";
    }
    out.detail << "; " << checked << " verdicts compared";
}

std::string capture(const std::string& command) {
    std::string text;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return text;
    char buffer[4096];
    std::size_t got;
    while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) text.append(buffer, got);
    pclose(pipe);
    return text;
}

void determinism(Outcome& out, const std::string& cli) {
    if (cli.empty()) {
        out.require(false, "CLI path not given");
        return;
    }
    const auto command = "\"" + cli + "\" run table1 --seed 7";
    const auto first = capture(command);
    const auto second = capture(command);
    out.require(!first.empty(), "non-empty report");
    out.require(first == second, "byte-identical output");
    out.detail << first.size() << " bytes";
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"table1-reproduction", table1_reproduction},
        {"plugin-consistency", plugin_consistency},
        {"confounding-exhibit", confounding_exhibit},
        {"nonidentification-exhibit", nonidentification_exhibit},
        {"decomposition-identities", decomposition_identities},
        {"dseparation-suite", dseparation_suite},
        {"misclassification-bracketing", misclassification_bracketing},
        {"interference-reductions", interference_reductions},
        {"detection-coherence", detection_coherence},
        {"determinism", [&](Outcome& o) { determinism(o, cli); }},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome out;
        try {
            criteria[k].second(out);
        } catch (const std::exception& e) {
            out.require(false, std::string("exception: ") + e.what());
        }
        failures += !out.pass;
        std::cout << (out.pass ? "PASS" : "FAIL") << " " << k + 1 << " " << criteria[k].first << ": "
                  << out.detail.str() << std::endl;
    }
    std::cout << criteria.size() - failures << "/" << criteria.size() << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
