#include <doctest.h>

#include <algorithm>
#include <random>

#include "dsep_oracle.hpp"
#include "vaxmed/errors.hpp"
#include "vaxmed/graph.hpp"

using namespace vaxmed;

namespace {

CausalDag fig1_panel3() {
    return CausalDag({"H", "W", "A", "B", "Y"},
                     {{"H", "A"}, {"H", "B"}, {"H", "Y"}, {"W", "B"}, {"A", "B"}, {"A", "Y"}, {"B", "Y"}});
}

CausalDag fig2() {
    return CausalDag({"H1", "A", "H2", "B", "Y"}, {{"H1", "A"},
                                                  {"H1", "H2"},
                                                  {"A", "H2"},
                                                  {"H2", "B"},
                                                  {"H2", "Y"},
                                                  {"A", "B"},
                                                  {"B", "Y"},
                                                  {"A", "Y"},
                                                  {"H1", "B"},
                                                  {"H1", "Y"}});
}

CausalDag fig3_panel1(bool a_to_b, bool y_to_r) {
    EdgeList e{{"H", "A"}, {"H", "B"}, {"H", "Y"}, {"H", "R"}, {"B", "Y"}, {"B", "R"}, {"A", "Y"}};
    if (a_to_b) e.push_back({"A", "B"});
    if (y_to_r) e.push_back({"Y", "R"});
    return CausalDag({"H", "A", "B", "Y", "R"}, e);
}

}  // namespace

TEST_CASE("construction rejects malformed graphs") {
    CHECK_THROWS_AS(CausalDag({}, {}), InputError);
    CHECK_THROWS_AS(CausalDag({"A", "A"}, {}), InputError);
    CHECK_THROWS_AS(CausalDag({"A"}, {{"A", "B"}}), InputError);
    CHECK_THROWS_AS(CausalDag({"A"}, {{"A", "A"}}), InputError);
    CHECK_THROWS_AS(CausalDag({"A", "B"}, {{"A", "B"}, {"A", "B"}}), InputError);
}

TEST_CASE("validate reports a witness cycle") {
    const CausalDag good({"A", "B"}, {{"A", "B"}});
    CHECK(validate(good).valid);

    const CausalDag two({"A", "B"}, {{"A", "B"}, {"B", "A"}});
    const auto r = validate(two);
    CHECK_FALSE(r.valid);
    REQUIRE(r.cycle.size() == 3);
    CHECK(r.cycle.front() == r.cycle.back());
    CHECK_THROWS_AS(d_separated(two, "A", "B", {}), InputError);

    const CausalDag three({"A", "B", "C", "D"}, {{"A", "B"}, {"B", "C"}, {"C", "A"}, {"C", "D"}});
    const auto r3 = validate(three);
    CHECK_FALSE(r3.valid);
    for (std::size_t k = 0; k + 1 < r3.cycle.size(); ++k) CHECK(three.has_edge(r3.cycle[k], r3.cycle[k + 1]));
}

TEST_CASE("ancestors and descendants are strict") {
    const auto g = fig1_panel3();
    CHECK(g.ancestors("Y") == NodeSet{"H", "W", "A", "B"});
    CHECK(g.descendants("A") == NodeSet{"B", "Y"});
    CHECK(g.ancestors("H").empty());
    CHECK(g.is_acyclic());
    CHECK(g.topological_order().size() == 5);
}

TEST_CASE("d-separation on textbook shapes") {
    const CausalDag chain({"X", "M", "Y"}, {{"X", "M"}, {"M", "Y"}});
    CHECK_FALSE(d_separated(chain, "X", "Y", {}));
    CHECK(d_separated(chain, "X", "Y", {"M"}));

    const CausalDag collider({"X", "C", "Y", "D"}, {{"X", "C"}, {"Y", "C"}, {"C", "D"}});
    CHECK(d_separated(collider, "X", "Y", {}));
    CHECK_FALSE(d_separated(collider, "X", "Y", {"C"}));
    CHECK_FALSE(d_separated(collider, "X", "Y", {"D"}));

    CHECK_THROWS_AS(d_separated(chain, "X", "X", {}), InputError);
    CHECK_THROWS_AS(d_separated(chain, "X", "Y", {"X"}), InputError);
    CHECK_THROWS_AS(d_separated(chain, "X", "Q", {}), InputError);
}

TEST_CASE("d-separation agrees with open-path enumeration on every DAG up to four nodes") {
    for (int n = 2; n <= 4; ++n) {
        for (const auto& adj : oracle::all_dags(n)) {
            const auto dag = oracle::to_dag(adj);
            for (int x = 0; x < n; ++x) {
                for (int y = x + 1; y < n; ++y) {
                    for (std::uint32_t z = 0; z < (1u << n); ++z) {
                        if ((z >> x & 1u) || (z >> y & 1u)) continue;
                        NodeSet zs;
                        for (int v = 0; v < n; ++v)
                            if (z >> v & 1u) zs.insert(oracle::node_name(v));
                        const bool expected = !oracle::open_path_exists(adj, x, y, z);
                        const auto xs = oracle::node_name(x);
                        const auto ys = oracle::node_name(y);
                        REQUIRE(d_separated(dag, xs, ys, zs) == expected);
                        REQUIRE(find_open_path(dag, xs, ys, zs).has_value() == !expected);
                    }
                }
            }
        }
    }
}

TEST_CASE("d-separation agrees with open-path enumeration on random ten-node DAGs") {
    std::mt19937_64 gen(20240611);
    std::bernoulli_distribution edge(0.25);
    std::bernoulli_distribution cond(0.3);
    const int n = 10;
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), gen);
        oracle::Matrix adj(n, std::vector<bool>(n, false));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (edge(gen)) adj[order[i]][order[j]] = true;
        const auto dag = oracle::to_dag(adj);
        for (int q = 0; q < 20; ++q) {
            const int x = static_cast<int>(gen() % n);
            int y = static_cast<int>(gen() % n);
            if (x == y) y = (y + 1) % n;
            std::uint32_t z = 0;
            NodeSet zs;
            for (int v = 0; v < n; ++v) {
                if (v != x && v != y && cond(gen)) {
                    z |= 1u << v;
                    zs.insert(oracle::node_name(v));
                }
            }
            REQUIRE(d_separated(dag, oracle::node_name(x), oracle::node_name(y), zs) ==
                    !oracle::open_path_exists(adj, x, y, z));
        }
    }
}

TEST_CASE("open path witness is a real open path") {
    const auto g = fig3_panel1(false, true);
    const auto path = find_open_path(g, "A", "R", {"H", "Y"});
    REQUIRE(path);
    CHECK(path->front() == "A");
    CHECK(path->back() == "R");
    CHECK(format_path(g, {"A", "Y", "B", "R"}) == "A -> Y <- B -> R");
}

TEST_CASE("alternative-outcome graph claims") {
    CHECK(d_separated(fig3_panel1(false, false), "A", "R", {"H"}));
    CHECK_FALSE(d_separated(fig3_panel1(true, false), "A", "R", {"H"}));
    // With Y -> R, A reaches R through Y; conditioning on Y also opens A -> Y <- B -> R.
    CHECK_FALSE(d_separated(fig3_panel1(false, true), "A", "R", {"H"}));
    CHECK_FALSE(d_separated(fig3_panel1(false, true), "A", "R", {"H", "Y"}));
}

TEST_CASE("a common cause of behaviour and R stays blocked at the behaviour collider") {
    auto base = fig3_panel1(false, false);
    std::vector<std::string> nodes = base.nodes();
    nodes.push_back("C2");
    EdgeList edges = base.edges();
    edges.push_back({"C2", "B"});
    edges.push_back({"C2", "R"});
    const CausalDag with_c2(nodes, edges);
    CHECK(d_separated(base, "A", "R", {"H"}) == d_separated(with_c2, "A", "R", {"H"}));
    CHECK(d_separated(with_c2, "A", "R", {"H"}));
}

TEST_CASE("graph surgery") {
    const auto g = fig1_panel3();
    const auto cut = remove_edges(g, {{"A", "B"}});
    CHECK_FALSE(cut.has_edge("A", "B"));
    CHECK(cut.edges().size() == g.edges().size() - 1);
    CHECK_THROWS_AS(remove_edges(g, {{"B", "A"}}), InputError);
    const auto out = remove_outgoing(g, "A");
    CHECK(out.children("A").empty());
    CHECK(out.parents("A") == g.parents("A"));
}

TEST_CASE("exposure-induced confounders") {
    CHECK(find_exposure_induced_confounders(fig2(), "A", "B", "Y") == NodeSet{"H2"});
    CHECK(find_exposure_induced_confounders(fig1_panel3(), "A", "B", "Y").empty());
}

TEST_CASE("identification assumptions") {
    SUBCASE("panel III with L = {H} satisfies all four") {
        const auto rep = check_nde_assumptions(fig1_panel3(), "A", "B", "Y", {"H"});
        CHECK(rep.all_hold());
    }
    SUBCASE("panel III without adjustment violates the first three") {
        const auto rep = check_nde_assumptions(fig1_panel3(), "A", "B", "Y", {});
        CHECK(rep[1].verdict == Verdict::Violated);
        CHECK(rep[2].verdict == Verdict::Violated);
        CHECK(rep[3].verdict == Verdict::Violated);
        CHECK(rep[4].verdict == Verdict::HoldsGraphically);
        CHECK(rep[1].witness.front() == "A");
        CHECK(rep[1].witness.back() == "Y");
    }
    SUBCASE("panel I holds unconditionally") {
        const CausalDag p1({"A", "B", "Y"}, {{"A", "B"}, {"A", "Y"}, {"B", "Y"}});
        const auto rep = check_nde_assumptions(p1, "A", "B", "Y", {});
        CHECK(rep.all_hold());
        CHECK(rep.summary() ==
              "A1=holds-graphically; A2=holds-graphically; A3=holds-graphically; A4=holds-graphically");
    }
    SUBCASE("figure 2 violates assumption 4 with witness H2") {
        const auto rep = check_nde_assumptions(fig2(), "A", "B", "Y", {"H1"});
        CHECK(rep[4].verdict == Verdict::Violated);
        CHECK(rep[4].witness == std::vector<std::string>{"H2"});
        CHECK(rep[1].verdict == Verdict::HoldsGraphically);
        CHECK(rep[3].verdict == Verdict::HoldsGraphically);
    }
    SUBCASE("overlapping roles are rejected") {
        CHECK_THROWS_AS(check_nde_assumptions(fig1_panel3(), "A", "A", "Y", {}), InputError);
        CHECK_THROWS_AS(check_nde_assumptions(fig1_panel3(), "A", "B", "Y", {"B"}), InputError);
    }
}
