#include <doctest.h>

#include "mrplan/baselines.hpp"
#include "mrplan/cimop.hpp"
#include "mrplan/harness.hpp"
#include "test_util.hpp"

using namespace mrplan;
using namespace testutil;

TEST_CASE("estimate_M is one past the worst observed lower-priority cost") {
    // a single forced walk makes the sample deterministic
    Scenario s;
    s.objectives = {"o0", "o1"};
    s.graph.add_vertex("A");
    s.graph.add_vertex("B");
    s.graph.add_edge("A", "B", {5.0, 40.0});
    s.graph.wait_cost[0] = {1.0, 0.0};
    s.graph.wait_cost[1] = {1.0, 0.0};
    s.contexts = {Context{"c1", LexOrdering{{0, 1}}}};
    s.true_context = "c1";
    s.initial_belief = {{"c1", 1.0}};
    s.robots = {RobotSpec{"r1", "A", "B"}};
    ScalarWeights w = estimate_M(s, LexOrdering{{0, 1}}, 50, 3);
    CHECK(w.M == 41.0);
    CHECK(w.weights == std::vector<double>{41.0, 1.0});
}

TEST_CASE("estimate_M with one objective collapses to unit weight") {
    Scenario s = two_landmark_scenario();
    s.robots = {RobotSpec{"r1", "h1", "g1"}};
    ScalarWeights w = estimate_M(s, LexOrdering{{0}}, 50, 1);
    CHECK(w.weights == std::vector<double>{1.0});
}

TEST_CASE("estimate_M raises when walks cannot reach the goal") {
    Scenario s;
    s.objectives = {"o0", "o1"};
    s.graph.add_vertex("A");
    s.graph.add_vertex("B");
    s.graph.add_vertex("T");  // trap: A only leads to T, which self-serves nothing
    s.graph.add_edge("A", "T", {1.0, 1.0});
    for (int v = 0; v < 3; ++v) s.graph.wait_cost[v] = {1.0, 0.0};
    s.contexts = {Context{"c1", LexOrdering{{0, 1}}}};
    s.true_context = "c1";
    s.initial_belief = {{"c1", 1.0}};
    s.robots = {RobotSpec{"r1", "A", "B"}};
    CHECK_THROWS_AS(estimate_M(s, LexOrdering{{0, 1}}, 5, 1), SamplingError);
}

TEST_CASE("scalarized CBS agrees with LCBS when costs stay under M") {
    Scenario s = pocket_scenario();
    LexOrdering ord{{0, 1}};
    ScalarWeights w = weights_for_M(100.0, 2);
    PlanResult scalar = scalarized_cbs(s, ord, w);
    PlanResult lex = lcbs_plan(s, ord);
    REQUIRE(scalar.status == PlanStatus::Success);
    REQUIRE(lex.status == PlanStatus::Success);
    CHECK(scalar.plan->cost == lex.plan->cost);
}

TEST_CASE("scalarized CBS falls for costs beyond M") {
    double M = 40.0;
    Scenario s = make_m_violation_scenario(M);
    LexOrdering ord = s.contexts[0].ordering;
    ScalarWeights w = weights_for_M(M, 3);
    PlanResult scalar = scalarized_cbs(s, ord, w);
    PlanResult lex = lcbs_plan(s, ord);
    REQUIRE(scalar.status == PlanStatus::Success);
    REQUIRE(lex.status == PlanStatus::Success);
    // scalar takes the route that is cheap in weighted terms but lex-worse
    CHECK(scalar.plan->cost[0] == 1.0);
    CHECK(lex.plan->cost[0] == 0.0);
    CHECK(lex_less(lex.plan->cost, scalar.plan->cost, ord));
    auto oracle = brute_force_lex_oracle(s, ord, 8);
    REQUIRE(oracle.has_value());
    CHECK(lex.plan->cost == oracle->cost);
    CHECK(scalar.plan->cost != oracle->cost);
}

TEST_CASE("oracle matches la_star for a single robot") {
    Scenario s = line_scenario();
    LexOrdering ord{{0, 1}};
    auto oracle = brute_force_lex_oracle(s, ord, 8);
    REQUIRE(oracle.has_value());
    PlanResult lex = lcbs_plan(s, ord);
    CHECK(oracle->cost == lex.plan->cost);
    CHECK(oracle->cost == CostVector{2.0, 0.0});
}

TEST_CASE("oracle resolves the pocket swap") {
    Scenario s = pocket_scenario();
    LexOrdering ord{{0, 1}};
    auto oracle = brute_force_lex_oracle(s, ord, 10);
    REQUIRE(oracle.has_value());
    CHECK(!detect_first_conflict(oracle->plan.paths).has_value());
    // unconstrained sum of arrival times is 4; the dodge through the pocket
    // costs one wait and two extra moves
    CHECK(oracle->cost[0] == 7.0);
    PlanResult lex = lcbs_plan(s, ord);
    CHECK(lex.plan->cost == oracle->cost);
}

TEST_CASE("oracle declares the bare swap infeasible") {
    Scenario s = pocket_scenario();
    // remove the pocket: robots must swap on a path graph
    Scenario bare;
    bare.objectives = s.objectives;
    for (const char* v : {"A", "B", "C"}) bare.graph.add_vertex(v);
    for (auto [a, b] : {std::pair{"A", "B"}, {"B", "C"}}) {
        bare.graph.add_edge(a, b, {1.0, 0.0});
        bare.graph.add_edge(b, a, {1.0, 0.0});
    }
    for (int v = 0; v < 3; ++v) bare.graph.wait_cost[v] = {1.0, 0.0};
    bare.contexts = s.contexts;
    bare.true_context = s.true_context;
    bare.initial_belief = s.initial_belief;
    bare.robots = s.robots;
    CHECK(!brute_force_lex_oracle(bare, LexOrdering{{0, 1}}, 16).has_value());
}

TEST_CASE("oracle guards refuse oversized inputs") {
    Scenario s = pocket_scenario();
    CHECK_THROWS_AS(brute_force_lex_oracle(s, LexOrdering{{0, 1}}, 17), OracleGuardError);
    Scenario many = s;
    many.robots = {RobotSpec{"r1", "A", "A"}, RobotSpec{"r2", "B", "B"},
                   RobotSpec{"r3", "C", "C"}, RobotSpec{"r4", "P", "P"}};
    CHECK_THROWS_AS(brute_force_lex_oracle(many, LexOrdering{{0, 1}}, 8), OracleGuardError);
}

TEST_CASE("oracle cost is invariant under robot relabeling") {
    Scenario s = pocket_scenario();
    LexOrdering ord{{0, 1}};
    auto a = brute_force_lex_oracle(s, ord, 10);
    std::swap(s.robots[0], s.robots[1]);
    auto b = brute_force_lex_oracle(s, ord, 10);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->cost == b->cost);
}

TEST_CASE("random baseline is deterministic in its seed") {
    Scenario s = two_landmark_scenario("c3");
    CimopResult a = random_inference_baseline(s, 5);
    CimopResult b = random_inference_baseline(s, 5);
    CHECK(a.inferred_context == b.inferred_context);
    CHECK(a.trace.total_steps == b.trace.total_steps);
    CHECK(a.trace.cumulative_entropy == b.trace.cumulative_entropy);
}

TEST_CASE("random baseline matches CIMOP when there is no ordering freedom") {
    Scenario s = two_landmark_scenario("c1");
    s.landmarks = {s.landmarks[0]};  // single informative landmark
    CimopResult greedy = run_cimop(s);
    CimopResult rnd = random_inference_baseline(s, 9);
    CHECK(greedy.inferred_context == rnd.inferred_context);
    CHECK(greedy.trace.total_steps == rnd.trace.total_steps);
    CHECK(greedy.trace.cumulative_entropy == rnd.trace.cumulative_entropy);
}

TEST_CASE("random baseline also collapses to the truth") {
    for (unsigned long long seed = 0; seed < 5; ++seed) {
        Scenario s = two_landmark_scenario("c3");
        CimopResult r = random_inference_baseline(s, seed);
        CHECK(r.inferred_context == "c3");
        CHECK(entropy(r.final_belief) == 0);
    }
}
