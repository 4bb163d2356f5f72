#pragma once

#include <string>
#include <vector>

#include "mrplan/belief.hpp"
#include "mrplan/core.hpp"

namespace testutil {

using namespace mrplan;

inline CostVector wait0(int n) { return CostVector(n, 0.0); }

// A -- B -- C line, bidirectional, move cost (1,0), wait (1,0).
inline Scenario line_scenario() {
    Scenario s;
    s.objectives = {"time", "extra"};
    for (const char* v : {"A", "B", "C"}) s.graph.add_vertex(v);
    for (auto [a, b] : {std::pair{"A", "B"}, {"B", "C"}}) {
        s.graph.add_edge(a, b, {1.0, 0.0});
        s.graph.add_edge(b, a, {1.0, 0.0});
    }
    for (int v = 0; v < s.graph.size(); ++v) s.graph.wait_cost[v] = {1.0, 0.0};
    Context c{"c1", LexOrdering{{0, 1}}};
    s.contexts = {c};
    s.true_context = "c1";
    s.initial_belief = {{"c1", 1.0}};
    s.robots = {RobotSpec{"r1", "A", "C"}};
    return s;
}

// A splits to B (route cost (3,1)) and C (route cost (2,5)), both rejoin at D.
inline Scenario diamond_scenario() {
    Scenario s;
    s.objectives = {"o0", "o1"};
    for (const char* v : {"A", "B", "C", "D"}) s.graph.add_vertex(v);
    s.graph.add_edge("A", "B", {1.0, 1.0});
    s.graph.add_edge("B", "D", {2.0, 0.0});
    s.graph.add_edge("A", "C", {1.0, 2.0});
    s.graph.add_edge("C", "D", {1.0, 3.0});
    for (int v = 0; v < s.graph.size(); ++v) s.graph.wait_cost[v] = {1.0, 1.0};
    s.contexts = {Context{"c1", LexOrdering{{0, 1}}}};
    s.true_context = "c1";
    s.initial_belief = {{"c1", 1.0}};
    s.robots = {RobotSpec{"r1", "A", "D"}};
    return s;
}

// A -- B -- C path with a pocket P off B; two robots swapping ends.
inline Scenario pocket_scenario() {
    Scenario s;
    s.objectives = {"time", "extra"};
    for (const char* v : {"A", "B", "C", "P"}) s.graph.add_vertex(v);
    for (auto [a, b] : {std::pair{"A", "B"}, {"B", "C"}, {"B", "P"}}) {
        s.graph.add_edge(a, b, {1.0, 0.0});
        s.graph.add_edge(b, a, {1.0, 0.0});
    }
    for (int v = 0; v < s.graph.size(); ++v) s.graph.wait_cost[v] = {1.0, 0.0};
    s.contexts = {Context{"c1", LexOrdering{{0, 1}}}};
    s.true_context = "c1";
    s.initial_belief = {{"c1", 1.0}};
    s.robots = {RobotSpec{"r1", "A", "C"}, RobotSpec{"r2", "C", "A"}};
    return s;
}

// Two landmarks that jointly distinguish three contexts: l1 splits {c1} from
// {c2,c3}, l2 splits {c2} from {c1,c3}. Robots sit one step away.
inline Scenario two_landmark_scenario(const std::string& true_context = "c2") {
    Scenario s;
    s.objectives = {"time"};
    for (const char* v : {"h1", "h2", "s1", "s2", "g1", "g2"}) s.graph.add_vertex(v);
    for (auto [a, b] : {std::pair{"h1", "s1"}, {"h2", "s2"}, {"s1", "g1"}, {"s2", "g2"},
                        {"s1", "s2"}}) {
        s.graph.add_edge(a, b, {1.0});
        s.graph.add_edge(b, a, {1.0});
    }
    for (int v = 0; v < s.graph.size(); ++v) s.graph.wait_cost[v] = {1.0};
    s.contexts = {Context{"c1", LexOrdering{{0}}}, Context{"c2", LexOrdering{{0}}},
                  Context{"c3", LexOrdering{{0}}}};
    s.true_context = true_context;
    s.initial_belief = {{"c1", 1.0 / 3}, {"c2", 1.0 / 3}, {"c3", 1.0 / 3}};
    s.landmarks = {
        LandmarkSpec{"l1", {"s1"}, {Tier{1, {{"c1"}, {"c2", "c3"}}}}, false},
        LandmarkSpec{"l2", {"s2"}, {Tier{1, {{"c2"}, {"c1", "c3"}}}}, false},
    };
    s.robots = {RobotSpec{"r1", "h1", "g1"}, RobotSpec{"r2", "h2", "g2"}};
    return s;
}

inline LandmarkSpec tiered_landmark() {
    return LandmarkSpec{"lt",
                        {"x1", "x2", "x3", "x4"},
                        {Tier{2, {{"c1"}, {"c2", "c3"}}}, Tier{4, {{"c1"}, {"c2"}, {"c3"}}}},
                        false};
}

inline Belief uniform3() {
    Belief b;
    b.context_ids = {"c1", "c2", "c3"};
    b.probs = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    return b;
}

}  // namespace testutil
