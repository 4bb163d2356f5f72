// End-to-end acceptance checks. Each numbered check prints one PASS/FAIL
// line; the process exits nonzero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "mrplan/harness.hpp"

using namespace mrplan;

namespace {

int g_failures = 0;

void report(int n, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("[%s] %2d %s%s%s\n", ok ? "PASS" : "FAIL", n, name.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

// Small random instances sized for the brute-force oracle: W x H grid with a
// sprinkling of obstacles, strictly positive costs so optimal plans stay short.
Scenario random_small_instance(std::mt19937_64& rng, int W, int H, int robots,
                               int n_objectives) {
    while (true) {
        Scenario s;
        for (int j = 0; j < n_objectives; ++j) s.objectives.push_back("o" + std::to_string(j));
        std::vector<bool> free_cell(W * H);
        for (auto&& f : free_cell) f = rng() % 10 > 0;  // 10% obstacles
        auto id = [&](int i) { return "v" + std::to_string(i % W) + "_" + std::to_string(i / W); };
        for (int i = 0; i < W * H; ++i)
            if (free_cell[i])
                s.graph.add_vertex(id(i), std::make_pair(double(i % W), double(i / W)));
        const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int i = 0; i < W * H; ++i) {
            if (!free_cell[i]) continue;
            for (int k = 0; k < 4; ++k) {
                int nx = i % W + dx[k], ny = i / W + dy[k];
                if (nx < 0 || nx >= W || ny < 0 || ny >= H || !free_cell[ny * W + nx]) continue;
                CostVector c(n_objectives);
                for (auto& x : c) x = 1.0 + rng() % 2;
                s.graph.add_edge(id(i), id(ny * W + nx), c);
            }
        }
        for (int v = 0; v < s.graph.size(); ++v)
            s.graph.wait_cost[v] = CostVector(n_objectives, 1.0);

        std::vector<int> prio(n_objectives);
        std::iota(prio.begin(), prio.end(), 0);
        for (size_t i = prio.size(); i > 1; --i) std::swap(prio[i - 1], prio[rng() % i]);
        s.contexts = {Context{"c1", LexOrdering{prio}}};
        s.true_context = "c1";
        s.initial_belief = {{"c1", 1.0}};

        std::vector<int> cells;
        for (int v = 0; v < s.graph.size(); ++v) cells.push_back(v);
        for (size_t i = cells.size(); i > 1; --i) std::swap(cells[i - 1], cells[rng() % i]);
        if (static_cast<int>(cells.size()) < 2 * robots) continue;
        for (int r = 0; r < robots; ++r)
            s.robots.push_back(RobotSpec{"r" + std::to_string(r + 1),
                                         s.graph.id_of(cells[2 * r]),
                                         s.graph.id_of(cells[2 * r + 1])});
        if (!validate_scenario(s).empty()) continue;
        // everything reachable from robot 0's start?
        auto dist = hop_distances(s.graph, s.graph.index_of(s.robots[0].start));
        bool connected = true;
        for (const auto& r : s.robots)
            if (dist[s.graph.index_of(r.start)] < 0 || dist[s.graph.index_of(r.goal)] < 0)
                connected = false;
        if (connected) return s;
    }
}

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    int ok = 0;
    for (int i = 0; i < 50; ++i) {
        Scenario s = random_small_instance(rng, 5, 5, 2, 2 + static_cast<int>(rng() % 2));
        const LexOrdering& ord = s.contexts[0].ordering;
        auto oracle = brute_force_lex_oracle(s, ord, 16);
        PlanResult r = lcbs_plan(s, ord);
        if (oracle && r.status == PlanStatus::Success && r.plan->cost == oracle->cost) ++ok;
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(1, "lex-optimality: LCBS equals the brute-force oracle on 50 small instances",
           ok == 50, std::to_string(ok) + "/50 exact matches in " + fmt(secs) + " s");
}

void criterion_2() {
    std::mt19937_64 rng(2002);
    int violations = 0, plans = 0;
    for (int i = 0; i < 200; ++i) {
        GenParams p;
        p.width = 6 + static_cast<int>(rng() % 11);   // 6..16
        p.height = 6 + static_cast<int>(rng() % 11);
        p.robots = 5;
        p.landmarks = 4;
        p.seed = 20000 + i;
        Scenario s = generate(p);
        const LexOrdering& ord = s.find_context(s.true_context)->ordering;

        // a short budget keeps the sweep fast; plans that time out are
        // simply not returned, and only returned plans are in scope here
        LcbsOptions opts;
        opts.budget_seconds = 2.0;
        PlanResult lex = lcbs_plan(s, ord, nullptr, opts);
        if (lex.plan) {
            ++plans;
            if (detect_first_conflict(lex.plan->paths)) ++violations;
        }
        PlanResult scalar = scalarized_cbs(s, ord, weights_for_M(10.0, 3), 2.0);
        if (scalar.plan) {
            ++plans;
            if (detect_first_conflict(scalar.plan->paths)) ++violations;
        }
        // one transit segment: greedily group robots toward the best landmarks
        Belief b0 = Belief::from_scenario(s);
        std::map<std::string, int> n_req;
        std::vector<const LandmarkSpec*> lms;
        for (const auto& lm : s.landmarks) {
            n_req[lm.id] = min_robots_required(lm, b0, p.robots);
            lms.push_back(&lm);
        }
        auto seq = landmark_visit_sequence(n_req, lms, b0);
        WorldGraph g = s.planning_graph();
        std::vector<int> positions;
        for (const auto& r : s.robots) positions.push_back(g.index_of(r.start));
        std::vector<int> available(s.robots.size());
        std::iota(available.begin(), available.end(), 0);
        std::vector<RobotGroup> groups;
        for (const auto* lm : seq) {
            int req = n_req[lm->id];
            if (req > static_cast<int>(available.size())) continue;
            if (expected_entropy_reduction(b0, *lm, req) <= 0.0) continue;
            RobotGroup grp = assign_nearest_robots(available, *lm, req, g, positions);
            for (int m : grp.members)
                available.erase(std::find(available.begin(), available.end(), m));
            groups.push_back(std::move(grp));
        }
        if (!groups.empty()) {
            try {
                auto paths = plan_to_landmarks(s, groups, g, positions, 2.0);
                ++plans;
                if (detect_first_conflict(paths)) ++violations;
            } catch (const TransitInfeasibleError&) {
                // idle robots acting as static obstacles can wall off a site;
                // only produced plans are in scope for this check
            }
        }
    }
    report(2, "conflict-freedom: no planner output contains a conflict (200 instances)",
           violations == 0 && plans > 0,
           std::to_string(plans) + " plans checked, " + std::to_string(violations) +
               " violations");
}

std::vector<CimopResult> g_c3_results;

void criterion_3() {
    int ok = 0;
    g_c3_results.clear();
    for (int i = 0; i < 100; ++i) {
        GenParams p;
        p.width = 9;
        p.height = 9;
        p.robots = 4;
        p.landmarks = 6;
        p.contexts = 3 + i % 3;  // 3..5
        p.redundant_fraction = 0.25;
        p.seed = 30000 + i;
        Scenario s = generate(p);
        CimopResult r = run_cimop(s);
        g_c3_results.push_back(r);
        if (entropy(r.final_belief) == 0 && r.inferred_context == s.true_context) ++ok;
    }
    report(3, "context inference soundness: CIMOP collapses to the true context",
           ok == 100, std::to_string(ok) + "/100 runs sound");
}

void criterion_4() {
    int bad = 0;
    for (const auto& r : g_c3_results) {
        const auto& rows = r.trace.rows;
        for (size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].entropy > rows[i - 1].entropy) ++bad;
            // arrivals at informative landmarks must strictly cut entropy
            if (rows[i].visited.size() > rows[i - 1].visited.size() &&
                rows[i].entropy >= rows[i - 1].entropy)
                ++bad;
        }
    }
    report(4, "entropy monotonicity with strict drops at informative arrivals",
           !g_c3_results.empty() && bad == 0,
           std::to_string(g_c3_results.size()) + " traces checked");
}

void criterion_5() {
    // hand-built: uniform belief over 3 contexts; l_fine yields 2, l_coarse
    // yields 4/3, l_dull yields 0 — the first visited landmark must be l_fine
    Scenario s;
    s.objectives = {"time"};
    for (const char* v : {"h1", "a", "b", "c"}) s.graph.add_vertex(v);
    for (const char* v : {"a", "b", "c"}) {
        s.graph.add_edge("h1", v, {1.0});
        s.graph.add_edge(v, "h1", {1.0});
    }
    for (int v = 0; v < s.graph.size(); ++v) s.graph.wait_cost[v] = {1.0};
    s.contexts = {Context{"c1", LexOrdering{{0}}}, Context{"c2", LexOrdering{{0}}},
                  Context{"c3", LexOrdering{{0}}}};
    s.true_context = "c2";
    s.initial_belief = {{"c1", 1.0 / 3}, {"c2", 1.0 / 3}, {"c3", 1.0 / 3}};
    s.landmarks = {
        LandmarkSpec{"l_coarse", {"a"}, {Tier{1, {{"c1"}, {"c2", "c3"}}}}, false},
        LandmarkSpec{"l_dull", {"b"}, {Tier{1, {{"c1", "c2", "c3"}}}}, false},
        LandmarkSpec{"l_fine", {"c"}, {Tier{1, {{"c1"}, {"c2"}, {"c3"}}}}, false},
    };
    s.robots = {RobotSpec{"r1", "h1", "h1"}};

    Belief b0 = Belief::from_scenario(s);
    bool reduction_exact =
        std::abs(expected_entropy_reduction(b0, s.landmarks[0], 1) - 4.0 / 3.0) < 1e-12;

    std::map<std::string, int> n_req;
    std::vector<const LandmarkSpec*> lms;
    for (const auto& lm : s.landmarks) {
        n_req[lm.id] = min_robots_required(lm, b0, 1);
        lms.push_back(&lm);
    }
    auto seq = landmark_visit_sequence(n_req, lms, b0);
    bool greedy_first = !seq.empty() && seq[0]->id == "l_fine";

    CimopResult r = run_cimop(s);
    bool visited_first =
        !r.trace.rows.empty() && !r.trace.rows.back().visited.empty() &&
        r.trace.rows.back().visited.front() == "l_fine";
    bool collapsed_in_one = r.trace.rows.back().visited.size() == 1;

    report(5, "greedy ordering exactness: first assignment maximizes expected reduction",
           reduction_exact && greedy_first && visited_first && collapsed_in_one,
           "two-cell reduction 4/3 exact; first visit l_fine");
}

void criterion_6() {
    std::vector<double> fractions = {0.0, 0.25, 0.5, 0.75};
    bool ok = true;
    std::string detail;
    for (double frac : fractions) {
        double greedy_sum = 0, random_sum = 0;
        for (int seed = 0; seed < 20; ++seed) {
            GenParams p;
            p.width = 10;
            p.height = 10;
            p.robots = 4;
            p.landmarks = 8;
            p.redundant_fraction = frac;
            p.seed = 60000 + seed;
            Scenario s = generate(p);
            greedy_sum += run_cimop(s).trace.cumulative_entropy;
            random_sum += random_inference_baseline(s, 60000 + seed).trace.cumulative_entropy;
        }
        double greedy_mean = greedy_sum / 20, random_mean = random_sum / 20;
        if (greedy_mean > random_mean) ok = false;
        if (frac >= 0.25 && !(greedy_mean < random_mean)) ok = false;
        detail += "f=" + fmt(frac) + ": " + fmt(greedy_mean) + " vs " + fmt(random_mean) + "; ";
    }
    report(6, "cumulative-entropy dominance over the random baseline", ok, detail);
}

void criterion_7() {
    // 15 oracle-sized instances: 5 per domain flavor, with one engineered to
    // defeat geometric scalarization
    std::vector<std::pair<std::string, Scenario>> suite;
    auto add_flavor = [&](Flavor f, int count, int seed_base) {
        for (int i = 0; i < count; ++i) {
            GenParams p;
            p.flavor = f;
            p.width = 5;
            p.height = 6;
            p.robots = 3;
            p.landmarks = 3;
            p.obstacle_density = 0.2;
            p.seed = seed_base + i;
            suite.push_back({flavor_to_string(f) + std::to_string(i), generate(p)});
        }
    };
    add_flavor(Flavor::Salp, 4, 700);
    add_flavor(Flavor::Warehouse, 5, 710);
    add_flavor(Flavor::Firefight, 5, 720);

    // per-domain M: estimated once from each objective set's first instance.
    // the sampler legitimately gives up when a walk never reaches its goal;
    // reseed and try again, that is a property of the stream, not the planner
    auto estimate_reseeding = [](const Scenario& s) {
        for (unsigned long long seed = 7;; ++seed) {
            try {
                return estimate_M(s, s.find_context(s.true_context)->ordering, 50, seed);
            } catch (const SamplingError&) {
                if (seed >= 107) throw;
            }
        }
    };
    std::map<std::vector<std::string>, ScalarWeights> weights;
    for (const auto& [name, s] : suite)
        if (!weights.count(s.objectives))
            weights[s.objectives] = estimate_reseeding(s);
    double salp_m = weights.at(suite.front().second.objectives).M;
    suite.insert(suite.begin() + 4, {"salp_mviol", make_m_violation_scenario(salp_m)});

    std::vector<Scenario> instances;
    for (const auto& [name, s] : suite) instances.push_back(s);

    auto lcbs_planner = [](const Scenario& s, double budget) {
        LcbsOptions o;
        o.budget_seconds = budget;
        return lcbs_plan(s, s.find_context(s.true_context)->ordering, nullptr, o);
    };
    bool ok = true;
    std::string detail = "lcbs:";
    for (double budget : {120.0, 60.0, 30.0, 10.0, 5.0}) {
        double rate = success_rate(instances, lcbs_planner, budget, 16);
        detail += " " + fmt(budget) + "s=" + fmt(rate);
        if (rate != 1.0) ok = false;
    }
    auto scalar_planner = [&](const Scenario& s, double budget) {
        return scalarized_cbs(s, s.find_context(s.true_context)->ordering,
                              weights.at(s.objectives), budget);
    };
    double scalar_rate = success_rate(instances, scalar_planner, 120.0, 16);
    detail += "; scalarized 120s=" + fmt(scalar_rate);
    if (!(scalar_rate < 1.0)) ok = false;
    report(7, "time-budget robustness: LCBS holds 100% success, scalarized does not", ok,
           detail);
}

void criterion_8() {
    std::mt19937_64 rng(8008);
    int ok = 0;
    for (int i = 0; i < 20; ++i) {
        Scenario s = random_small_instance(rng, 5, 5, 3, 1);
        LexOrdering ord{{0}};
        PlanResult lex = lcbs_plan(s, ord);
        std::vector<int> starts, goals;
        WorldGraph g = s.planning_graph();
        for (const auto& r : s.robots) {
            starts.push_back(g.index_of(r.start));
            goals.push_back(g.index_of(r.goal));
        }
        std::map<std::pair<int, int>, double> edge_cost;
        for (int v = 0; v < g.size(); ++v) {
            edge_cost[{v, v}] = g.wait_cost[v][0];
            for (const auto& e : g.out[v]) edge_cost[{v, e.to}] = e.cost[0];
        }
        auto step = [&](int from, int to) { return edge_cost.at({from, to}); };
        auto heur = [&](int v, int goal) { return grid_heuristic(g, v, goal, 1)[0]; };
        auto plain = cbs_scalar(g, starts, goals, step, heur, {}, 0.0);
        if (lex.status == PlanStatus::Success && plain.status == PlanStatus::Success &&
            lex.plan->cost[0] == plain.scalar_cost)
            ++ok;
    }
    report(8, "single-objective reduction: LCBS equals plain CBS on 20 instances",
           ok == 20, std::to_string(ok) + "/20 equal");
}

void criterion_9() {
    std::mt19937_64 rng(9009);
    LexOrdering ord{{2, 0, 1}};
    int bad = 0;
    for (int i = 0; i < 10000; ++i) {
        auto rnd = [&] {
            CostVector v(3);
            for (auto& x : v) x = static_cast<double>(rng() % 6);
            return v;
        };
        CostVector u = rnd(), v = rnd(), w = rnd();
        int verdicts = (lex_compare(u, v, ord) == LexResult::Less) +
                       (lex_compare(u, v, ord) == LexResult::Equal) +
                       (lex_compare(u, v, ord) == LexResult::Greater);
        if (verdicts != 1) ++bad;
        if (lex_less(u, v, ord) && lex_less(v, w, ord) && !lex_less(u, w, ord)) ++bad;
        if (lex_less(u, v, ord) && !lex_less(add(u, w), add(v, w), ord)) ++bad;
    }
    report(9, "lex-comparator laws on 10000 random triples", bad == 0,
           std::to_string(bad) + " violations");
}

void criterion_10() {
    Belief b;
    b.context_ids = {"c1", "c2", "c3"};
    b.probs = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    Belief u = update_belief(b, Observation{{"c1", "c2"}, std::nullopt});
    bool exact = std::abs(u.probs[0] - 0.5) < 1e-12 && std::abs(u.probs[1] - 0.5) < 1e-12 &&
                 u.probs[2] == 0.0;
    Belief same = update_belief(b, Observation{{"c1", "c2", "c3"}, std::nullopt});
    bool identity = same.probs == b.probs;
    report(10, "belief-update exactness and uninformative identity", exact && identity);
}

void criterion_11() {
    GenParams p;
    p.width = 9;
    p.height = 9;
    p.robots = 4;
    p.landmarks = 4;
    p.seed = 1100;
    Scenario s = with_slip_model(generate(p), 0.1);  // 0.9 advance / 0.1 stay
    RunRecord rec = run_two_stage(s, 60.0);
    int ok = 0;
    if (rec.status == RunStatus::Success) {
        WorldGraph g = s.planning_graph();
        for (unsigned long long seed = 1; seed <= 50; ++seed) {
            ExecutionResult ex = simulate_execution(s, rec, seed, 50);
            if (ex.status != ExecStatus::Success) continue;
            bool at_goals = true;
            for (size_t i = 0; i < s.robots.size(); ++i)
                if (ex.realized[i].back() != g.index_of(s.robots[i].goal) ||
                    ex.replans[i] > 50)
                    at_goals = false;
            if (at_goals) ++ok;
        }
    }
    report(11, "execution repair termination under a 0.9/0.1 slip model", ok >= 48,
           std::to_string(ok) + "/50 runs reached all goals within the replan budget");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::printf("%d of 11 criteria passed\n", 11 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
