#include "mrplan/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <unordered_map>

namespace mrplan {

ScalarWeights weights_for_M(double M, int n) {
    ScalarWeights w;
    w.M = M;
    w.weights.resize(n);
    for (int j = 0; j < n; ++j) w.weights[j] = std::pow(M, n - 1 - j);
    return w;
}

ScalarWeights estimate_M(const Scenario& s, const LexOrdering& ord, int samples,
                         unsigned long long seed) {
    const int n = s.n_objectives();
    if (n == 1) return weights_for_M(1.0, 1);

    WorldGraph g = s.planning_graph();
    std::mt19937_64 rng(seed);
    const int cap = 2 * g.size();
    double max_lower = 0.0;

    for (const auto& robot : s.robots) {
        int start = g.index_of(robot.start);
        int goal = g.index_of(robot.goal);
        for (int k = 0; k < samples; ++k) {
            bool reached = false;
            CostVector walk_cost;
            for (int attempt = 0; attempt < 10 && !reached; ++attempt) {
                walk_cost.assign(n, 0.0);
                int cur = start;
                for (int step = 0; step < cap && cur != goal; ++step) {
                    const auto& adj = g.out[cur];
                    if (adj.empty()) break;
                    const auto& e = adj[rng() % adj.size()];
                    walk_cost = add(walk_cost, e.cost);
                    cur = e.to;
                }
                reached = (cur == goal);
            }
            if (!reached)
                throw SamplingError("estimate_M: no random walk from " + robot.start + " reached " +
                                    robot.goal + " within " + std::to_string(cap) + " steps");
            for (int j = 1; j < n; ++j)
                max_lower = std::max(max_lower, walk_cost[ord.priority[j]]);
        }
    }
    return weights_for_M(1.0 + max_lower, n);
}

PlanResult scalarized_cbs(const Scenario& s, const LexOrdering& ord, const ScalarWeights& w,
                          double budget_seconds) {
    WorldGraph g = s.planning_graph();
    const int n = s.n_objectives();
    const int d = static_cast<int>(s.robots.size());

    auto scalarize = [&](const CostVector& c) {
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += w.weights[j] * c[ord.priority[j]];
        return v;
    };

    std::map<std::pair<int, int>, double> edge_scalar;
    for (int v = 0; v < g.size(); ++v) {
        edge_scalar[{v, v}] = scalarize(g.wait_cost[v]);
        for (const auto& e : g.out[v]) edge_scalar[{v, e.to}] = scalarize(e.cost);
    }
    auto step_cost = [&](int from, int to) { return edge_scalar.at({from, to}); };

    std::vector<int> starts(d), goals(d);
    std::map<int, VectorHeuristic> vec_h;
    for (int i = 0; i < d; ++i) {
        starts[i] = g.index_of(s.robots[i].start);
        goals[i] = g.index_of(s.robots[i].goal);
        if (!vec_h.count(goals[i])) vec_h[goals[i]] = make_grid_heuristic(g, goals[i], n);
    }
    auto heuristic = [&](int v, int goal) { return scalarize(vec_h.at(goal)(v)); };

    auto r = cbs_scalar(g, starts, goals, step_cost, heuristic, {}, budget_seconds);
    PlanResult out;
    out.diagnostics = r.diagnostics;
    out.status = r.status;
    if (r.status != PlanStatus::Success) return out;
    JointPlan plan;
    plan.paths = std::move(r.paths);
    plan.cost.assign(n, 0.0);
    for (const auto& p : plan.paths) plan.cost = add(plan.cost, path_cost(g, p, n));
    out.plan = std::move(plan);
    return out;
}

namespace {

struct OracleHeapEntry {
    CostVector g;
    long long key;
    long long seq;
};

struct OracleHeapCmp {
    const LexOrdering* ord;
    bool operator()(const OracleHeapEntry& a, const OracleHeapEntry& b) const {
        auto r = lex_compare(a.g, b.g, *ord);
        if (r != LexResult::Equal) return r == LexResult::Greater;
        return a.seq > b.seq;
    }
};

}  // namespace

std::optional<OracleResult> brute_force_lex_oracle(const Scenario& s, const LexOrdering& ord,
                                                   int horizon,
                                                   const std::vector<int>* starts_override) {
    WorldGraph g = s.planning_graph();
    const int n = s.n_objectives();
    const int d = static_cast<int>(s.robots.size());
    const int V = g.size();
    if (d > 3) throw OracleGuardError("oracle guard: more than 3 robots");
    if (V > 30) throw OracleGuardError("oracle guard: more than 30 vertices");
    if (horizon > 16) throw OracleGuardError("oracle guard: horizon above 16");

    std::vector<int> starts(d), goals(d);
    for (int i = 0; i < d; ++i) {
        starts[i] = starts_override ? (*starts_override)[i] : g.index_of(s.robots[i].start);
        goals[i] = g.index_of(s.robots[i].goal);
    }

    const long long done_span = 1LL << d;
    const long long time_span = horizon + 1;
    auto encode = [&](const std::vector<int>& pos, int done, int t) {
        long long p = 0;
        for (int i = d - 1; i >= 0; --i) p = p * V + pos[i];
        return (p * done_span + done) * time_span + t;
    };
    auto decode_pos = [&](long long key, std::vector<int>& pos, int& done, int& t) {
        t = static_cast<int>(key % time_span);
        key /= time_span;
        done = static_cast<int>(key % done_span);
        key /= done_span;
        pos.resize(d);
        for (int i = 0; i < d; ++i) {
            pos[i] = static_cast<int>(key % V);
            key /= V;
        }
    };

    std::unordered_map<long long, CostVector> best;
    std::unordered_map<long long, long long> parent;
    std::priority_queue<OracleHeapEntry, std::vector<OracleHeapEntry>, OracleHeapCmp> open{
        OracleHeapCmp{&ord}};
    long long seq = 0;

    long long start_key = encode(starts, 0, 0);
    best[start_key] = CostVector(n, 0.0);
    open.push(OracleHeapEntry{CostVector(n, 0.0), start_key, seq++});

    const int all_done = static_cast<int>(done_span) - 1;
    long long goal_key = -1;

    std::vector<int> pos, new_pos;
    while (!open.empty()) {
        OracleHeapEntry cur = open.top();
        open.pop();
        auto bit = best.find(cur.key);
        if (bit == best.end() || bit->second != cur.g) continue;
        int done, t;
        decode_pos(cur.key, pos, done, t);

        if (done == all_done) {
            goal_key = cur.key;
            break;
        }

        auto relax = [&](long long key, CostVector cost) {
            auto it = best.find(key);
            if (it != best.end() && lex_compare(cost, it->second, ord) != LexResult::Less) return;
            best[key] = cost;
            parent[key] = cur.key;
            open.push(OracleHeapEntry{std::move(cost), key, seq++});
        };

        // zero-cost arrival flips for robots standing on their goals
        for (int i = 0; i < d; ++i)
            if (!(done >> i & 1) && pos[i] == goals[i])
                relax(encode(pos, done | (1 << i), t), cur.g);

        if (t + 1 > horizon) continue;

        // enumerate joint moves of the not-yet-arrived robots
        std::vector<std::vector<std::pair<int, const CostVector*>>> options(d);
        for (int i = 0; i < d; ++i) {
            if (done >> i & 1) {
                options[i].push_back({pos[i], nullptr});  // arrived: stays, free
                continue;
            }
            options[i].push_back({pos[i], &g.wait_cost[pos[i]]});
            for (const auto& e : g.out[pos[i]]) options[i].push_back({e.to, &e.cost});
        }
        std::vector<size_t> pick(d, 0);
        new_pos.resize(d);
        while (true) {
            bool valid = true;
            CostVector step(n, 0.0);
            for (int i = 0; i < d && valid; ++i) {
                new_pos[i] = options[i][pick[i]].first;
                if (options[i][pick[i]].second) step = add(step, *options[i][pick[i]].second);
            }
            for (int i = 0; i < d && valid; ++i)
                for (int j = i + 1; j < d && valid; ++j) {
                    if (new_pos[i] == new_pos[j]) valid = false;  // vertex conflict
                    else if (new_pos[i] == pos[j] && new_pos[j] == pos[i] && pos[i] != new_pos[i])
                        valid = false;  // swap
                }
            if (valid) relax(encode(new_pos, done, t + 1), add(cur.g, step));

            int i = 0;
            while (i < d && ++pick[i] == options[i].size()) pick[i++] = 0;
            if (i == d) break;
        }
    }

    if (goal_key < 0) return std::nullopt;

    // replay the transition chain to recover per-robot paths
    std::vector<long long> chain;
    for (long long k = goal_key;; k = parent.at(k)) {
        chain.push_back(k);
        if (k == start_key) break;
    }
    std::reverse(chain.begin(), chain.end());

    std::vector<Path> paths(d);
    std::vector<int> arrived_at(d, -1);
    int prev_done = 0;
    for (size_t ci = 0; ci < chain.size(); ++ci) {
        int done, t;
        decode_pos(chain[ci], pos, done, t);
        for (int i = 0; i < d; ++i) {
            if (static_cast<int>(paths[i].size()) == t) paths[i].push_back(pos[i]);
            if ((done >> i & 1) && !(prev_done >> i & 1)) arrived_at[i] = t;
        }
        prev_done = done;
    }
    for (int i = 0; i < d; ++i)
        if (arrived_at[i] >= 0) paths[i].resize(arrived_at[i] + 1);

    OracleResult res;
    res.cost = best.at(goal_key);
    res.plan.paths = std::move(paths);
    res.plan.cost = res.cost;
    return res;
}

}  // namespace mrplan
