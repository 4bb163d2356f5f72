#include "mrplan/lcbs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <memory>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace mrplan {

ConstraintTable::ConstraintTable(const std::vector<Constraint>& all, int robot) {
    for (const auto& c : all) {
        if (c.robot != robot) continue;
        if (c.kind == ConstraintKind::Vertex)
            vertex_.insert({c.v, c.t});
        else
            edge_.insert({c.v, c.to, c.t});
        latest_ = std::max(latest_, c.t);
    }
}

int ConstraintTable::latest_vertex_time(int v) const {
    int latest = -1;
    for (const auto& [vv, t] : vertex_)
        if (vv == v) latest = std::max(latest, t);
    return latest;
}

namespace {

std::vector<double> min_positive_step_cost(const WorldGraph& g, int n) {
    // plain min over move edges: 0 as soon as any edge is free for objective i
    std::vector<double> m(n, -1.0);
    for (const auto& adj : g.out)
        for (const auto& e : adj)
            for (int i = 0; i < n; ++i)
                if (m[i] < 0.0 || e.cost[i] < m[i]) m[i] = e.cost[i];
    for (double& x : m)
        if (x < 0.0) x = 0.0;  // no move edges at all
    return m;
}

double euclid(const WorldGraph& g, int a, int b) {
    const auto& va = g.vertices[a];
    const auto& vb = g.vertices[b];
    if (!va.has_coords || !vb.has_coords) return -1.0;
    double dx = va.x - vb.x, dy = va.y - vb.y;
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

CostVector grid_heuristic(const WorldGraph& g, int v, int goal, int n) {
    CostVector h(n, 0.0);
    double d = euclid(g, v, goal);
    if (d < 0.0) return h;  // coordinate-free graph
    auto m = min_positive_step_cost(g, n);
    for (int i = 0; i < n; ++i) h[i] = d * m[i];
    return h;
}

VectorHeuristic make_grid_heuristic(const WorldGraph& g, int goal, int n) {
    auto m = std::make_shared<std::vector<double>>(min_positive_step_cost(g, n));
    return [&g, goal, n, m](int v) {
        CostVector h(n, 0.0);
        double d = euclid(g, v, goal);
        if (d < 0.0) return h;
        for (int i = 0; i < n; ++i) h[i] = d * (*m)[i];
        return h;
    };
}

namespace {

struct LaHeapEntry {
    CostVector f;
    CostVector g;
    double g_top;  // g component at the highest-priority objective
    int t;
    int v;
    long long seq;
};

struct LaHeapCmp {
    const LexOrdering* ord;
    // priority_queue keeps the "largest"; return true when a should pop later
    bool operator()(const LaHeapEntry& a, const LaHeapEntry& b) const {
        auto r = lex_compare(a.f, b.f, *ord);
        if (r != LexResult::Equal) return r == LexResult::Greater;
        if (a.g_top != b.g_top) return a.g_top < b.g_top;  // prefer larger g at top priority
        if (a.t != b.t) return a.t > b.t;
        if (a.v != b.v) return a.v > b.v;
        return a.seq > b.seq;
    }
};

}  // namespace

std::optional<LaStarResult> la_star(const WorldGraph& g, int start, int goal,
                                    const LexOrdering& ord, const VectorHeuristic& h,
                                    const ConstraintTable& ct, int horizon) {
    const int n = static_cast<int>(ord.priority.size());
    const int top = ord.priority[0];
    const long long stride = horizon + 2;
    auto key = [&](int v, int t) { return static_cast<long long>(v) * stride + t; };

    std::unordered_map<long long, CostVector> best_g;
    std::unordered_map<long long, long long> parent;
    std::priority_queue<LaHeapEntry, std::vector<LaHeapEntry>, LaHeapCmp> open{LaHeapCmp{&ord}};

    int goal_block_latest = ct.latest_vertex_time(goal);
    long long seq = 0;
    CostVector zero(n, 0.0);
    best_g[key(start, 0)] = zero;
    open.push(LaHeapEntry{h(start), zero, 0.0, 0, start, seq++});

    while (!open.empty()) {
        LaHeapEntry cur = open.top();
        open.pop();
        long long ck = key(cur.v, cur.t);
        auto bit = best_g.find(ck);
        if (bit == best_g.end() || bit->second != cur.g) continue;  // stale entry

        if (cur.v == goal && !ct.blocks_vertex(goal, cur.t) && goal_block_latest < cur.t + 1) {
            // goal_block_latest < t+1  <=>  no vertex constraint on goal at or after t
            Path path;
            long long k = ck;
            path.push_back(cur.v);
            while (k != key(start, 0)) {
                auto pit = parent.find(k);
                if (pit == parent.end()) break;
                k = pit->second;
                path.push_back(static_cast<int>(k / stride));
            }
            std::reverse(path.begin(), path.end());
            return LaStarResult{std::move(path), cur.g};
        }

        if (cur.t + 1 > horizon) continue;
        auto relax = [&](int u, const CostVector& step) {
            if (ct.blocks_vertex(u, cur.t + 1)) return;
            if (ct.blocks_edge(cur.v, u, cur.t)) return;
            CostVector gp = add(cur.g, step);
            long long yk = key(u, cur.t + 1);
            auto it = best_g.find(yk);
            if (it != best_g.end() && lex_compare(gp, it->second, ord) != LexResult::Less) return;
            best_g[yk] = gp;
            parent[yk] = ck;
            CostVector f = add(gp, h(u));
            open.push(LaHeapEntry{std::move(f), std::move(gp), best_g[yk][top], cur.t + 1, u, seq++});
        };
        relax(cur.v, g.wait_cost[cur.v]);
        for (const auto& e : g.out[cur.v]) relax(e.to, e.cost);
    }
    return std::nullopt;
}

std::optional<Conflict> detect_first_conflict(const std::vector<Path>& paths) {
    int makespan = 0;
    for (const auto& p : paths) makespan = std::max(makespan, static_cast<int>(p.size()) - 1);
    auto at = [&](int robot, int t) {
        const auto& p = paths[robot];
        return t < static_cast<int>(p.size()) ? p[t] : p.back();
    };
    const int d = static_cast<int>(paths.size());
    for (int t = 0; t <= makespan; ++t) {
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                if (at(i, t) == at(j, t))
                    return Conflict{ConstraintKind::Vertex, t, i, j, at(i, t), -1};
        if (t == makespan) break;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                int ui = at(i, t), vi = at(i, t + 1);
                int uj = at(j, t), vj = at(j, t + 1);
                if (ui != vi && ui == vj && uj == vi)
                    return Conflict{ConstraintKind::Edge, t, i, j, ui, vi};
            }
    }
    return std::nullopt;
}

std::pair<Constraint, Constraint> generate_constraints(const Conflict& c) {
    if (c.kind == ConstraintKind::Vertex)
        return {Constraint{ConstraintKind::Vertex, c.robot_i, c.v, -1, c.t},
                Constraint{ConstraintKind::Vertex, c.robot_j, c.v, -1, c.t}};
    return {Constraint{ConstraintKind::Edge, c.robot_i, c.v, c.to, c.t},
            Constraint{ConstraintKind::Edge, c.robot_j, c.to, c.v, c.t}};
}

CostVector path_cost(const WorldGraph& g, const Path& p, int n) {
    CostVector total(n, 0.0);
    for (size_t i = 0; i + 1 < p.size(); ++i) {
        if (p[i] == p[i + 1]) {
            total = add(total, g.wait_cost[p[i]]);
            continue;
        }
        const GraphEdge* found = nullptr;
        for (const auto& e : g.out[p[i]])
            if (e.to == p[i + 1]) {
                found = &e;
                break;
            }
        if (!found)
            throw ModelError("path_cost: no edge " + g.id_of(p[i]) + " -> " + g.id_of(p[i + 1]));
        total = add(total, found->cost);
    }
    return total;
}

namespace {

struct CtNode {
    std::vector<Path> paths;
    CostVector cost;
    std::vector<Constraint> constraints;
};

struct CtHeapEntry {
    CostVector cost;
    long long seq;
    int idx;
};

struct CtHeapCmp {
    const LexOrdering* ord;
    bool operator()(const CtHeapEntry& a, const CtHeapEntry& b) const {
        auto r = lex_compare(a.cost, b.cost, *ord);
        if (r != LexResult::Equal) return r == LexResult::Greater;
        return a.seq > b.seq;
    }
};

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// memory failsafe: every CT node keeps full joint paths, so an unbudgeted
// search on a pathological instance would otherwise grow without bound
constexpr size_t kMaxCtNodes = 400000;

}  // namespace

PlanResult lcbs_plan(const Scenario& s, const LexOrdering& ord,
                     const std::vector<int>* starts_override, const LcbsOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    WorldGraph g = s.planning_graph();
    const int n = s.n_objectives();
    const int d = static_cast<int>(s.robots.size());

    std::vector<int> starts(d), goals(d);
    for (int i = 0; i < d; ++i) {
        starts[i] = starts_override ? (*starts_override)[i] : g.index_of(s.robots[i].start);
        goals[i] = g.index_of(s.robots[i].goal);
    }

    std::vector<VectorHeuristic> heur;
    heur.reserve(d);
    for (int i = 0; i < d; ++i) heur.push_back(make_grid_heuristic(g, goals[i], n));

    // hard cap keeps the tree finite on infeasible instances: constraint times
    // stay below it, so only finitely many distinct constraints can ever arise
    const int horizon_cap = opts.horizon_slack * g.size() * (d + 1);
    auto horizon_for = [&](const ConstraintTable& ct) {
        return std::min(std::max(ct.latest_time(), 0) + opts.horizon_slack * g.size(),
                        horizon_cap);
    };

    PlanResult res;
    CtNode root;
    root.paths.resize(d);
    root.cost.assign(n, 0.0);
    for (int i = 0; i < d; ++i) {
        ConstraintTable ct;
        auto r = la_star(g, starts[i], goals[i], ord, heur[i], ct, horizon_for(ct));
        if (!r) {
            res.status = PlanStatus::Infeasible;
            res.diagnostics = "no unconstrained path for robot " + s.robots[i].id;
            return res;
        }
        root.paths[i] = std::move(r->path);
        root.cost = add(root.cost, r->cost);
    }

    std::deque<CtNode> nodes;
    nodes.push_back(std::move(root));
    std::priority_queue<CtHeapEntry, std::vector<CtHeapEntry>, CtHeapCmp> open{CtHeapCmp{&ord}};
    long long seq = 0;
    open.push(CtHeapEntry{nodes[0].cost, seq++, 0});
    CostVector best_seen = nodes[0].cost;

    while (!open.empty()) {
        if (opts.budget_seconds > 0.0 && elapsed_s(t0) > opts.budget_seconds) {
            std::ostringstream os;
            os << "budget exceeded after " << res.nodes_expanded
               << " CT expansions; best joint cost so far:";
            for (double c : best_seen) os << " " << c;
            res.status = PlanStatus::Timeout;
            res.diagnostics = os.str();
            return res;
        }
        if (nodes.size() > kMaxCtNodes) {
            res.status = PlanStatus::Timeout;
            res.diagnostics = "constraint tree node limit reached";
            return res;
        }
        CtHeapEntry top = open.top();
        open.pop();
        const CtNode& node = nodes[top.idx];
        ++res.nodes_expanded;
        best_seen = node.cost;

        auto conflict = detect_first_conflict(node.paths);
        if (!conflict) {
            res.status = PlanStatus::Success;
            res.plan = JointPlan{node.paths, node.cost};
            return res;
        }
        auto [ci, cj] = generate_constraints(*conflict);
        for (const Constraint& gamma : {ci, cj}) {
            CtNode child;
            child.constraints = node.constraints;
            child.constraints.push_back(gamma);
            ConstraintTable ct(child.constraints, gamma.robot);
            auto r = la_star(g, starts[gamma.robot], goals[gamma.robot], ord, heur[gamma.robot],
                             ct, horizon_for(ct));
            if (!r) continue;
            child.paths = node.paths;
            child.paths[gamma.robot] = std::move(r->path);
            child.cost.assign(n, 0.0);
            for (int i = 0; i < d; ++i)
                child.cost = add(child.cost, path_cost(g, child.paths[i], n));
            int idx = static_cast<int>(nodes.size());
            nodes.push_back(std::move(child));
            open.push(CtHeapEntry{nodes[idx].cost, seq++, idx});
        }
    }
    res.status = PlanStatus::Infeasible;
    res.diagnostics = "constraint tree exhausted";
    return res;
}

// ---- scalar CBS ----

namespace {

struct ScalarHeapEntry {
    double f;
    double g;
    int t;
    int v;
    long long seq;
    bool operator<(const ScalarHeapEntry& o) const {
        if (f != o.f) return f > o.f;
        if (g != o.g) return g < o.g;  // prefer larger g
        if (t != o.t) return t > o.t;
        if (v != o.v) return v > o.v;
        return seq > o.seq;
    }
};

}  // namespace

std::optional<ScalarAStarResult> scalar_astar(const WorldGraph& g, int start, int goal,
                                              const ConstraintTable& ct, int horizon,
                                              const std::function<double(int, int)>& step_cost,
                                              const std::function<double(int)>& h,
                                              const std::set<int>& blocked) {
    if (blocked.count(start) || blocked.count(goal)) return std::nullopt;
    const long long stride = horizon + 2;
    auto key = [&](int v, int t) { return static_cast<long long>(v) * stride + t; };
    std::unordered_map<long long, double> best_g;
    std::unordered_map<long long, long long> parent;
    std::priority_queue<ScalarHeapEntry> open;
    int goal_block_latest = ct.latest_vertex_time(goal);
    long long seq = 0;
    best_g[key(start, 0)] = 0.0;
    open.push(ScalarHeapEntry{h(start), 0.0, 0, start, seq++});

    while (!open.empty()) {
        ScalarHeapEntry cur = open.top();
        open.pop();
        long long ck = key(cur.v, cur.t);
        auto bit = best_g.find(ck);
        if (bit == best_g.end() || bit->second != cur.g) continue;

        if (cur.v == goal && !ct.blocks_vertex(goal, cur.t) && goal_block_latest < cur.t + 1) {
            Path path{cur.v};
            long long k = ck;
            while (k != key(start, 0)) {
                auto pit = parent.find(k);
                if (pit == parent.end()) break;
                k = pit->second;
                path.push_back(static_cast<int>(k / stride));
            }
            std::reverse(path.begin(), path.end());
            return ScalarAStarResult{std::move(path), cur.g};
        }

        if (cur.t + 1 > horizon) continue;
        auto relax = [&](int u) {
            if (blocked.count(u)) return;
            if (ct.blocks_vertex(u, cur.t + 1)) return;
            if (ct.blocks_edge(cur.v, u, cur.t)) return;
            double gp = cur.g + step_cost(cur.v, u);
            long long yk = key(u, cur.t + 1);
            auto it = best_g.find(yk);
            if (it != best_g.end() && gp >= it->second) return;
            best_g[yk] = gp;
            parent[yk] = ck;
            open.push(ScalarHeapEntry{gp + h(u), gp, cur.t + 1, u, seq++});
        };
        relax(cur.v);
        for (const auto& e : g.out[cur.v]) relax(e.to);
    }
    return std::nullopt;
}

ScalarCbsResult cbs_scalar(const WorldGraph& g, const std::vector<int>& starts,
                           const std::vector<int>& goals,
                           const std::function<double(int, int)>& step_cost,
                           const std::function<double(int, int)>& heuristic,
                           const std::set<int>& blocked, double budget_seconds,
                           int horizon_slack) {
    const auto t0 = std::chrono::steady_clock::now();
    const int d = static_cast<int>(starts.size());

    struct Node {
        std::vector<Path> paths;
        double cost = 0.0;
        std::vector<Constraint> constraints;
    };
    const int horizon_cap = horizon_slack * g.size() * (static_cast<int>(starts.size()) + 1);
    auto horizon_for = [&](const ConstraintTable& ct) {
        return std::min(std::max(ct.latest_time(), 0) + horizon_slack * g.size(), horizon_cap);
    };

    ScalarCbsResult res;
    Node root;
    root.paths.resize(d);
    for (int i = 0; i < d; ++i) {
        ConstraintTable ct;
        auto h = [&, i](int v) { return heuristic(v, goals[i]); };
        auto r = scalar_astar(g, starts[i], goals[i], ct, horizon_for(ct), step_cost, h, blocked);
        if (!r) {
            res.status = PlanStatus::Infeasible;
            res.diagnostics = "no unconstrained path for robot index " + std::to_string(i);
            return res;
        }
        root.paths[i] = std::move(r->path);
        root.cost += r->cost;
    }

    struct HeapEntry {
        double cost;
        long long seq;
        int idx;
        bool operator<(const HeapEntry& o) const {
            if (cost != o.cost) return cost > o.cost;
            return seq > o.seq;
        }
    };
    std::deque<Node> nodes;
    nodes.push_back(std::move(root));
    std::priority_queue<HeapEntry> open;
    long long seq = 0;
    open.push(HeapEntry{nodes[0].cost, seq++, 0});

    while (!open.empty()) {
        if (budget_seconds > 0.0 && elapsed_s(t0) > budget_seconds) {
            res.status = PlanStatus::Timeout;
            res.diagnostics = "budget exceeded";
            return res;
        }
        if (nodes.size() > kMaxCtNodes) {
            res.status = PlanStatus::Timeout;
            res.diagnostics = "constraint tree node limit reached";
            return res;
        }
        HeapEntry top = open.top();
        open.pop();
        const Node& node = nodes[top.idx];
        auto conflict = detect_first_conflict(node.paths);
        if (!conflict) {
            res.status = PlanStatus::Success;
            res.paths = node.paths;
            res.scalar_cost = node.cost;
            return res;
        }
        auto [ci, cj] = generate_constraints(*conflict);
        for (const Constraint& gamma : {ci, cj}) {
            Node child;
            child.constraints = node.constraints;
            child.constraints.push_back(gamma);
            ConstraintTable ct(child.constraints, gamma.robot);
            auto h = [&, gamma](int v) { return heuristic(v, goals[gamma.robot]); };
            auto r = scalar_astar(g, starts[gamma.robot], goals[gamma.robot], ct, horizon_for(ct),
                                  step_cost, h, blocked);
            if (!r) continue;
            child.paths = node.paths;
            child.paths[gamma.robot] = std::move(r->path);
            child.cost = 0.0;
            for (int i = 0; i < d; ++i) {
                double c = 0.0;
                for (size_t t = 0; t + 1 < child.paths[i].size(); ++t)
                    c += step_cost(child.paths[i][t], child.paths[i][t + 1]);
                child.cost += c;
            }
            int idx = static_cast<int>(nodes.size());
            nodes.push_back(std::move(child));
            open.push(HeapEntry{nodes[idx].cost, seq++, idx});
        }
    }
    res.status = PlanStatus::Infeasible;
    res.diagnostics = "constraint tree exhausted";
    return res;
}

}  // namespace mrplan
