#include "mrplan/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mrplan {

namespace {

double elapsed_ms(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

struct FlavorSpec {
    std::vector<std::string> objectives;
    // per-context priority permutations over the objective indices above
    std::vector<std::vector<int>> orderings;
    int time_index;       // objective charged 1 per wait
    int feature_a_index;  // objective surcharged on field-A cells
    int feature_b_index;  // objective surcharged on field-B cells (-1 = none)
    int base_a;           // base per-move cost of feature_a objective
};

FlavorSpec flavor_spec(Flavor f) {
    switch (f) {
        case Flavor::Salp:
            // c1: energy > coral > time; c2: coral > energy > time; c3: time > energy > coral
            return {{"energy", "coral", "time"},
                    {{0, 1, 2}, {1, 0, 2}, {2, 0, 1}},
                    2, 0, 1, 1};
        case Flavor::Warehouse:
            // c1: time > congestion > human; c2: congestion > time > human; c3: human > congestion > time
            return {{"time", "congestion", "human"},
                    {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}},
                    0, 1, 2, 0};
        case Flavor::Firefight:
            // c1: energy > length > time; c2: length > energy > time; c3: time > energy > length
            return {{"time", "energy", "length"},
                    {{1, 2, 0}, {2, 1, 0}, {0, 1, 2}},
                    0, 1, -1, 1};
    }
    throw GenerationError("unknown flavor");
}

// next permutations for contexts beyond the flavor's three
std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace

Flavor flavor_from_string(const std::string& name) {
    if (name == "salp") return Flavor::Salp;
    if (name == "warehouse") return Flavor::Warehouse;
    if (name == "firefight") return Flavor::Firefight;
    throw GenerationError("unknown flavor '" + name + "' (expected salp|warehouse|firefight)");
}

std::string flavor_to_string(Flavor f) {
    switch (f) {
        case Flavor::Salp: return "salp";
        case Flavor::Warehouse: return "warehouse";
        case Flavor::Firefight: return "firefight";
    }
    return "?";
}

namespace {

std::optional<Scenario> try_generate(const GenParams& p, std::mt19937_64& rng) {
    FlavorSpec spec = flavor_spec(p.flavor);
    const int n = 3;
    const int W = p.width, H = p.height;

    std::vector<bool> free_cell(W * H);
    std::vector<int> free_list;
    for (int i = 0; i < W * H; ++i) {
        free_cell[i] = (rng() % 1000000) / 1e6 >= p.obstacle_density;
        if (free_cell[i]) free_list.push_back(i);
    }
    auto cell_id = [&](int i) {
        return "v" + std::to_string(i % W) + "_" + std::to_string(i / W);
    };

    Scenario s;
    s.objectives = spec.objectives;

    // feature fields drive the non-time objective costs
    std::set<int> field_a, field_b;
    for (int i : free_list) {
        if ((rng() % 1000000) / 1e6 < 0.15) field_a.insert(i);
        if ((rng() % 1000000) / 1e6 < 0.10) field_b.insert(i);
    }

    for (int i = 0; i < W * H; ++i)
        if (free_cell[i])
            s.graph.add_vertex(cell_id(i), std::make_pair(double(i % W), double(i / W)));

    auto move_cost = [&](int dest) {
        CostVector c(n, 0.0);
        c[spec.time_index] = 1.0;
        c[spec.feature_a_index] = spec.base_a + (field_a.count(dest) ? 1.0 : 0.0);
        if (spec.feature_b_index >= 0)
            c[spec.feature_b_index] = field_b.count(dest) ? 2.0 : 0.0;
        if (p.flavor == Flavor::Firefight) c[2] = 1.0;  // path length: 1 per move
        return c;
    };
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int i = 0; i < W * H; ++i) {
        if (!free_cell[i]) continue;
        int x = i % W, y = i / W;
        for (int k = 0; k < 4; ++k) {
            int nx = x + dx[k], ny = y + dy[k];
            if (nx < 0 || nx >= W || ny < 0 || ny >= H) continue;
            int j = ny * W + nx;
            if (!free_cell[j]) continue;
            s.graph.add_edge(cell_id(i), cell_id(j), move_cost(j));
        }
    }
    for (int v = 0; v < s.graph.size(); ++v) {
        CostVector wc(n, 0.0);
        wc[spec.time_index] = 1.0;
        s.graph.wait_cost[v] = wc;
    }

    // contexts
    const int m = p.contexts;
    auto perms = all_permutations(n);
    for (int c = 0; c < m; ++c) {
        Context ctx;
        ctx.id = "c" + std::to_string(c + 1);
        if (c < static_cast<int>(spec.orderings.size())) {
            ctx.ordering.priority = spec.orderings[c];
        } else {
            // cycle the remaining permutations deterministically
            std::vector<std::vector<int>> unused;
            for (const auto& q : perms)
                if (std::find(spec.orderings.begin(), spec.orderings.end(), q) == spec.orderings.end())
                    unused.push_back(q);
            ctx.ordering.priority = unused[(c - spec.orderings.size()) % unused.size()];
        }
        s.contexts.push_back(std::move(ctx));
    }
    s.true_context = "c" + std::to_string(rng() % m + 1);
    for (int c = 0; c < m; ++c) s.initial_belief["c" + std::to_string(c + 1)] = 1.0 / m;

    // starts and goals on distinct free cells
    std::vector<int> pool = free_list;
    for (size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng() % i]);
    size_t cursor = 0;
    auto take = [&]() -> std::optional<int> {
        if (cursor >= pool.size()) return std::nullopt;
        return pool[cursor++];
    };
    std::set<int> reserved;  // starts; landmark sites avoid them
    for (int r = 0; r < p.robots; ++r) {
        auto start = take();
        auto goal = take();
        if (!start || !goal) return std::nullopt;
        reserved.insert(*start);
        s.robots.push_back(RobotSpec{"r" + std::to_string(r + 1), cell_id(*start), cell_id(*goal)});
    }

    // landmarks: clusters of adjacent free cells away from robot starts
    int redundant = static_cast<int>(std::floor(p.redundant_fraction * p.landmarks));
    int informative = p.landmarks - redundant;
    std::vector<std::vector<std::string>> all_ctx_cells;
    for (const auto& c : s.contexts) all_ctx_cells.push_back({c.id});

    std::set<int> used_sites;
    auto pick_site = [&](int size) -> std::optional<std::vector<int>> {
        for (int tries = 0; tries < 200; ++tries) {
            int seed_cell = free_list[rng() % free_list.size()];
            if (used_sites.count(seed_cell) || reserved.count(seed_cell)) continue;
            std::vector<int> site{seed_cell};
            int x = seed_cell % W, y = seed_cell / W;
            for (int k = 0; k < 4 && static_cast<int>(site.size()) < size; ++k) {
                int nx = x + dx[k], ny = y + dy[k];
                if (nx < 0 || nx >= W || ny < 0 || ny >= H) continue;
                int j = ny * W + nx;
                if (free_cell[j] && !used_sites.count(j) && !reserved.count(j)) site.push_back(j);
            }
            if (static_cast<int>(site.size()) < size) continue;
            for (int c : site) used_sites.insert(c);
            return site;
        }
        return std::nullopt;
    };

    for (int l = 0; l < p.landmarks; ++l) {
        bool info = l < informative;
        int req = p.robots >= 2 ? 1 + static_cast<int>(rng() % 2) : 1;
        auto site = pick_site(req);
        if (!site) return std::nullopt;
        LandmarkSpec lm;
        lm.id = "l" + std::to_string(l + 1);
        for (int c : *site) lm.site.push_back(cell_id(c));
        Tier tier;
        tier.min_robots = req;
        if (!info) {
            std::vector<std::string> all;
            for (const auto& c : s.contexts) all.push_back(c.id);
            tier.partition = {all};  // trivial one-cell partition: never splits
        } else if (informative >= m - 1) {
            // separator landmark: isolates one context from the rest
            int sep = 1 + l % (m - 1);  // context index 1..m-1 (c2..cm)
            std::vector<std::string> rest;
            for (int c = 0; c < m; ++c)
                if (c != sep) rest.push_back(s.contexts[c].id);
            tier.partition = {{s.contexts[sep].id}, rest};
        } else {
            tier.partition = all_ctx_cells;  // full singleton partition
        }
        lm.tiers.push_back(std::move(tier));
        s.landmarks.push_back(std::move(lm));
    }

    // joint distinguishability of the informative landmarks
    for (int c = 0; c < m; ++c) {
        std::set<std::string> feasible;
        for (const auto& ctx : s.contexts) feasible.insert(ctx.id);
        for (int l = 0; l < informative; ++l)
            for (const auto& cell : s.landmarks[l].tiers[0].partition)
                if (std::find(cell.begin(), cell.end(), s.contexts[c].id) != cell.end()) {
                    std::set<std::string> keep(cell.begin(), cell.end());
                    std::set<std::string> next;
                    for (const auto& id : feasible)
                        if (keep.count(id)) next.insert(id);
                    feasible = next;
                    break;
                }
        if (feasible.size() != 1) return std::nullopt;
    }

    // everything must live in one connected component
    {
        std::vector<int> dist = hop_distances(s.graph, s.graph.index_of(s.robots[0].start));
        for (const auto& r : s.robots) {
            if (dist[s.graph.index_of(r.start)] < 0) return std::nullopt;
            if (dist[s.graph.index_of(r.goal)] < 0) return std::nullopt;
        }
        for (const auto& lm : s.landmarks)
            for (const auto& v : lm.site)
                if (dist[s.graph.index_of(v)] < 0) return std::nullopt;
    }

    if (!validate_scenario(s).empty()) return std::nullopt;
    return s;
}

}  // namespace

Scenario generate(const GenParams& p) {
    if (p.redundant_fraction < 0.0 || p.redundant_fraction > 1.0)
        throw GenerationError("redundant_fraction must be in [0,1]");
    if (p.width < 2 || p.height < 1 || p.robots < 1 || p.landmarks < 0 || p.contexts < 1)
        throw GenerationError("counts must be positive");
    for (int attempt = 0; attempt < 50; ++attempt) {
        std::mt19937_64 rng(p.seed * 1000003ULL + attempt);
        auto s = try_generate(p, rng);
        if (s) return *s;
    }
    throw GenerationError("could not place the requested scenario after 50 attempts; "
                          "try another seed or lower the obstacle density");
}

Scenario with_slip_model(const Scenario& s, double slip) {
    Scenario out = s;
    StochasticModel m;
    for (int v = 0; v < s.graph.size(); ++v) {
        for (const auto& e : s.graph.out[v]) {
            StochasticAction a;
            a.name = "to_" + s.graph.id_of(e.to);
            a.cost = e.cost;
            if (slip > 0.0) {
                a.outcomes = {{s.graph.id_of(e.to), 1.0 - slip}, {s.graph.id_of(v), slip}};
            } else {
                a.outcomes = {{s.graph.id_of(e.to), 1.0}};
            }
            m.actions[s.graph.id_of(v)].push_back(std::move(a));
        }
    }
    out.stochastic = std::move(m);
    return out;
}

Scenario make_m_violation_scenario(double M) {
    Scenario s;
    s.objectives = {"energy", "coral", "time"};
    s.graph.add_vertex("S", std::make_pair(0.0, 0.0));
    s.graph.add_vertex("A", std::make_pair(1.0, 1.0));
    s.graph.add_vertex("B", std::make_pair(1.0, -1.0));
    s.graph.add_vertex("G", std::make_pair(2.0, 0.0));
    double K = std::ceil(M) + 1.0;
    s.graph.add_edge("S", "A", {1.0, 0.0, 1.0});  // cheap-looking scalar route
    s.graph.add_edge("A", "G", {0.0, 0.0, 1.0});
    s.graph.add_edge("S", "B", {0.0, K, 1.0});    // lex-optimal: top priority stays 0
    s.graph.add_edge("B", "G", {0.0, 0.0, 1.0});
    for (int v = 0; v < s.graph.size(); ++v) s.graph.wait_cost[v] = {0.0, 0.0, 1.0};
    Context c;
    c.id = "c1";
    c.ordering.priority = {0, 1, 2};
    s.contexts.push_back(c);
    s.true_context = "c1";
    s.initial_belief["c1"] = 1.0;
    s.robots.push_back(RobotSpec{"r1", "S", "G"});
    validate_or_throw(s);
    return s;
}

std::string run_status_to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Success: return "success";
        case RunStatus::Ambiguous: return "ambiguous";
        case RunStatus::Infeasible: return "infeasible";
        case RunStatus::Timeout: return "timeout";
    }
    return "?";
}

RunRecord run_two_stage(const Scenario& s, double budget_seconds, const std::string& scenario_id) {
    RunRecord rec;
    rec.scenario_id = scenario_id;
    auto t0 = std::chrono::steady_clock::now();
    CimopResult stage1;
    try {
        stage1 = run_cimop(s);
    } catch (const AmbiguousContextError&) {
        rec.status = RunStatus::Ambiguous;
        rec.stage1_ms = elapsed_ms(t0);
        return rec;
    } catch (const std::runtime_error&) {
        rec.status = RunStatus::Infeasible;
        rec.stage1_ms = elapsed_ms(t0);
        return rec;
    }
    rec.stage1_ms = elapsed_ms(t0);
    rec.trace = stage1.trace;
    rec.inferred_context = stage1.inferred_context;

    auto t1 = std::chrono::steady_clock::now();
    LcbsOptions opts;
    opts.budget_seconds = budget_seconds;
    PlanResult stage2 = lcbs_plan(s, stage1.ordering, &stage1.final_positions, opts);
    rec.stage2_ms = elapsed_ms(t1);
    switch (stage2.status) {
        case PlanStatus::Success:
            rec.status = RunStatus::Success;
            rec.plan = std::move(stage2.plan);
            break;
        case PlanStatus::Infeasible:
            rec.status = RunStatus::Infeasible;
            break;
        case PlanStatus::Timeout:
            rec.status = RunStatus::Timeout;
            break;
    }
    return rec;
}

ExecutionResult simulate_execution(const Scenario& s, const RunRecord& rec,
                                   unsigned long long seed, int max_replans, bool full_replan) {
    if (!s.stochastic) throw ModelError("simulate_execution: scenario has no stochastic model");
    if (rec.status != RunStatus::Success || !rec.plan)
        throw ModelError("simulate_execution: record has no successful plan");

    WorldGraph g = s.planning_graph();
    const int d = static_cast<int>(s.robots.size());
    const Context* ctx = s.find_context(rec.inferred_context);
    LexOrdering ord = ctx ? ctx->ordering : s.contexts.front().ordering;
    std::mt19937_64 rng(seed);

    std::vector<int> goals(d);
    for (int i = 0; i < d; ++i) goals[i] = g.index_of(s.robots[i].goal);

    // committed[i] is the full global-time path; suffixes are rewritten on replan
    std::vector<Path> committed = rec.plan->paths;
    auto committed_at = [&](int i, int t) {
        return t < static_cast<int>(committed[i].size()) ? committed[i][t]
                                                         : committed[i].back();
    };

    ExecutionResult res;
    res.replans.assign(d, 0);
    res.realized.resize(d);
    std::vector<int> pos(d);
    for (int i = 0; i < d; ++i) {
        pos[i] = committed[i][0];
        res.realized[i].push_back(pos[i]);
    }

    // sample the outcome of moving from u toward v under the stochastic model
    auto sample_move = [&](int u, int v) -> int {
        auto it = s.stochastic->actions.find(g.id_of(u));
        if (it != s.stochastic->actions.end()) {
            for (const auto& a : it->second) {
                const std::string* best = nullptr;
                double best_p = -1.0;
                for (const auto& [succ, p] : a.outcomes)
                    if (p > best_p || (p == best_p && (!best || succ < *best))) {
                        best = &succ;
                        best_p = p;
                    }
                if (best && g.index_of(*best) == v) {
                    double roll = (rng() % 1000000) / 1e6;
                    double acc = 0.0;
                    for (const auto& [succ, p] : a.outcomes) {
                        acc += p;
                        if (roll < acc) return g.index_of(succ);
                    }
                    return g.index_of(a.outcomes.back().first);
                }
            }
        }
        return v;  // no stochastic entry: deterministic move
    };

    int makespan = 0;
    for (const auto& p : committed) makespan = std::max(makespan, static_cast<int>(p.size()) - 1);
    const int step_cap = makespan + 20 * g.size();

    auto all_done = [&] {
        for (int i = 0; i < d; ++i)
            if (pos[i] != goals[i]) return false;
        return true;
    };

    int t = 0;
    while (!all_done()) {
        if (t >= step_cap) {
            res.status = ExecStatus::Stuck;
            res.steps = t;
            return res;
        }
        // sample intents
        std::vector<int> proposed(d);
        for (int i = 0; i < d; ++i) {
            int intended = committed_at(i, t + 1);
            proposed[i] = intended == pos[i] ? pos[i] : sample_move(pos[i], intended);
        }
        // physical resolution: later-id robots yield on collision
        for (int rounds = 0; rounds < d; ++rounds) {
            bool changed = false;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    if (i == j) continue;
                    bool dup = proposed[i] == proposed[j] && j < i;
                    bool swap = proposed[i] == pos[j] && proposed[j] == pos[i] && pos[i] != proposed[i];
                    if ((dup || (swap && j < i)) && proposed[i] != pos[i]) {
                        proposed[i] = pos[i];
                        changed = true;
                    }
                }
            if (!changed) break;
        }
        pos = proposed;
        ++t;
        for (int i = 0; i < d; ++i) res.realized[i].push_back(pos[i]);

        if (full_replan) {
            // any deviation triggers one joint replan from current positions
            bool deviated = false;
            for (int i = 0; i < d; ++i)
                if (pos[i] != committed_at(i, t)) {
                    deviated = true;
                    if (++res.replans[i] > max_replans) {
                        res.status = ExecStatus::ReplanLimit;
                        res.steps = t;
                        return res;
                    }
                }
            if (deviated) {
                PlanResult r = lcbs_plan(s, ord, &pos);
                if (r.status != PlanStatus::Success) {
                    res.status = ExecStatus::Stuck;
                    res.steps = t;
                    return res;
                }
                for (int i = 0; i < d; ++i) {
                    committed[i].resize(t);
                    for (int v : r.plan->paths[i]) committed[i].push_back(v);
                }
            }
            continue;
        }

        // replan every robot that landed off its committed path
        for (int i = 0; i < d; ++i) {
            if (pos[i] == committed_at(i, t)) continue;
            if (++res.replans[i] > max_replans) {
                res.status = ExecStatus::ReplanLimit;
                res.steps = t;
                return res;
            }
            // other robots' committed futures become dynamic constraints
            std::vector<Constraint> cons;
            int horizon_abs = t;
            for (int j = 0; j < d; ++j)
                if (j != i)
                    horizon_abs = std::max(horizon_abs,
                                           static_cast<int>(committed[j].size()) - 1);
            int local_h = (horizon_abs - t) + 2 * g.size();
            for (int j = 0; j < d; ++j) {
                if (j == i) continue;
                for (int lt = 0; lt <= horizon_abs - t; ++lt) {
                    cons.push_back(Constraint{ConstraintKind::Vertex, i, committed_at(j, t + lt),
                                              -1, lt});
                    cons.push_back(Constraint{ConstraintKind::Edge, i, committed_at(j, t + lt + 1),
                                              committed_at(j, t + lt), lt});
                }
            }
            ConstraintTable ct(cons, i);
            auto h = make_grid_heuristic(g, goals[i], s.n_objectives());
            auto r = la_star(g, pos[i], goals[i], ord, h, ct, local_h);
            if (!r) {
                res.status = ExecStatus::Stuck;
                res.steps = t;
                return res;
            }
            committed[i].resize(t);
            for (int v : r->path) committed[i].push_back(v);
        }
    }
    res.status = ExecStatus::Success;
    res.steps = t;
    return res;
}

std::string trace_to_csv(const WorldGraph& g, const InferenceTrace& trace,
                         const std::vector<std::string>&) {
    std::ostringstream os;
    os << "step,entropy,visited_landmarks,positions\n";
    for (const auto& row : trace.rows) {
        std::vector<std::string> names;
        for (int v : row.positions) names.push_back(g.id_of(v));
        os << row.step << "," << row.entropy << "," << join(row.visited, ";") << ","
           << join(names, ";") << "\n";
    }
    return os.str();
}

std::string plan_to_csv(const WorldGraph& g, const JointPlan& plan,
                        const std::vector<std::string>& robot_ids) {
    std::ostringstream os;
    os << "robot,timestep,vertex\n";
    for (size_t i = 0; i < plan.paths.size(); ++i)
        for (size_t t = 0; t < plan.paths[i].size(); ++t)
            os << robot_ids[i] << "," << t << "," << g.id_of(plan.paths[i][t]) << "\n";
    os << "cost";
    for (double c : plan.cost) os << "," << fmt(c);
    os << "\n";
    return os.str();
}

MetricsOutput emit_metrics(const std::vector<RunRecord>& records, int n_objectives) {
    MetricsOutput out;
    std::ostringstream traj, sum;
    traj << "run,step,entropy\n";
    sum << "run,status,cumulative_entropy,steps_to_collapse,stage1_ms,stage2_ms";
    for (int i = 0; i < n_objectives; ++i) sum << ",c_" << (i + 1);
    sum << "\n";

    double agg_ce = 0, agg_steps = 0, agg_s1 = 0, agg_s2 = 0;
    CostVector agg_cost(n_objectives, 0.0);
    int count = 0;
    for (const auto& r : records) {
        if (r.trace)
            for (const auto& row : r.trace->rows)
                traj << r.scenario_id << "," << row.step << "," << row.entropy << "\n";
        sum << r.scenario_id << "," << run_status_to_string(r.status) << ","
            << (r.trace ? r.trace->cumulative_entropy : 0) << ","
            << (r.trace ? r.trace->total_steps : 0) << "," << fmt(r.stage1_ms) << ","
            << fmt(r.stage2_ms);
        for (int i = 0; i < n_objectives; ++i)
            sum << "," << (r.plan ? fmt(r.plan->cost[i]) : "");
        sum << "\n";
        agg_ce += r.trace ? r.trace->cumulative_entropy : 0;
        agg_steps += r.trace ? r.trace->total_steps : 0;
        agg_s1 += r.stage1_ms;
        agg_s2 += r.stage2_ms;
        if (r.plan)
            for (int i = 0; i < n_objectives; ++i) agg_cost[i] += r.plan->cost[i];
        ++count;
    }
    if (count > 0) {
        sum << "mean,," << fmt(agg_ce / count) << "," << fmt(agg_steps / count) << ","
            << fmt(agg_s1 / count) << "," << fmt(agg_s2 / count);
        for (int i = 0; i < n_objectives; ++i) sum << "," << fmt(agg_cost[i] / count);
        sum << "\n";
    }
    out.trajectories_csv = traj.str();
    out.summary_csv = sum.str();
    return out;
}

double success_rate(const std::vector<Scenario>& instances,
                    const std::function<PlanResult(const Scenario&, double)>& planner,
                    double budget_seconds, int oracle_horizon) {
    if (instances.empty()) return 0.0;
    int ok = 0;
    for (const auto& s : instances) {
        if (budget_seconds <= 0.0) continue;
        const Context* ctx = s.find_context(s.true_context);
        auto oracle = brute_force_lex_oracle(s, ctx->ordering, oracle_horizon);
        auto t0 = std::chrono::steady_clock::now();
        PlanResult r = planner(s, budget_seconds);
        double wall = elapsed_ms(t0) / 1000.0;
        if (r.status != PlanStatus::Success || wall > budget_seconds) continue;
        if (oracle && r.plan && r.plan->cost == oracle->cost) ++ok;
    }
    return static_cast<double>(ok) / instances.size();
}

std::vector<BenchRow> run_bench(const std::vector<std::pair<std::string, Scenario>>& instances,
                                const std::vector<std::string>& planners, double budget_seconds,
                                bool use_oracle, int oracle_horizon, unsigned long long seed,
                                bool per_instance_m) {
    // per-domain scalarization: group by objective set, M from the group's
    // first instance
    std::map<std::vector<std::string>, ScalarWeights> domain_weights;
    bool want_scalarized =
        std::find(planners.begin(), planners.end(), "scalarized") != planners.end();
    if (want_scalarized && !per_instance_m) {
        for (const auto& [name, s] : instances) {
            if (domain_weights.count(s.objectives)) continue;
            const Context* ctx = s.find_context(s.true_context);
            domain_weights[s.objectives] = estimate_M(s, ctx->ordering, 50, seed);
        }
    }

    struct Task {
        const std::string* name;
        const Scenario* scenario;
        std::string planner;
    };
    std::vector<Task> tasks;
    for (const auto& [name, s] : instances)
        for (const auto& p : planners) tasks.push_back(Task{&name, &s, p});

    std::vector<BenchRow> rows(tasks.size());
    std::vector<std::string> errors(tasks.size());

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int ti = 0; ti < static_cast<int>(tasks.size()); ++ti) {
        const Task& task = tasks[ti];
        BenchRow row;
        row.instance = *task.name;
        row.planner = task.planner;
        try {
            const Scenario& s = *task.scenario;
            const Context* ctx = s.find_context(s.true_context);
            auto t0 = std::chrono::steady_clock::now();
            PlanResult r;
            if (task.planner == "lcbs") {
                LcbsOptions opts;
                opts.budget_seconds = budget_seconds;
                r = lcbs_plan(s, ctx->ordering, nullptr, opts);
            } else if (task.planner == "scalarized") {
                ScalarWeights w = per_instance_m
                                      ? estimate_M(s, ctx->ordering, 50, seed)
                                      : domain_weights.at(s.objectives);
                r = scalarized_cbs(s, ctx->ordering, w, budget_seconds);
            } else {
                throw ModelError("unknown planner '" + task.planner + "'");
            }
            row.wall_ms = elapsed_ms(t0);
            switch (r.status) {
                case PlanStatus::Success: row.status = "ok"; break;
                case PlanStatus::Infeasible: row.status = "infeasible"; break;
                case PlanStatus::Timeout: row.status = "timeout"; break;
            }
            if (r.plan) {
                row.cost = r.plan->cost;
                if (use_oracle) {
                    auto oracle = brute_force_lex_oracle(s, ctx->ordering, oracle_horizon);
                    if (!oracle || oracle->cost != r.plan->cost) row.status = "suboptimal";
                }
            }
        } catch (const std::exception& e) {
            row.status = "error";
            errors[ti] = e.what();
        }
        rows[ti] = std::move(row);
    }
    return rows;
}

std::string bench_to_csv(const std::vector<BenchRow>& rows, int n) {
    std::ostringstream os;
    os << "instance,planner";
    for (int i = 0; i < n; ++i) os << ",c_" << (i + 1);
    os << ",wall_ms,status\n";
    for (const auto& r : rows) {
        os << r.instance << "," << r.planner;
        for (int i = 0; i < n; ++i)
            os << "," << (i < static_cast<int>(r.cost.size()) ? fmt(r.cost[i]) : "");
        os << "," << fmt(r.wall_ms) << "," << r.status << "\n";
    }
    return os.str();
}

}  // namespace mrplan
