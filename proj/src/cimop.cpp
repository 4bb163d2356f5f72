#include "mrplan/cimop.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>

namespace mrplan {

std::vector<int> hop_distances(const WorldGraph& g, int source) {
    std::vector<int> dist(g.size(), -1);
    std::queue<int> q;
    dist[source] = 0;
    q.push(source);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const auto& e : g.out[v])
            if (dist[e.to] < 0) {
                dist[e.to] = dist[v] + 1;
                q.push(e.to);
            }
    }
    return dist;
}

int min_robots_required(const LandmarkSpec& lm, const Belief& b0, int max_robots) {
    double best = 0.0;
    int best_k = max_robots + 1;
    for (int k = 1; k <= max_robots; ++k) {
        double r = expected_entropy_reduction(b0, lm, k);
        if (r > best) {
            best = r;
            best_k = k;
        }
    }
    if (best <= 0.0) return max_robots + 1;  // uninformative under b0
    return best_k;
}

std::vector<const LandmarkSpec*> landmark_visit_sequence(
    const std::map<std::string, int>& n_req, const std::vector<const LandmarkSpec*>& lms,
    const Belief& b) {
    struct Entry {
        double reduction;
        int req;
        const LandmarkSpec* lm;
    };
    std::vector<Entry> entries;
    entries.reserve(lms.size());
    for (const LandmarkSpec* lm : lms) {
        auto it = n_req.find(lm->id);
        int req = it == n_req.end() ? 1 : it->second;
        entries.push_back(Entry{expected_entropy_reduction(b, *lm, req), req, lm});
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.reduction != b.reduction) return a.reduction > b.reduction;
        if (a.req != b.req) return a.req < b.req;
        return a.lm->id < b.lm->id;
    });
    std::vector<const LandmarkSpec*> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.lm);
    return out;
}

RobotGroup assign_nearest_robots(const std::vector<int>& available, const LandmarkSpec& lm,
                                 int k, const WorldGraph& g, const std::vector<int>& positions) {
    if (static_cast<int>(available.size()) < k)
        throw AssignmentInfeasibleError("assign_nearest_robots: need " + std::to_string(k) +
                                        " robots, have " + std::to_string(available.size()));
    std::vector<int> site;
    for (const auto& v : lm.site) site.push_back(g.index_of(v));

    // distance from each available robot to each site vertex
    const int inf = std::numeric_limits<int>::max();
    std::vector<std::vector<int>> dist(available.size(), std::vector<int>(site.size(), inf));
    std::vector<int> nearest(available.size(), inf);
    for (size_t r = 0; r < available.size(); ++r) {
        auto d = hop_distances(g, positions[available[r]]);
        for (size_t v = 0; v < site.size(); ++v) {
            if (d[site[v]] >= 0) dist[r][v] = d[site[v]];
            nearest[r] = std::min(nearest[r], dist[r][v]);
        }
    }

    // k nearest robots, ties by robot id
    std::vector<size_t> order(available.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return nearest[a] < nearest[b];
    });
    for (int i = 0; i < k; ++i)
        if (nearest[order[i]] == inf)
            throw AssignmentInfeasibleError("assign_nearest_robots: landmark '" + lm.id +
                                            "' unreachable for a needed robot");

    // greedy min-distance matching to distinct site vertices
    RobotGroup group;
    group.landmark_id = lm.id;
    std::vector<size_t> chosen(order.begin(), order.begin() + k);
    std::set<size_t> free_robots(chosen.begin(), chosen.end());
    std::set<size_t> free_sites;
    for (size_t v = 0; v < site.size(); ++v) free_sites.insert(v);
    std::vector<std::pair<int, int>> match;  // (available index, site index)
    while (!free_robots.empty()) {
        int best_d = inf;
        size_t best_r = 0, best_v = 0;
        bool found = false;
        for (size_t r : free_robots)
            for (size_t v : free_sites)
                if (dist[r][v] < best_d) {
                    best_d = dist[r][v];
                    best_r = r;
                    best_v = v;
                    found = true;
                }
        if (!found)
            throw AssignmentInfeasibleError("assign_nearest_robots: matching failed at landmark '" +
                                            lm.id + "'");
        match.emplace_back(static_cast<int>(best_r), static_cast<int>(best_v));
        free_robots.erase(best_r);
        free_sites.erase(best_v);
    }
    std::sort(match.begin(), match.end());
    for (const auto& [r, v] : match) {
        group.members.push_back(available[r]);
        group.targets.push_back(site[v]);
    }
    return group;
}

std::vector<Path> plan_to_landmarks(const Scenario& s, const std::vector<RobotGroup>& groups,
                                    const WorldGraph& g, const std::vector<int>& positions,
                                    double budget_seconds) {
    const int d = static_cast<int>(s.robots.size());
    std::vector<int> target(d, -1);
    for (const auto& grp : groups)
        for (size_t m = 0; m < grp.members.size(); ++m) target[grp.members[m]] = grp.targets[m];

    std::set<int> blocked;
    std::vector<int> agents;
    for (int i = 0; i < d; ++i) {
        if (target[i] >= 0)
            agents.push_back(i);
        else
            blocked.insert(positions[i]);
    }

    std::vector<Path> out(d);
    for (int i = 0; i < d; ++i)
        if (target[i] < 0) out[i] = Path{positions[i]};
    if (agents.empty()) return out;

    // reverse-BFS hop distance to each distinct target, skipping blocked cells
    std::vector<std::vector<int>> rev(g.size());
    for (int v = 0; v < g.size(); ++v)
        for (const auto& e : g.out[v]) rev[e.to].push_back(v);
    std::map<int, std::vector<int>> to_goal;
    for (int a : agents) {
        int goal = target[a];
        if (to_goal.count(goal)) continue;
        std::vector<int> dist(g.size(), -1);
        if (!blocked.count(goal)) {
            std::queue<int> q;
            dist[goal] = 0;
            q.push(goal);
            while (!q.empty()) {
                int v = q.front();
                q.pop();
                for (int u : rev[v])
                    if (dist[u] < 0 && !blocked.count(u)) {
                        dist[u] = dist[v] + 1;
                        q.push(u);
                    }
            }
        }
        to_goal[goal] = std::move(dist);
    }

    std::vector<int> starts, goals;
    for (int a : agents) {
        starts.push_back(positions[a]);
        goals.push_back(target[a]);
    }
    auto heuristic = [&](int v, int goal) {
        int h = to_goal.at(goal)[v];
        return h < 0 ? 1e18 : static_cast<double>(h);
    };
    auto step_cost = [](int, int) { return 1.0; };  // arrival-time (hop) objective
    auto r = cbs_scalar(g, starts, goals, step_cost, heuristic, blocked, budget_seconds);
    if (r.status != PlanStatus::Success)
        throw TransitInfeasibleError("plan_to_landmarks: " + r.diagnostics);
    for (size_t i = 0; i < agents.size(); ++i) out[agents[i]] = std::move(r.paths[i]);
    return out;
}

namespace {

CimopResult run_inference_loop(const Scenario& s, bool greedy, unsigned long long seed) {
    WorldGraph g = s.planning_graph();
    const int d = static_cast<int>(s.robots.size());
    Belief b = Belief::from_scenario(s);

    CimopResult res;
    std::vector<int> positions(d);
    for (int i = 0; i < d; ++i) positions[i] = g.index_of(s.robots[i].start);

    auto finish = [&](int steps) {
        res.trace.total_steps = steps;
        res.trace.inferred_context = b.argmax();
        res.trace.cumulative_entropy = 0;
        for (const auto& row : res.trace.rows) res.trace.cumulative_entropy += row.entropy;
        res.inferred_context = b.argmax();
        const Context* c = s.find_context(res.inferred_context);
        res.ordering = c->ordering;
        res.final_positions = positions;
        res.final_belief = b;
    };

    if (entropy(b) == 0) {  // nothing to infer; empty trace
        finish(0);
        return res;
    }

    std::map<std::string, int> n_req;
    for (const auto& lm : s.landmarks) {
        if (greedy) {
            n_req[lm.id] = min_robots_required(lm, b, d);
        } else {
            int req = 1;
            for (const auto& t : lm.tiers) req = std::max(req, t.min_robots);
            n_req[lm.id] = req;
        }
    }

    std::vector<std::string> shuffled_order;
    if (!greedy) {
        for (const auto& lm : s.landmarks) shuffled_order.push_back(lm.id);
        std::mt19937_64 rng(seed);
        for (size_t i = shuffled_order.size(); i > 1; --i)
            std::swap(shuffled_order[i - 1], shuffled_order[rng() % i]);
    }

    std::set<std::string> visited;
    std::vector<RobotGroup> groups;
    int step = 0;
    res.trace.rows.push_back(TraceRow{0, entropy(b), {}, positions});

    auto visited_list = [&] { return std::vector<std::string>(visited.begin(), visited.end()); };

    auto process_arrivals = [&]() {
        // groups whose every member stands on its target; landmark-id order
        std::vector<size_t> arrived;
        for (size_t gi = 0; gi < groups.size(); ++gi) {
            bool all = true;
            for (size_t m = 0; m < groups[gi].members.size(); ++m)
                if (positions[groups[gi].members[m]] != groups[gi].targets[m]) all = false;
            if (all) arrived.push_back(gi);
        }
        std::sort(arrived.begin(), arrived.end(), [&](size_t a, size_t c) {
            return groups[a].landmark_id < groups[c].landmark_id;
        });
        for (size_t gi : arrived) {
            const auto& grp = groups[gi];
            Observation omega = observe(s, grp.landmark_id, static_cast<int>(grp.members.size()));
            b = update_belief(b, omega);
            visited.insert(grp.landmark_id);
        }
        for (auto it = arrived.rbegin(); it != arrived.rend(); ++it)
            groups.erase(groups.begin() + *it);
        return !arrived.empty();
    };

    while (entropy(b) > 0) {
        if (greedy) {
            // recall in-flight groups whose landmark became redundant
            for (size_t gi = groups.size(); gi > 0; --gi) {
                const auto& grp = groups[gi - 1];
                const LandmarkSpec* lm = s.find_landmark(grp.landmark_id);
                if (expected_entropy_reduction(b, *lm, n_req[lm->id]) <= 0.0)
                    groups.erase(groups.begin() + (gi - 1));
            }
        }

        std::set<int> busy;
        std::set<std::string> assigned;
        for (const auto& grp : groups) {
            assigned.insert(grp.landmark_id);
            for (int m : grp.members) busy.insert(m);
        }
        std::vector<int> avail;
        for (int i = 0; i < d; ++i)
            if (!busy.count(i)) avail.push_back(i);

        std::vector<const LandmarkSpec*> candidates;
        if (greedy) {
            std::vector<const LandmarkSpec*> unvisited;
            for (const auto& lm : s.landmarks)
                if (!visited.count(lm.id) && !assigned.count(lm.id)) unvisited.push_back(&lm);
            candidates = landmark_visit_sequence(n_req, unvisited, b);
        } else {
            for (const auto& id : shuffled_order)
                if (!visited.count(id) && !assigned.count(id)) candidates.push_back(s.find_landmark(id));
        }

        for (const LandmarkSpec* lm : candidates) {
            int req = n_req[lm->id];
            if (req > d) continue;  // no satisfiable team size
            if (greedy && expected_entropy_reduction(b, *lm, req) <= 0.0) continue;
            if (static_cast<int>(avail.size()) < req) continue;
            RobotGroup grp = assign_nearest_robots(avail, *lm, req, g, positions);
            for (int m : grp.members) avail.erase(std::find(avail.begin(), avail.end(), m));
            groups.push_back(std::move(grp));
        }

        if (groups.empty())
            throw AmbiguousContextError(
                "inference stalled: no remaining landmark is informative and team-satisfiable "
                "(entropy " + std::to_string(entropy(b)) + ")");

        if (process_arrivals()) {
            // a group was already in place; the observation fires this step
            res.trace.rows.back().entropy = entropy(b);
            res.trace.rows.back().visited = visited_list();
            continue;
        }

        std::vector<Path> plans = plan_to_landmarks(s, groups, g, positions);
        int makespan = 0;
        for (const auto& p : plans) makespan = std::max(makespan, static_cast<int>(p.size()) - 1);
        for (int t = 1; t <= makespan; ++t) {
            ++step;
            for (int i = 0; i < d; ++i)
                positions[i] = t < static_cast<int>(plans[i].size()) ? plans[i][t] : plans[i].back();
            bool any = process_arrivals();
            res.trace.rows.push_back(TraceRow{step, entropy(b), visited_list(), positions});
            if (any) break;  // re-prioritize under the new belief
        }
    }

    finish(step);
    return res;
}

}  // namespace

CimopResult run_cimop(const Scenario& s) { return run_inference_loop(s, true, 0); }

CimopResult random_inference_baseline(const Scenario& s, unsigned long long seed) {
    return run_inference_loop(s, false, seed);
}

}  // namespace mrplan
