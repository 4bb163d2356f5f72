#include "mrplan/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace mrplan {

bool LexOrdering::valid_for(int n) const {
    if (static_cast<int>(priority.size()) != n) return false;
    std::vector<bool> seen(n, false);
    for (int p : priority) {
        if (p < 0 || p >= n || seen[p]) return false;
        seen[p] = true;
    }
    return true;
}

LexResult lex_compare(const CostVector& u, const CostVector& v, const LexOrdering& ord) {
    if (u.size() != v.size() || u.size() != ord.priority.size())
        throw DimensionError("lex_compare: dimension mismatch");
    for (int idx : ord.priority) {
        if (u[idx] < v[idx]) return LexResult::Less;
        if (u[idx] > v[idx]) return LexResult::Greater;
    }
    return LexResult::Equal;
}

CostVector add(const CostVector& u, const CostVector& v) {
    if (u.size() != v.size()) throw DimensionError("add: dimension mismatch");
    CostVector r(u.size());
    for (size_t i = 0; i < u.size(); ++i) r[i] = u[i] + v[i];
    return r;
}

int WorldGraph::add_vertex(const std::string& id, std::optional<std::pair<double, double>> coords) {
    auto it = index.find(id);
    if (it != index.end()) return it->second;
    GraphVertex v;
    v.id = id;
    if (coords) {
        v.has_coords = true;
        v.x = coords->first;
        v.y = coords->second;
    }
    int i = static_cast<int>(vertices.size());
    vertices.push_back(std::move(v));
    out.emplace_back();
    wait_cost.emplace_back();
    index[id] = i;
    return i;
}

void WorldGraph::add_edge(const std::string& from, const std::string& to, CostVector cost) {
    int f = index_of(from);
    int t = index_of(to);
    if (f < 0 || t < 0) throw ModelError("add_edge: unknown vertex '" + (f < 0 ? from : to) + "'");
    out[f].push_back(GraphEdge{f, t, std::move(cost)});
}

int WorldGraph::index_of(const std::string& id) const {
    auto it = index.find(id);
    return it == index.end() ? -1 : it->second;
}

int Scenario::objective_index(const std::string& name) const {
    for (size_t i = 0; i < objectives.size(); ++i)
        if (objectives[i] == name) return static_cast<int>(i);
    return -1;
}

const Context* Scenario::find_context(const std::string& id) const {
    for (const auto& c : contexts)
        if (c.id == id) return &c;
    return nullptr;
}

const LandmarkSpec* Scenario::find_landmark(const std::string& id) const {
    for (const auto& l : landmarks)
        if (l.id == id) return &l;
    return nullptr;
}

std::vector<std::string> Scenario::context_ids() const {
    std::vector<std::string> ids;
    ids.reserve(contexts.size());
    for (const auto& c : contexts) ids.push_back(c.id);
    return ids;
}

WorldGraph Scenario::planning_graph() const {
    if (stochastic) return determinize(*stochastic, graph);
    return graph;
}

WorldGraph determinize(const StochasticModel& m, const WorldGraph& base) {
    WorldGraph g;
    g.vertices = base.vertices;
    g.index = base.index;
    g.out.assign(base.vertices.size(), {});
    g.wait_cost = base.wait_cost;
    for (const auto& [from, acts] : m.actions) {
        int f = g.index_of(from);
        if (f < 0) throw ModelError("determinize: unknown vertex '" + from + "'");
        for (const auto& a : acts) {
            if (a.outcomes.empty())
                throw ModelError("determinize: empty successor table at (" + from + ", " + a.name + ")");
            const std::string* best = nullptr;
            double best_p = -1.0;
            for (const auto& [succ, p] : a.outcomes) {
                if (p > best_p || (p == best_p && (!best || succ < *best))) {
                    best = &succ;
                    best_p = p;
                }
            }
            int t = g.index_of(*best);
            if (t < 0) throw ModelError("determinize: unknown successor '" + *best + "'");
            if (t == f) continue;  // argmax is a self-loop; waiting already covers it
            g.out[f].push_back(GraphEdge{f, t, a.cost});
        }
    }
    return g;
}

namespace {

bool cost_ok(const CostVector& c, int n) {
    if (static_cast<int>(c.size()) != n) return false;
    for (double x : c)
        if (!(x >= 0.0) || !std::isfinite(x)) return false;
    return true;
}

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& s) {
    std::vector<std::string> issues;
    auto fail = [&](const std::string& msg) { issues.push_back(msg); };
    const int n = s.n_objectives();

    if (n < 1) fail("objectives: must contain at least one objective");
    {
        std::set<std::string> seen;
        for (size_t i = 0; i < s.objectives.size(); ++i)
            if (!seen.insert(s.objectives[i]).second)
                fail("objectives[" + std::to_string(i) + "]: duplicate name '" + s.objectives[i] + "'");
    }

    {
        std::set<std::string> seen;
        for (size_t i = 0; i < s.contexts.size(); ++i) {
            const auto& c = s.contexts[i];
            if (!seen.insert(c.id).second)
                fail("contexts[" + std::to_string(i) + "]: duplicate id '" + c.id + "'");
            if (!c.ordering.valid_for(n))
                fail("contexts[" + std::to_string(i) + "].ordering: not a permutation of 0.." +
                     std::to_string(n - 1));
        }
        if (s.contexts.empty()) fail("contexts: must be non-empty");
    }
    if (!s.find_context(s.true_context))
        fail("true_context: '" + s.true_context + "' is not a declared context");

    for (int v = 0; v < s.graph.size(); ++v) {
        if (!cost_ok(s.graph.wait_cost[v], n))
            fail("graph.wait_costs['" + s.graph.id_of(v) + "']: missing or wrong length/sign");
        for (size_t e = 0; e < s.graph.out[v].size(); ++e)
            if (!cost_ok(s.graph.out[v][e].cost, n))
                fail("graph.edges from '" + s.graph.id_of(v) + "' [" + std::to_string(e) +
                     "]: cost must be " + std::to_string(n) + " non-negative finite components");
    }

    if (s.stochastic) {
        for (const auto& [from, acts] : s.stochastic->actions) {
            if (s.graph.index_of(from) < 0)
                fail("stochastic['" + from + "']: unknown vertex");
            for (const auto& a : acts) {
                if (a.outcomes.empty()) {
                    fail("stochastic['" + from + "']." + a.name + ": empty successor table");
                    continue;
                }
                double sum = 0.0;
                for (const auto& [succ, p] : a.outcomes) {
                    if (s.graph.index_of(succ) < 0)
                        fail("stochastic['" + from + "']." + a.name + ": unknown successor '" + succ + "'");
                    if (p < 0.0 || p > 1.0)
                        fail("stochastic['" + from + "']." + a.name + ": probability out of [0,1]");
                    sum += p;
                }
                if (std::abs(sum - 1.0) > 1e-9)
                    fail("stochastic['" + from + "']." + a.name + ": probabilities sum to " +
                         std::to_string(sum) + ", expected 1");
                if (!cost_ok(a.cost, n))
                    fail("stochastic['" + from + "']." + a.name + ": bad cost vector");
            }
        }
    }

    {
        std::set<std::string> lm_ids;
        for (size_t i = 0; i < s.landmarks.size(); ++i) {
            const auto& lm = s.landmarks[i];
            std::string where = "landmarks[" + std::to_string(i) + "]";
            if (!lm_ids.insert(lm.id).second) fail(where + ": duplicate id '" + lm.id + "'");
            if (lm.site.empty()) fail(where + ".site: must be non-empty");
            for (const auto& v : lm.site)
                if (s.graph.index_of(v) < 0) fail(where + ".site: unknown vertex '" + v + "'");
            int prev = 0;
            for (size_t t = 0; t < lm.tiers.size(); ++t) {
                const auto& tier = lm.tiers[t];
                std::string twhere = where + ".tiers[" + std::to_string(t) + "]";
                if (tier.min_robots < 1) fail(twhere + ".min_robots: must be positive");
                if (tier.min_robots < prev) fail(where + ".tiers: not sorted by min_robots ascending");
                prev = tier.min_robots;
                if (tier.min_robots > static_cast<int>(lm.site.size()))
                    fail(twhere + ".min_robots: exceeds site size " + std::to_string(lm.site.size()));
                std::map<std::string, int> covered;
                for (const auto& cell : tier.partition)
                    for (const auto& cid : cell) {
                        if (!s.find_context(cid)) fail(twhere + ".partition: unknown context '" + cid + "'");
                        covered[cid]++;
                    }
                for (const auto& c : s.contexts) {
                    auto it = covered.find(c.id);
                    if (it == covered.end())
                        fail(twhere + ".partition: context '" + c.id + "' not covered");
                    else if (it->second > 1)
                        fail(twhere + ".partition: context '" + c.id + "' appears in multiple cells");
                }
            }
        }
    }

    for (size_t i = 0; i < s.robots.size(); ++i) {
        const auto& r = s.robots[i];
        std::string where = "robots[" + std::to_string(i) + "]";
        if (s.graph.index_of(r.start) < 0) fail(where + ".start: unknown vertex '" + r.start + "'");
        if (s.graph.index_of(r.goal) < 0) fail(where + ".goal: unknown vertex '" + r.goal + "'");
        for (size_t j = 0; j < i; ++j) {
            if (s.robots[j].start == r.start)
                fail(where + ".start collides with robots[" + std::to_string(j) + "].start");
            if (s.robots[j].goal == r.goal)
                fail(where + ".goal collides with robots[" + std::to_string(j) + "].goal");
        }
    }

    {
        double sum = 0.0;
        for (const auto& [cid, p] : s.initial_belief) {
            if (!s.find_context(cid)) fail("initial_belief: unknown context '" + cid + "'");
            if (p < 0.0 || p > 1.0) fail("initial_belief['" + cid + "']: out of [0,1]");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            fail("initial_belief: probabilities sum to " + std::to_string(sum) + ", expected 1");
    }

    return issues;
}

void validate_or_throw(const Scenario& s) {
    auto issues = validate_scenario(s);
    if (issues.empty()) return;
    std::ostringstream os;
    os << "scenario validation failed (" << issues.size() << " issue(s)):";
    for (const auto& i : issues) os << "\n  " << i;
    throw ValidationError(os.str(), std::move(issues));
}

}  // namespace mrplan
