#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mrplan {

/// Cost under each objective, in the scenario's canonical objective order.
using CostVector = std::vector<double>;

enum class LexResult { Less, Equal, Greater };

/// Strict priority permutation over objective indices. priority[0] is the
/// most important objective.
struct LexOrdering {
    std::vector<int> priority;

    bool valid_for(int n_objectives) const;
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    ValidationError(std::string msg, std::vector<std::string> issues_in)
        : std::runtime_error(std::move(msg)), issues(std::move(issues_in)) {}
    std::vector<std::string> issues;
};

LexResult lex_compare(const CostVector& u, const CostVector& v, const LexOrdering& ord);

inline bool lex_less(const CostVector& u, const CostVector& v, const LexOrdering& ord) {
    return lex_compare(u, v, ord) == LexResult::Less;
}

CostVector add(const CostVector& u, const CostVector& v);

struct Context {
    std::string id;
    LexOrdering ordering;
};

struct GraphVertex {
    std::string id;
    bool has_coords = false;
    double x = 0.0;
    double y = 0.0;
};

struct GraphEdge {
    int from = -1;
    int to = -1;
    CostVector cost;
};

/// Directed graph with vector edge costs and an explicit wait self-loop
/// (with its own cost vector) per vertex. Move edges live in `out`; the
/// wait loop is stored separately in `wait_cost`.
struct WorldGraph {
    std::vector<GraphVertex> vertices;
    std::vector<std::vector<GraphEdge>> out;
    std::vector<CostVector> wait_cost;
    std::unordered_map<std::string, int> index;

    int add_vertex(const std::string& id, std::optional<std::pair<double, double>> coords = {});
    void add_edge(const std::string& from, const std::string& to, CostVector cost);
    int index_of(const std::string& id) const;  // -1 if absent
    int size() const { return static_cast<int>(vertices.size()); }
    const std::string& id_of(int v) const { return vertices[v].id; }
};

/// One stochastic action available at a vertex: a cost vector and a
/// probability table over successor vertex ids.
struct StochasticAction {
    std::string name;
    CostVector cost;
    std::vector<std::pair<std::string, double>> outcomes;
};

struct StochasticModel {
    // keyed by source vertex id; iteration order matters for determinism
    std::map<std::string, std::vector<StochasticAction>> actions;
};

struct Tier {
    int min_robots = 1;
    // disjoint context-id sets covering every context exactly once
    std::vector<std::vector<std::string>> partition;
};

struct LandmarkSpec {
    std::string id;
    std::vector<std::string> site;  // vertex ids forming the footprint
    std::vector<Tier> tiers;        // sorted by min_robots ascending
    bool visited = false;
};

struct RobotSpec {
    std::string id;
    std::string start;
    std::string goal;
};

struct Scenario {
    std::vector<std::string> objectives;
    WorldGraph graph;
    std::optional<StochasticModel> stochastic;
    std::vector<Context> contexts;
    std::string true_context;
    std::vector<LandmarkSpec> landmarks;
    std::vector<RobotSpec> robots;
    std::map<std::string, double> initial_belief;

    int n_objectives() const { return static_cast<int>(objectives.size()); }
    int objective_index(const std::string& name) const;
    const Context* find_context(const std::string& id) const;
    const LandmarkSpec* find_landmark(const std::string& id) const;
    std::vector<std::string> context_ids() const;

    /// The graph planners operate on: the determinized stochastic model
    /// when one is present, otherwise the declared graph.
    WorldGraph planning_graph() const;
};

/// Most-likely-outcome determinization: one edge per (vertex, action) to the
/// argmax-probability successor, ties broken by ascending successor id.
/// `base` supplies the vertex set and wait costs.
WorldGraph determinize(const StochasticModel& m, const WorldGraph& base);

/// Returns every invariant violation, each with a path into the scenario.
/// Empty result means the scenario is well formed.
std::vector<std::string> validate_scenario(const Scenario& s);

/// Throws ValidationError listing all violations.
void validate_or_throw(const Scenario& s);

}  // namespace mrplan
