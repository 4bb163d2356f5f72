#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mrplan/core.hpp"

namespace mrplan {

/// A path is the sequence of vertices occupied at timesteps 0..len-1.
/// After its last entry a robot stays at the final vertex for conflict
/// checking but accrues no further cost.
using Path = std::vector<int>;

struct TimedState {
    int vertex;
    int t;
};

enum class ConstraintKind { Vertex, Edge };

struct Constraint {
    ConstraintKind kind;
    int robot;
    int v;       // vertex kind: forbidden vertex; edge kind: departure vertex
    int to;      // edge kind: arrival vertex (unused for vertex kind)
    int t;       // vertex kind: occupancy time; edge kind: departure time
};

struct Conflict {
    ConstraintKind kind;
    int t;        // vertex: occupancy time; edge: departure time
    int robot_i;
    int robot_j;
    int v;        // vertex: shared location; edge: robot_i's departure vertex
    int to;       // edge: robot_i's arrival vertex
};

/// Per-robot constraint lookup used by the low-level searches.
class ConstraintTable {
public:
    ConstraintTable() = default;
    ConstraintTable(const std::vector<Constraint>& all, int robot);

    bool blocks_vertex(int v, int t) const { return vertex_.count({v, t}) > 0; }
    bool blocks_edge(int from, int to, int t) const { return edge_.count({from, to, t}) > 0; }
    int latest_time() const { return latest_; }
    /// Latest time with a vertex constraint on v, or -1.
    int latest_vertex_time(int v) const;

private:
    std::set<std::pair<int, int>> vertex_;
    std::set<std::tuple<int, int, int>> edge_;
    int latest_ = 0;
};

using VectorHeuristic = std::function<CostVector(int)>;

/// Componentwise-admissible heuristic: Euclidean distance to the goal scaled
/// by each objective's minimum positive per-move-edge cost (zero if some edge
/// is free for that objective, or if the graph carries no coordinates).
VectorHeuristic make_grid_heuristic(const WorldGraph& g, int goal, int n_objectives);

CostVector grid_heuristic(const WorldGraph& g, int v, int goal, int n_objectives);

struct LaStarResult {
    Path path;
    CostVector cost;
};

/// Lexicographic A* over timed states (v, t). Pops lex-min f = g + h under
/// `ord`, keeps a single lex-best g per timed state, and accepts the goal
/// only when no vertex constraint on it remains at or after arrival.
std::optional<LaStarResult> la_star(const WorldGraph& g, int start, int goal,
                                    const LexOrdering& ord, const VectorHeuristic& h,
                                    const ConstraintTable& ct, int horizon);

/// Earliest conflict in the joint plan (robots padded at their goals).
/// Vertex conflicts at a timestep are reported before edge conflicts
/// departing at it; ties broken by smallest (i, j).
std::optional<Conflict> detect_first_conflict(const std::vector<Path>& paths);

std::pair<Constraint, Constraint> generate_constraints(const Conflict& c);

struct JointPlan {
    std::vector<Path> paths;  // one per robot, scenario order
    CostVector cost;          // sum over robots of path cost
};

enum class PlanStatus { Success, Infeasible, Timeout };

struct PlanResult {
    PlanStatus status = PlanStatus::Infeasible;
    std::optional<JointPlan> plan;
    std::string diagnostics;
    long long nodes_expanded = 0;
};

struct LcbsOptions {
    double budget_seconds = 0.0;  // 0 = unlimited
    int horizon_slack = 2;        // horizon = latest constraint time + slack * |V|
};

CostVector path_cost(const WorldGraph& g, const Path& p, int n_objectives);

/// Lexicographic CBS: LA* per robot at the low level, constraint-tree search
/// popped by lex-min joint cost at the high level. The first conflict-free
/// node popped is lexicographically optimal under `ord`.
PlanResult lcbs_plan(const Scenario& s, const LexOrdering& ord,
                     const std::vector<int>* starts_override = nullptr,
                     const LcbsOptions& opts = {});

// ---- scalar CBS machinery (single-objective low level) ----

struct ScalarAStarResult {
    Path path;
    double cost;
};

/// Time-expanded A* minimizing an arbitrary scalar per-step cost. Vertices in
/// `blocked` are impassable at all times. `h` must be admissible for the
/// scalar cost.
std::optional<ScalarAStarResult> scalar_astar(const WorldGraph& g, int start, int goal,
                                              const ConstraintTable& ct, int horizon,
                                              const std::function<double(int, int)>& step_cost,
                                              const std::function<double(int)>& h,
                                              const std::set<int>& blocked = {});

struct ScalarCbsResult {
    PlanStatus status = PlanStatus::Infeasible;
    std::vector<Path> paths;
    double scalar_cost = 0.0;
    std::string diagnostics;
};

/// Standard CBS with a scalar low level; used by the transit planner and the
/// scalarized baseline. step_cost(from, to) gives the cost of moving (or
/// waiting when from == to).
ScalarCbsResult cbs_scalar(const WorldGraph& g, const std::vector<int>& starts,
                           const std::vector<int>& goals,
                           const std::function<double(int, int)>& step_cost,
                           const std::function<double(int, int)>& heuristic,  // (v, goal)
                           const std::set<int>& blocked, double budget_seconds,
                           int horizon_slack = 2);

}  // namespace mrplan
