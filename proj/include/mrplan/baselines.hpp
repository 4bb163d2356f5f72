#pragma once

#include <string>
#include <vector>

#include "mrplan/core.hpp"
#include "mrplan/lcbs.hpp"

namespace mrplan {

/// Geometric scalarization weights: weights[j] multiplies the cost of the
/// j-th priority objective and equals M^(n-1-j).
struct ScalarWeights {
    double M = 0.0;
    std::vector<double> weights;
};

struct SamplingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OracleGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Estimates M from random start-to-goal walks (uniform successor choice,
/// capped at 2|V| steps, up to 10 retries per walk): M = 1 + the largest
/// lower-priority cost observed over all samples.
ScalarWeights estimate_M(const Scenario& s, const LexOrdering& ord, int samples,
                         unsigned long long seed);

ScalarWeights weights_for_M(double M, int n_objectives);

/// CBS whose low level minimizes the geometric scalarization of the cost
/// vector under `ord`. Reports the plan's true vector cost.
PlanResult scalarized_cbs(const Scenario& s, const LexOrdering& ord, const ScalarWeights& w,
                          double budget_seconds = 0.0);

struct OracleResult {
    CostVector cost;
    JointPlan plan;
};

/// Exhaustive lexicographic Dijkstra over joint timed states (vertex tuple,
/// arrival flags, timestep), excluding vertex and edge conflicts
/// transitionally. Guards: at most 3 robots, 30 vertices, horizon 16.
/// Returns nullopt when no conflict-free joint plan exists within horizon.
std::optional<OracleResult> brute_force_lex_oracle(const Scenario& s, const LexOrdering& ord,
                                                   int horizon,
                                                   const std::vector<int>* starts_override = nullptr);

}  // namespace mrplan
