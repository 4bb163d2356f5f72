#pragma once

#include <map>
#include <string>
#include <vector>

#include "mrplan/belief.hpp"
#include "mrplan/core.hpp"
#include "mrplan/lcbs.hpp"

namespace mrplan {

struct RobotGroup {
    std::vector<int> members;   // robot indices into Scenario::robots
    std::string landmark_id;
    std::vector<int> targets;   // one vertex per member, distinct, within the site
};

struct TraceRow {
    int step;
    int entropy;
    std::vector<std::string> visited;  // landmark ids visited so far
    std::vector<int> positions;        // per-robot vertex, scenario order
};

struct InferenceTrace {
    std::vector<TraceRow> rows;
    int total_steps = 0;
    std::string inferred_context;
    int cumulative_entropy = 0;  // sum of the entropy column
};

struct AmbiguousContextError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AssignmentInfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TransitInfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Smallest team size (<= max_robots) achieving the maximum expected entropy
/// reduction under b0. Returns max_robots + 1 when no team size is
/// informative.
int min_robots_required(const LandmarkSpec& lm, const Belief& b0, int max_robots);

/// Landmarks sorted by expected entropy reduction (with the landmark's
/// required team size) descending; ties by smaller requirement, then id.
/// Zero-reduction landmarks stay at the tail.
std::vector<const LandmarkSpec*> landmark_visit_sequence(
    const std::map<std::string, int>& n_req, const std::vector<const LandmarkSpec*>& lms,
    const Belief& b);

/// Picks the k available robots closest (hop distance) to the landmark site
/// and matches them to distinct site vertices greedily by distance.
RobotGroup assign_nearest_robots(const std::vector<int>& available, const LandmarkSpec& lm,
                                 int k, const WorldGraph& g, const std::vector<int>& positions);

/// Conflict-free timed paths moving each group member to its target; robots
/// outside any group hold position and are treated as static obstacles.
/// Returns one path per robot (idle robots get a single-entry path).
/// budget_seconds <= 0 means no wall-clock limit for the transit search.
std::vector<Path> plan_to_landmarks(const Scenario& s, const std::vector<RobotGroup>& groups,
                                    const WorldGraph& g, const std::vector<int>& positions,
                                    double budget_seconds = 0.0);

struct CimopResult {
    InferenceTrace trace;
    std::string inferred_context;
    LexOrdering ordering;
    std::vector<int> final_positions;
    Belief final_belief;
};

/// Stage-1 loop: greedy landmark prioritization, nearest-robot team
/// assignment, synchronized transit, and shared-belief updates on arrival,
/// until the belief collapses.
CimopResult run_cimop(const Scenario& s);

/// Same loop with a uniformly shuffled landmark order and team sizes fixed at
/// each landmark's largest tier requirement. Comparison baseline.
CimopResult random_inference_baseline(const Scenario& s, unsigned long long seed);

/// BFS hop distances from `source` over move edges. -1 where unreachable.
std::vector<int> hop_distances(const WorldGraph& g, int source);

}  // namespace mrplan
