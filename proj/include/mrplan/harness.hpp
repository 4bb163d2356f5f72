#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mrplan/baselines.hpp"
#include "mrplan/belief.hpp"
#include "mrplan/cimop.hpp"
#include "mrplan/core.hpp"
#include "mrplan/lcbs.hpp"

namespace mrplan {

struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Flavor { Salp, Warehouse, Firefight };

Flavor flavor_from_string(const std::string& name);
std::string flavor_to_string(Flavor f);

struct GenParams {
    Flavor flavor = Flavor::Salp;
    int width = 16;
    int height = 16;
    int robots = 5;
    int landmarks = 6;
    double redundant_fraction = 0.25;
    int contexts = 3;
    double obstacle_density = 0.15;
    unsigned long long seed = 1;
};

/// Builds a 4-connected grid scenario for the requested domain flavor.
/// Non-redundant landmarks jointly distinguish all contexts; redundant ones
/// carry the trivial one-cell partition. Deterministic in the seed.
Scenario generate(const GenParams& p);

/// Adds a slip model: each move reaches its target with probability
/// 1 - slip and stays put otherwise. Waits are deterministic.
Scenario with_slip_model(const Scenario& s, double slip);

/// Tiny single-robot instance whose lex-optimal route carries a
/// second-priority cost of M + 1, defeating geometric scalarization built
/// from an M that never observed it.
Scenario make_m_violation_scenario(double M);

enum class RunStatus { Success, Ambiguous, Infeasible, Timeout };

std::string run_status_to_string(RunStatus s);

struct RunRecord {
    std::string scenario_id;
    RunStatus status = RunStatus::Infeasible;
    std::optional<InferenceTrace> trace;
    std::string inferred_context;
    std::optional<JointPlan> plan;
    double stage1_ms = 0.0;
    double stage2_ms = 0.0;
};

/// CIMOP followed by LCBS from the stage-1 end positions under the inferred
/// context's ordering.
RunRecord run_two_stage(const Scenario& s, double budget_seconds,
                        const std::string& scenario_id = "scenario");

enum class ExecStatus { Success, ReplanLimit, Stuck };

struct ExecutionResult {
    ExecStatus status = ExecStatus::Stuck;
    int steps = 0;
    std::vector<int> replans;          // per robot
    std::vector<Path> realized;        // per robot, realized positions by step
};

/// Executes the stage-2 plan under the scenario's stochastic model. A robot
/// that lands off-plan is replanned with LA* against the other robots'
/// committed paths (prioritized repair); at most `max_replans` replans per
/// robot. With `full_replan` any deviation triggers a joint replan instead.
ExecutionResult simulate_execution(const Scenario& s, const RunRecord& rec,
                                   unsigned long long seed, int max_replans = 50,
                                   bool full_replan = false);

struct MetricsOutput {
    std::string trajectories_csv;  // run, step, entropy
    std::string summary_csv;       // per-run summary rows plus an aggregate mean row
};

MetricsOutput emit_metrics(const std::vector<RunRecord>& records, int n_objectives);

std::string trace_to_csv(const WorldGraph& g, const InferenceTrace& trace,
                         const std::vector<std::string>& robot_ids);

std::string plan_to_csv(const WorldGraph& g, const JointPlan& plan,
                        const std::vector<std::string>& robot_ids);

/// Fraction of instances where the planner succeeds within budget AND its
/// joint cost vector equals the brute-force lex oracle's exactly.
double success_rate(const std::vector<Scenario>& instances,
                    const std::function<PlanResult(const Scenario&, double)>& planner,
                    double budget_seconds, int oracle_horizon);

struct BenchRow {
    std::string instance;
    std::string planner;
    CostVector cost;  // empty unless success
    double wall_ms = 0.0;
    std::string status;
};

/// Runs the named planners ("lcbs", "scalarized") over the instances,
/// optionally diffing against the oracle. Instances run in parallel.
/// Scalarization weights are estimated per domain (instances grouped by
/// objective set, M taken from each group's first instance) unless
/// per_instance_m is set.
std::vector<BenchRow> run_bench(const std::vector<std::pair<std::string, Scenario>>& instances,
                                const std::vector<std::string>& planners, double budget_seconds,
                                bool use_oracle, int oracle_horizon, unsigned long long seed,
                                bool per_instance_m = false);

std::string bench_to_csv(const std::vector<BenchRow>& rows, int n_objectives);

}  // namespace mrplan
