#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "mrplan/harness.hpp"
#include "mrplan/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace mrplan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitInput = 4;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot open '" + path + "' for writing");
    f << content;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file(path, content);
}

std::vector<std::string> robot_ids(const Scenario& s) {
    std::vector<std::string> ids;
    for (const auto& r : s.robots) ids.push_back(r.id);
    return ids;
}

int exit_code_for(RunStatus st) {
    switch (st) {
        case RunStatus::Success: return kExitOk;
        case RunStatus::Ambiguous:
        case RunStatus::Infeasible: return kExitInfeasible;
        case RunStatus::Timeout: return kExitTimeout;
    }
    return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-robot context inference and lexicographic planning"};
    app.require_subcommand(1);
    app.fallthrough();

    unsigned long long seed = 1;
    app.add_option("--seed", seed, "global random seed")->capture_default_str();

    // gen
    auto* gen = app.add_subcommand("gen", "generate a scenario");
    GenParams gp;
    std::string gen_flavor = "salp", gen_out;
    double gen_slip = 0.0;
    gen->add_option("--flavor", gen_flavor, "salp|warehouse|firefight")->capture_default_str();
    gen->add_option("--width", gp.width)->capture_default_str();
    gen->add_option("--height", gp.height)->capture_default_str();
    gen->add_option("--robots", gp.robots)->capture_default_str();
    gen->add_option("--landmarks", gp.landmarks)->capture_default_str();
    gen->add_option("--redundant-fraction", gp.redundant_fraction)->capture_default_str();
    gen->add_option("--contexts", gp.contexts)->capture_default_str();
    gen->add_option("--obstacle-density", gp.obstacle_density)->capture_default_str();
    gen->add_option("--slip", gen_slip, "attach a slip model with this probability");
    gen->add_option("--out", gen_out, "output path (default stdout)");

    // infer
    auto* infer = app.add_subcommand("infer", "run stage-1 context inference only");
    std::string infer_scenario, infer_trace_out;
    bool infer_random = false;
    infer->add_option("scenario", infer_scenario, "scenario JSON")->required();
    infer->add_option("--trace-out", infer_trace_out, "inference trace CSV path");
    infer->add_flag("--random-baseline", infer_random, "use the random-order baseline");

    // plan
    auto* plan = app.add_subcommand("plan", "run stage-2 planning only");
    std::string plan_scenario, plan_context, plan_out;
    double plan_budget = 0.0;
    int plan_slack = 2;
    plan->add_option("scenario", plan_scenario)->required();
    plan->add_option("--context", plan_context, "plan under this context's ordering");
    plan->add_option("--budget-seconds", plan_budget)->capture_default_str();
    plan->add_option("--horizon-slack", plan_slack)->capture_default_str();
    plan->add_option("--out", plan_out, "plan CSV path (default stdout)");

    // run
    auto* run = app.add_subcommand("run", "run the full two-stage pipeline");
    std::string run_scenario, run_trace_out, run_plan_out;
    double run_budget = 0.0;
    run->add_option("scenario", run_scenario)->required();
    run->add_option("--budget-seconds", run_budget)->capture_default_str();
    run->add_option("--trace-out", run_trace_out);
    run->add_option("--plan-out", run_plan_out);

    // bench
    auto* bench = app.add_subcommand("bench", "benchmark planners over an instance directory");
    std::string bench_dir, bench_planners = "lcbs", bench_out;
    double bench_budget = 60.0;
    bool bench_oracle = false, bench_per_instance_m = false;
    int bench_oracle_horizon = 16;
    bench->add_option("dir", bench_dir, "directory of scenario JSON files")->required();
    bench->add_option("--budget-seconds", bench_budget)->capture_default_str();
    bench->add_option("--planners", bench_planners, "comma-separated: lcbs,scalarized")
        ->capture_default_str();
    bench->add_flag("--oracle", bench_oracle, "verify costs against the brute-force oracle");
    bench->add_option("--oracle-horizon", bench_oracle_horizon)->capture_default_str();
    bench->add_flag("--per-instance-m", bench_per_instance_m,
                    "estimate scalarization M per instance instead of per domain");
    bench->add_option("--out", bench_out, "results CSV path (default stdout)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "plan, then execute under the stochastic model");
    std::string sim_scenario;
    double sim_slip = -1.0, sim_budget = 0.0;
    int sim_max_replans = 50;
    bool sim_full = false;
    sim->add_option("scenario", sim_scenario)->required();
    sim->add_option("--slip", sim_slip, "attach a slip model (overrides any in the file)");
    sim->add_option("--budget-seconds", sim_budget)->capture_default_str();
    sim->add_option("--max-replans", sim_max_replans)->capture_default_str();
    sim->add_flag("--full-replan", sim_full, "joint replan on any deviation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        if (*gen) {
            gp.flavor = flavor_from_string(gen_flavor);
            gp.seed = seed;
            Scenario s = generate(gp);
            if (gen_slip > 0.0) s = with_slip_model(s, gen_slip);
            emit(gen_out, scenario_to_json(s) + "\n");
            return kExitOk;
        }

        if (*infer) {
            Scenario s = load_scenario(infer_scenario);
            CimopResult r;
            try {
                r = infer_random ? random_inference_baseline(s, seed) : run_cimop(s);
            } catch (const AmbiguousContextError& e) {
                std::cerr << "ambiguous: " << e.what() << "\n";
                return kExitInfeasible;
            } catch (const AssignmentInfeasibleError& e) {
                std::cerr << "infeasible: " << e.what() << "\n";
                return kExitInfeasible;
            } catch (const TransitInfeasibleError& e) {
                std::cerr << "infeasible: " << e.what() << "\n";
                return kExitInfeasible;
            }
            WorldGraph g = s.planning_graph();
            std::string csv = trace_to_csv(g, r.trace, robot_ids(s));
            if (!infer_trace_out.empty()) write_file(infer_trace_out, csv);
            std::cout << "inferred_context," << r.inferred_context << "\n"
                      << "steps," << r.trace.total_steps << "\n"
                      << "cumulative_entropy," << r.trace.cumulative_entropy << "\n";
            return kExitOk;
        }

        if (*plan) {
            Scenario s = load_scenario(plan_scenario);
            const Context* ctx = nullptr;
            if (!plan_context.empty()) {
                ctx = s.find_context(plan_context);
                if (!ctx) throw InputError("unknown context '" + plan_context + "'");
            } else {
                Belief b = Belief::from_scenario(s);
                if (entropy(b) != 0)
                    throw InputError("initial belief is not collapsed; pass --context");
                ctx = s.find_context(b.argmax());
            }
            LcbsOptions opts;
            opts.budget_seconds = plan_budget;
            opts.horizon_slack = plan_slack;
            PlanResult r = lcbs_plan(s, ctx->ordering, nullptr, opts);
            if (r.status == PlanStatus::Timeout) {
                std::cerr << "timeout: " << r.diagnostics << "\n";
                return kExitTimeout;
            }
            if (r.status == PlanStatus::Infeasible) {
                std::cerr << "infeasible: " << r.diagnostics << "\n";
                return kExitInfeasible;
            }
            WorldGraph g = s.planning_graph();
            emit(plan_out, plan_to_csv(g, *r.plan, robot_ids(s)));
            return kExitOk;
        }

        if (*run) {
            Scenario s = load_scenario(run_scenario);
            RunRecord rec = run_two_stage(s, run_budget, fs::path(run_scenario).stem().string());
            WorldGraph g = s.planning_graph();
            if (!run_trace_out.empty() && rec.trace)
                write_file(run_trace_out, trace_to_csv(g, *rec.trace, robot_ids(s)));
            if (!run_plan_out.empty() && rec.plan)
                write_file(run_plan_out, plan_to_csv(g, *rec.plan, robot_ids(s)));
            std::cout << "status," << run_status_to_string(rec.status) << "\n"
                      << "inferred_context," << rec.inferred_context << "\n"
                      << "stage1_ms," << rec.stage1_ms << "\n"
                      << "stage2_ms," << rec.stage2_ms << "\n";
            if (rec.plan) {
                std::cout << "cost";
                for (double c : rec.plan->cost) std::cout << "," << c;
                std::cout << "\n";
            }
            return exit_code_for(rec.status);
        }

        if (*bench) {
            std::vector<std::pair<std::string, Scenario>> instances;
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(bench_dir))
                if (entry.path().extension() == ".json") files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            if (files.empty()) throw InputError("no .json scenarios in '" + bench_dir + "'");
            for (const auto& f : files)
                instances.emplace_back(f.stem().string(), load_scenario(f.string()));

            std::vector<std::string> planners;
            for (size_t i = 0, j; i < bench_planners.size(); i = j + 1) {
                j = bench_planners.find(',', i);
                if (j == std::string::npos) j = bench_planners.size();
                if (j > i) planners.push_back(bench_planners.substr(i, j - i));
            }
            auto rows = run_bench(instances, planners, bench_budget, bench_oracle,
                                  bench_oracle_horizon, seed, bench_per_instance_m);
            int n = instances.front().second.n_objectives();
            emit(bench_out, bench_to_csv(rows, n));
            return kExitOk;
        }

        if (*sim) {
            Scenario s = load_scenario(sim_scenario);
            if (sim_slip >= 0.0) s = with_slip_model(s, sim_slip);
            if (!s.stochastic)
                throw InputError("scenario has no stochastic model; pass --slip");
            RunRecord rec = run_two_stage(s, sim_budget);
            if (rec.status != RunStatus::Success) {
                std::cerr << "planning failed: " << run_status_to_string(rec.status) << "\n";
                return exit_code_for(rec.status);
            }
            ExecutionResult ex = simulate_execution(s, rec, seed, sim_max_replans, sim_full);
            std::cout << "status,"
                      << (ex.status == ExecStatus::Success
                              ? "success"
                              : ex.status == ExecStatus::ReplanLimit ? "replan_limit" : "stuck")
                      << "\n"
                      << "steps," << ex.steps << "\n";
            std::cout << "replans";
            for (int r : ex.replans) std::cout << "," << r;
            std::cout << "\n";
            return ex.status == ExecStatus::Success ? kExitOk : kExitInfeasible;
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        for (const auto& issue : e.issues) std::cerr << "  - " << issue << "\n";
        return kExitInput;
    } catch (const GenerationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
