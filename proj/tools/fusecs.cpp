// SPDX-License-Identifier: Apache-2.0
//
// fusecs: fused compressed sensing over fusion frames
// Copyright (C) 2026 The fusecs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// fusecs: experiment harness and one-shot fused recovery.
//
//   fusecs <experiment> [--config FILE] [--seed S] [--trials T] [--jobs J] [--full] [--out DIR]
//   fusecs plan --N N --r R --eps EPS
//   fusecs solve --matrix A.csv --frame SETS.txt --measurements Y.csv --eta ETA[,ETA...]
//
// Exit codes: 0 success, 2 configuration or input error, 3 a solver did not
// converge, 1 anything else.

#include "fusecs/expcli.hpp"
#include "fusecs/frames.hpp"
#include "fusecs/io.hpp"
#include "fusecs/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_config = 2;
constexpr int exit_nonconvergence = 3;

struct ExperimentArgs
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    int jobs = 1;
    bool full = false;
    std::string out = "results";
};

struct PlanArgs
{
    long long n = 0;
    long long r = 0;
    double eps = 0.01;
};

struct SolveArgs
{
    std::string matrix, frame, measurements, eta;
    std::string policy = "auto";
    std::string fusion = "exact";
    std::string execution = "sequential";
    int jobs = 0;
    int max_iter = fusecs::SolverOptions{}.max_iter;
    bool normalize = false;
    std::string out, report;
};

int run_plan(const PlanArgs &a)
{
    const int n = fusecs::min_projection_count(a.n, a.r, a.eps);
    std::cout << "n_min = " << n << "\n"
              << "uncovered_bound = " << fusecs::format_real(fusecs::uncovered_probability_bound(a.n, a.r, n))
              << "\n";
    return exit_ok;
}

std::vector<double> parse_etas(const std::string &text, fusecs::Index n)
{
    std::vector<double> etas;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(item, &used);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        if (used == 0 || used != item.size() || !(v >= 0.0))
            throw fusecs::ConfigError("--eta: expected nonnegative numbers, got '" + item + "'");
        etas.push_back(v);
    }
    if (etas.size() == 1)
        etas.assign(static_cast<std::size_t>(n), etas[0]);
    if (static_cast<fusecs::Index>(etas.size()) != n)
        throw fusecs::ConfigError("--eta: give one value or one per subspace");
    return etas;
}

int run_solve(const SolveArgs &s)
{
    using namespace fusecs;
    SensingMatrix a = [&] {
        try
        {
            return SensingMatrix::from_file(s.matrix, s.normalize);
        }
        catch (const Error &e)
        {
            throw ConfigError(e.what());
        }
    }();
    const FusionFrame frame = [&] {
        try
        {
            return read_frame(s.frame, a.cols());
        }
        catch (const Error &e)
        {
            throw ConfigError(e.what());
        }
    }();
    MeasurementSet ys;
    try
    {
        ys.measurements = read_measurements_csv(s.measurements);
    }
    catch (const Error &e)
    {
        throw ConfigError(e.what());
    }
    ys.noise_bounds = parse_etas(s.eta, frame.size());

    PipelineConfig cfg;
    if (s.policy == "auto")
        cfg.policy = SolverPolicy::automatic;
    else if (s.policy == "lsq")
        cfg.policy = SolverPolicy::force_lsq;
    else if (s.policy == "bpdn")
        cfg.policy = SolverPolicy::force_bpdn;
    else if (s.policy == "l1_analysis")
        cfg.policy = SolverPolicy::force_l1_analysis;
    else
        throw ConfigError("--policy must be auto, lsq, bpdn or l1_analysis");
    if (s.fusion == "exact")
        cfg.fusion = FusionMode::exact_diagonal;
    else if (s.fusion == "frame")
        cfg.fusion = FusionMode::frame_algorithm;
    else
        throw ConfigError("--fusion must be exact or frame");
    if (s.execution == "sequential")
        cfg.execution = ExecutionMode::sequential_online;
    else if (s.execution == "parallel")
        cfg.execution = ExecutionMode::parallel_batch;
    else
        throw ConfigError("--execution must be sequential or parallel");
    cfg.jobs = s.jobs;
    cfg.solver.max_iter = s.max_iter;

    RecoveryReport rep;
    try
    {
        ys.check(a.rows(), frame.size());
        rep = fused_recover(a, frame, ys, cfg);
    }
    catch (const DimensionError &e)
    {
        throw ConfigError(e.what());
    }
    catch (const InvalidFrameError &e)
    {
        throw ConfigError(e.what());
    }

    if (s.out.empty())
        write_vector_csv(std::cout, rep.fused_estimate.values());
    else
        write_vector_csv(s.out, rep.fused_estimate.values());

    if (!s.report.empty())
    {
        CsvTable t({"subspace", "solver", "iterations", "converged", "residual"});
        for (std::size_t i = 0; i < rep.residuals.size(); ++i)
            t.add_row({cell(static_cast<long long>(i + 1)), to_string(rep.solver_used[i]), cell(rep.iterations[i]),
                       rep.converged[i] ? "1" : "0", cell(rep.residuals[i])});
        t.save(s.report);
    }
    if (!rep.all_converged())
    {
        for (std::size_t i = 0; i < rep.converged.size(); ++i)
            if (!rep.converged[i])
                std::cerr << "fusecs: subspace " << i + 1 << " did not converge\n";
        return exit_nonconvergence;
    }
    return exit_ok;
}

int run_named_experiment(const std::string &name, const ExperimentArgs &a)
{
    using namespace fusecs;
    const Config cfg = a.config.empty() ? Config{} : Config::load(a.config);
    RunOptions opts;
    opts.seed = a.seed;
    opts.trials = a.trials;
    opts.jobs = a.jobs;
    opts.full = a.full;
    opts.out_dir = a.out;
    if (a.trials && *a.trials < 1)
        throw ConfigError("--trials must be at least 1");
    const ExperimentOutput out = run_experiment(name, cfg, opts);
    for (const auto &[k, v] : out.metrics)
        std::cout << k << " = " << format_real(v) << "\n";
    for (const auto &[stem, table] : out.tables)
        std::cout << "wrote " << (std::filesystem::path(a.out) / (stem + ".csv")).string() << "\n";
    if (!out.all_converged)
    {
        std::cerr << "fusecs: some solves hit the iteration limit\n";
        return exit_nonconvergence;
    }
    return exit_ok;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Fused compressed sensing over fusion frames"};
    app.require_subcommand(1);

    std::vector<std::pair<CLI::App *, std::string>> experiments;
    ExperimentArgs exp_args;
    for (const auto &name : fusecs::experiment_names())
    {
        CLI::App *sub = app.add_subcommand(name, fusecs::experiment_help(name));
        sub->add_option("--config", exp_args.config, "key = value config file")->check(CLI::ExistingFile);
        sub->add_option("--seed", exp_args.seed, "base seed");
        sub->add_option("--trials", exp_args.trials, "number of trials");
        sub->add_option("--jobs", exp_args.jobs, "concurrent trials")->check(CLI::PositiveNumber);
        sub->add_flag("--full", exp_args.full, "large-scale trial counts");
        sub->add_option("--out", exp_args.out, "output directory")->capture_default_str();
        experiments.emplace_back(sub, name);
    }

    PlanArgs plan;
    CLI::App *plan_cmd = app.add_subcommand("plan", "Minimal number of rank-r index sets covering N coordinates");
    plan_cmd->add_option("--N", plan.n, "ambient dimension")->required();
    plan_cmd->add_option("--r", plan.r, "rank of each index set")->required();
    plan_cmd->add_option("--eps", plan.eps, "allowed failure probability")->capture_default_str();

    SolveArgs solve;
    CLI::App *solve_cmd = app.add_subcommand("solve", "Fused recovery from CSV files");
    solve_cmd->add_option("--matrix", solve.matrix, "m x N sensing matrix (CSV)")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--frame", solve.frame, "index sets, one per line, 1-based")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--measurements", solve.measurements, "one row of m values per subspace")
        ->required()
        ->check(CLI::ExistingFile);
    solve_cmd->add_option("--eta", solve.eta, "noise bound, one value or one per subspace")->required();
    solve_cmd->add_option("--policy", solve.policy, "auto, lsq, bpdn or l1_analysis")->capture_default_str();
    solve_cmd->add_option("--fusion", solve.fusion, "exact or frame")->capture_default_str();
    solve_cmd->add_option("--execution", solve.execution, "sequential or parallel")->capture_default_str();
    solve_cmd->add_option("--jobs", solve.jobs, "worker threads for parallel execution");
    solve_cmd->add_option("--max-iter", solve.max_iter, "iteration limit of the l1 solvers")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    solve_cmd->add_flag("--normalize", solve.normalize, "scale the matrix by 1/sqrt(m)");
    solve_cmd->add_option("--out", solve.out, "fused estimate CSV (default: stdout)");
    solve_cmd->add_option("--report", solve.report, "per-subspace report CSV");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_config;
    }

    try
    {
        if (*plan_cmd)
            return run_plan(plan);
        if (*solve_cmd)
            return run_solve(solve);
        for (const auto &[sub, name] : experiments)
            if (*sub)
                return run_named_experiment(name, exp_args);
    }
    catch (const fusecs::ConfigError &e)
    {
        std::cerr << "fusecs: " << e.what() << "\n";
        return exit_config;
    }
    catch (const fusecs::InvalidArgument &e)
    {
        std::cerr << "fusecs: " << e.what() << "\n";
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "fusecs: " << e.what() << "\n";
        return exit_error;
    }
    return exit_error;
}
