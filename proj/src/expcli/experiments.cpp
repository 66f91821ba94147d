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

#include "fusecs/analysis.hpp"
#include "fusecs/expcli.hpp"
#include "fusecs/frames.hpp"
#include "fusecs/pipeline.hpp"
#include "fusecs/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <sstream>

namespace fusecs
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double relative_error(const Vector &estimate, const Vector &truth)
{
    const double tn = truth.norm();
    const double err = (estimate - truth).norm();
    return tn > 0.0 ? err / tn : err;
}

// Keys every experiment accepts.
const std::set<std::string> common_keys = {"preset", "seed", "trials", "max_iter", "tol_abs", "tol_rel", "penalty"};

std::set<std::string> keys_with(std::initializer_list<std::string> extra)
{
    std::set<std::string> k = common_keys;
    k.insert(extra);
    return k;
}

SolverOptions solver_options(const Config &cfg)
{
    SolverOptions o;
    o.max_iter = static_cast<int>(cfg.get_int("max_iter", o.max_iter));
    o.tol_abs = cfg.get_double("tol_abs", o.tol_abs);
    o.tol_rel = cfg.get_double("tol_rel", o.tol_rel);
    o.penalty = cfg.get_double("penalty", o.penalty);
    try
    {
        o.validate();
    }
    catch (const InvalidArgument &e)
    {
        throw ConfigError(e.what());
    }
    return o;
}

SolverPolicy parse_policy(const std::string &v)
{
    if (v == "auto")
        return SolverPolicy::automatic;
    if (v == "lsq")
        return SolverPolicy::force_lsq;
    if (v == "bpdn")
        return SolverPolicy::force_bpdn;
    if (v == "l1_analysis")
        return SolverPolicy::force_l1_analysis;
    throw ConfigError("policy must be auto, lsq, bpdn or l1_analysis (got '" + v + "')");
}

Index positive(const Config &cfg, const std::string &key)
{
    const long long v = cfg.get_int(key);
    if (v < 1)
        throw ConfigError("config key '" + key + "' must be at least 1");
    return static_cast<Index>(v);
}

Index nonnegative(const Config &cfg, const std::string &key)
{
    const long long v = cfg.get_int(key);
    if (v < 0)
        throw ConfigError("config key '" + key + "' must be nonnegative");
    return static_cast<Index>(v);
}

void require(bool ok, const std::string &what)
{
    if (!ok)
        throw ConfigError(what);
}

// Row prefix (experiment, trial, trial_seed) and the scalar config columns
// that make each row replayable on its own.
class TableLayout
{
public:
    TableLayout(std::string experiment, const Config &cfg) : experiment_(std::move(experiment))
    {
        for (const auto &[k, v] : cfg.values())
        {
            if (v.find(',') != std::string::npos)
                continue;
            keys_.push_back("cfg_" + k);
            values_.push_back(v);
        }
    }

    CsvTable make(const std::vector<std::string> &cols) const
    {
        std::vector<std::string> h = {"experiment", "trial", "trial_seed"};
        h.insert(h.end(), cols.begin(), cols.end());
        h.insert(h.end(), keys_.begin(), keys_.end());
        return CsvTable(std::move(h));
    }

    std::vector<std::string> row(const std::string &trial, std::uint64_t seed, std::vector<std::string> cells) const
    {
        std::vector<std::string> r = {experiment_, trial, cell(seed)};
        r.insert(r.end(), cells.begin(), cells.end());
        r.insert(r.end(), values_.begin(), values_.end());
        return r;
    }

private:
    std::string experiment_;
    std::vector<std::string> keys_;
    std::vector<std::string> values_;
};

struct Stats
{
    double min = 0.0, mean = 0.0, max = 0.0;
};

Stats stats_of(const std::vector<double> &v)
{
    Stats s;
    if (v.empty())
        return s;
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    return s;
}

// First `count` index sets of one seeded rank-r sequence, so families for
// increasing counts are nested.
FusionFrame nested_family(Index n_dim, Index r, Index count, std::uint64_t seed)
{
    return build_family(ProjectionFamilySpec::random_fixed_rank(n_dim, r, count, seed));
}

// Single-sensor BPDN on y = A x + e.
SolveResult global_bpdn(const SensingMatrix &a, const Vector &x, const Vector &e, const SolverOptions &opts)
{
    return bpdn(a.entries(), a.entries() * x + e, e.norm(), opts);
}

Vector scaled_direction(Index m, double norm, std::uint64_t seed)
{
    if (norm == 0.0)
        return Vector::Zero(m);
    Rng rng(seed);
    const Vector g = gaussian_vector(m, rng);
    return norm / g.norm() * g;
}

// ---- recovery_examples --------------------------------------------------

void run_recovery_examples(const Config &cfg, const RunOptions &opts, ExperimentOutput &out)
{
    cfg.require_known(keys_with({"N", "m", "s", "r", "n", "policy", "eta", "global"}));
    const Index n_dim = positive(cfg, "N"), m = positive(cfg, "m"), s = nonnegative(cfg, "s");
    const Index r = positive(cfg, "r"), n = positive(cfg, "n");
    const int trials = static_cast<int>(positive(cfg, "trials"));
    const std::uint64_t seed = cfg.get_seed("seed", 0);
    const double eta = cfg.get_double("eta", 0.0);
    const bool with_global = cfg.get_bool("global", true);
    require(s <= n_dim && r <= n_dim, "need s <= N and r <= N");
    require(eta >= 0.0, "eta must be nonnegative");
    PipelineConfig pc;
    pc.policy = parse_policy(cfg.get_string("policy", "auto"));
    pc.solver = solver_options(cfg);
    pc.allow_uncovered = true;

    struct Trial
    {
        std::uint64_t seed;
        double fused_error, global_error, fused_seconds, global_seconds;
        int lsq, l1, lower;
        bool converged;
    };
    const auto results = run_indexed<Trial>(trials, opts.jobs, [&](int t) {
        Trial tr{};
        tr.seed = derive_seed(seed, static_cast<std::uint64_t>(t));
        const auto a = SensingMatrix::gaussian(m, n_dim, derive_seed(tr.seed, 0));
        const FusionFrame frame = nested_family(n_dim, r, n, derive_seed(tr.seed, 1));
        Rng xr(derive_seed(tr.seed, 2));
        const SignalVector x(sparse_gaussian_vector(n_dim, s, xr));
        const auto ys = synthesize_measurements(x, a, frame, NoiseSpec::exact({eta}, derive_seed(tr.seed, 3)));

        auto t0 = Clock::now();
        const RecoveryReport rep = fused_recover(a, frame, ys.set, pc);
        tr.fused_seconds = seconds_since(t0);
        tr.fused_error = relative_error(rep.fused_estimate.values(), x.values());
        tr.converged = rep.all_converged();
        tr.lower = frame.lower_bound();
        for (auto k : rep.solver_used)
            (k == SolverKind::lsq ? tr.lsq : tr.l1)++;

        tr.global_error = NAN;
        if (with_global)
        {
            t0 = Clock::now();
            const SolveResult g =
                global_bpdn(a, x.values(), scaled_direction(m, eta, derive_seed(tr.seed, 4)), pc.solver);
            tr.global_seconds = seconds_since(t0);
            tr.global_error = relative_error(g.solution, x.values());
            tr.converged = tr.converged && g.converged;
        }
        return tr;
    });

    const TableLayout layout("recovery_examples", out.effective);
    CsvTable table = layout.make({"method", "rel_error", "lower_frame_bound", "lsq_channels", "l1_channels"});
    CsvTable timing = layout.make({"method", "seconds"});
    int fused_ok = 0, global_bad = 0;
    std::vector<double> fe, ge, ft, gt;
    for (std::size_t t = 0; t < results.size(); ++t)
    {
        const Trial &tr = results[t];
        const std::string ti = cell(static_cast<long long>(t));
        table.add_row(layout.row(ti, tr.seed, {"fused", cell(tr.fused_error), cell(tr.lower), cell(tr.lsq), cell(tr.l1)}));
        timing.add_row(layout.row(ti, tr.seed, {"fused", cell(tr.fused_seconds)}));
        fe.push_back(tr.fused_error);
        ft.push_back(tr.fused_seconds);
        fused_ok += tr.fused_error <= 1e-3;
        if (with_global)
        {
            table.add_row(layout.row(ti, tr.seed, {"global", cell(tr.global_error), "1", "0", "1"}));
            timing.add_row(layout.row(ti, tr.seed, {"global", cell(tr.global_seconds)}));
            ge.push_back(tr.global_error);
            gt.push_back(tr.global_seconds);
            global_bad += tr.global_error > 0.1;
        }
        out.all_converged = out.all_converged && tr.converged;
    }
    out.tables = {{"recovery_examples", table}, {"recovery_examples_timing", timing}};
    out.metrics["fused_success_rate"] = static_cast<double>(fused_ok) / trials;
    out.metrics["mean_fused_error"] = stats_of(fe).mean;
    out.metrics["mean_fused_seconds"] = stats_of(ft).mean;
    if (with_global)
    {
        out.metrics["global_failure_rate"] = static_cast<double>(global_bad) / trials;
        out.metrics["mean_global_error"] = stats_of(ge).mean;
        out.metrics["mean_global_seconds"] = stats_of(gt).mean;
    }
}

// ---- projections_sweep --------------------------------------------------

void run_projections_sweep(const Config &cfg, const RunOptions &opts, ExperimentOutput &out)
{
    cfg.require_known(keys_with({"N", "m", "s", "r", "eps", "multipliers", "policy", "eta"}));
    const Index n_dim = positive(cfg, "N"), m = positive(cfg, "m"), s = nonnegative(cfg, "s");
    const Index r = positive(cfg, "r");
    const int trials = static_cast<int>(positive(cfg, "trials"));
    const std::uint64_t seed = cfg.get_seed("seed", 0);
    const double eps = cfg.get_double("eps");
    const double eta = cfg.get_double("eta", 0.0);
    require(s <= n_dim && r <= n_dim, "need s <= N and r <= N");
    require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    const int n_min = min_projection_count(n_dim, r, eps);
    std::vector<double> mults = cfg.get_double_list("multipliers");
    std::vector<Index> counts;
    for (double mu : mults)
    {
        require(mu > 0.0, "multipliers must be positive");
        counts.push_back(std::max<Index>(1, std::lround(mu * n_min)));
    }
    PipelineConfig pc;
    pc.policy = parse_policy(cfg.get_string("policy", "auto"));
    pc.solver = solver_options(cfg);
    pc.allow_uncovered = true;
    const Index n_max = *std::max_element(counts.begin(), counts.end());

    struct Point
    {
        double error;
        int lower;
        Index uncovered;
        bool converged;
    };
    struct Trial
    {
        std::uint64_t seed;
        std::vector<Point> points;
    };
    const auto results = run_indexed<Trial>(trials, opts.jobs, [&](int t) {
        Trial tr;
        tr.seed = derive_seed(seed, static_cast<std::uint64_t>(t));
        const auto a = SensingMatrix::gaussian(m, n_dim, derive_seed(tr.seed, 0));
        const FusionFrame all = nested_family(n_dim, r, n_max, derive_seed(tr.seed, 1));
        Rng xr(derive_seed(tr.seed, 2));
        const SignalVector x(sparse_gaussian_vector(n_dim, s, xr));
        for (Index c : counts)
        {
            const FusionFrame frame(n_dim, {all.projections().begin(), all.projections().begin() + c});
            const auto ys = synthesize_measurements(x, a, frame, NoiseSpec::exact({eta}, derive_seed(tr.seed, 3)));
            const RecoveryReport rep = fused_recover(a, frame, ys.set, pc);
            tr.points.push_back({relative_error(rep.fused_estimate.values(), x.values()), frame.lower_bound(),
                                 static_cast<Index>(validate(frame).uncovered.size()), rep.all_converged()});
        }
        return tr;
    });

    const TableLayout layout("projections_sweep", out.effective);
    CsvTable table = layout.make({"n", "multiplier", "n_min", "lower_frame_bound", "uncovered", "rel_error"});
    CsvTable summary = layout.make({"n", "multiplier", "n_min", "min_error", "mean_error", "max_error"});
    std::vector<std::vector<double>> per_count(counts.size());
    for (std::size_t t = 0; t < results.size(); ++t)
        for (std::size_t j = 0; j < counts.size(); ++j)
        {
            const Point &p = results[t].points[j];
            table.add_row(layout.row(cell(static_cast<long long>(t)), results[t].seed,
                                     {cell(counts[j]), cell(mults[j]), cell(n_min), cell(p.lower), cell(p.uncovered),
                                      cell(p.error)}));
            per_count[j].push_back(p.error);
            out.all_converged = out.all_converged && p.converged;
        }
    for (std::size_t j = 0; j < counts.size(); ++j)
    {
        const Stats st = stats_of(per_count[j]);
        summary.add_row(layout.row("all", seed,
                                   {cell(counts[j]), cell(mults[j]), cell(n_min), cell(st.min), cell(st.mean),
                                    cell(st.max)}));
        out.metrics["mean_error_n" + std::to_string(counts[j])] = st.mean;
    }
    out.metrics["n_min"] = n_min;
    out.tables = {{"projections_sweep", table}, {"projections_sweep_summary", summary}};
}

// ---- framebound_growth --------------------------------------------------

void run_framebound_growth(const Config &cfg, const RunOptions &, ExperimentOutput &out)
{
    cfg.require_known(keys_with({"N", "r", "n_first", "n_last", "n_step"}));
    const Index n_dim = positive(cfg, "N"), r = positive(cfg, "r");
    const int trials = static_cast<int>(positive(cfg, "trials"));
    const std::uint64_t seed = cfg.get_seed("seed", 0);
    const auto first = positive(cfg, "n_first"), last = positive(cfg, "n_last"), step = positive(cfg, "n_step");
    require(r <= n_dim, "need r <= N");
    require(first <= last, "need n_first <= n_last");
    std::vector<int> counts;
    for (Index c = first; c <= last; c += step)
        counts.push_back(static_cast<int>(c));

    const auto stats = expected_lower_bound_montecarlo(n_dim, r, counts, trials, seed);
    const TableLayout layout("framebound_growth", out.effective);
    CsvTable table = layout.make({"n", "zeta", "mean_lower_bound", "stddev_lower_bound", "independence_mean"});
    std::vector<double> xs, ys;
    for (const auto &st : stats)
    {
        // E[C] = sum_{l >= 1} P[C >= l] under the independence formula.
        double expect = 0.0;
        for (int l = 1; l <= st.count; ++l)
        {
            const double p = lower_bound_distribution(n_dim, r, st.count, l);
            expect += p;
            if (p < 1e-16)
                break;
        }
        const double zeta = static_cast<double>(r) * st.count / static_cast<double>(n_dim);
        table.add_row(layout.row("all", seed,
                                 {cell(st.count), cell(zeta), cell(st.mean), cell(st.stddev), cell(expect)}));
        xs.push_back(st.count);
        ys.push_back(st.mean);
    }
    const LinearFit fit = fit_line(xs, ys);
    CsvTable fit_table = layout.make({"slope", "intercept", "r_squared", "r_over_N"});
    const double ratio = static_cast<double>(r) / static_cast<double>(n_dim);
    fit_table.add_row(layout.row("all", seed, {cell(fit.slope), cell(fit.intercept), cell(fit.r_squared), cell(ratio)}));
    out.metrics["slope"] = fit.slope;
    out.metrics["intercept"] = fit.intercept;
    out.metrics["r_squared"] = fit.r_squared;
    out.metrics["slope_over_r_over_N"] = fit.slope / ratio;
    out.tables = {{"framebound_growth", table}, {"framebound_growth_fit", fit_table}};
}

// ---- noise_robustness ---------------------------------------------------

void run_noise_robustness(const Config &cfg, const RunOptions &opts, ExperimentOutput &out)
{
    cfg.require_known(keys_with({"N", "m", "s", "r", "eps", "thetas", "policy", "global"}));
    const Index n_dim = positive(cfg, "N"), m = positive(cfg, "m"), s = nonnegative(cfg, "s");
    const Index r = positive(cfg, "r");
    const int trials = static_cast<int>(positive(cfg, "trials"));
    const std::uint64_t seed = cfg.get_seed("seed", 0);
    const double eps = cfg.get_double("eps");
    const bool with_global = cfg.get_bool("global", true);
    const std::vector<double> thetas = cfg.get_double_list("thetas");
    require(s <= n_dim && r <= n_dim, "need s <= N and r <= N");
    require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    for (double th : thetas)
        require(th >= 0.0, "thetas must be nonnegative");
    const Index n_min = min_projection_count(n_dim, r, eps);
    PipelineConfig pc;
    pc.policy = parse_policy(cfg.get_string("policy", "auto"));
    pc.solver = solver_options(cfg);
    pc.allow_uncovered = true;

    std::vector<std::string> methods = {"fused_nmin", "fused_2nmin"};
    if (with_global)
        methods.push_back("global");
    struct Trial
    {
        std::uint64_t seed;
        std::vector<std::vector<double>> errors; // [theta][method]
        bool converged = true;
    };
    const auto results = run_indexed<Trial>(trials, opts.jobs, [&](int t) {
        Trial tr;
        tr.seed = derive_seed(seed, static_cast<std::uint64_t>(t));
        const auto a = SensingMatrix::gaussian(m, n_dim, derive_seed(tr.seed, 0));
        const FusionFrame wide = nested_family(n_dim, r, 2 * n_min, derive_seed(tr.seed, 1));
        const FusionFrame narrow(n_dim, {wide.projections().begin(), wide.projections().begin() + n_min});
        Rng xr(derive_seed(tr.seed, 2));
        const SignalVector x(sparse_gaussian_vector(n_dim, s, xr));
        // Noise directions depend on the trial only, never on theta.
        const std::uint64_t noise_seed = derive_seed(tr.seed, 3);
        for (double th : thetas)
        {
            std::vector<double> row;
            for (const FusionFrame *f : {&narrow, &wide})
            {
                const auto ys = synthesize_measurements(x, a, *f, NoiseSpec::exact({th}, noise_seed));
                const RecoveryReport rep = fused_recover(a, *f, ys.set, pc);
                row.push_back((rep.fused_estimate.values() - x.values()).norm());
                tr.converged = tr.converged && rep.all_converged();
            }
            if (with_global)
            {
                const SolveResult g = global_bpdn(a, x.values(), scaled_direction(m, th, derive_seed(tr.seed, 4)),
                                                  pc.solver);
                row.push_back((g.solution - x.values()).norm());
                tr.converged = tr.converged && g.converged;
            }
            tr.errors.push_back(std::move(row));
        }
        return tr;
    });

    const TableLayout layout("noise_robustness", out.effective);
    CsvTable table = layout.make({"theta", "method", "n", "error"});
    CsvTable summary = layout.make({"theta", "method", "n", "min_error", "mean_error", "max_error"});
    auto count_of = [&](std::size_t k) -> long long { return k == 0 ? n_min : k == 1 ? 2 * n_min : 1; };
    for (std::size_t t = 0; t < results.size(); ++t)
    {
        for (std::size_t j = 0; j < thetas.size(); ++j)
            for (std::size_t k = 0; k < methods.size(); ++k)
                table.add_row(layout.row(cell(static_cast<long long>(t)), results[t].seed,
                                         {cell(thetas[j]), methods[k], cell(count_of(k)),
                                          cell(results[t].errors[j][k])}));
        out.all_converged = out.all_converged && results[t].converged;
    }
    std::vector<std::vector<double>> means(methods.size());
    for (std::size_t j = 0; j < thetas.size(); ++j)
        for (std::size_t k = 0; k < methods.size(); ++k)
        {
            std::vector<double> v;
            for (const auto &tr : results)
                v.push_back(tr.errors[j][k]);
            const Stats st = stats_of(v);
            means[k].push_back(st.mean);
            summary.add_row(layout.row("all", seed,
                                       {cell(thetas[j]), methods[k], cell(count_of(k)), cell(st.min), cell(st.mean),
                                        cell(st.max)}));
        }
    for (std::size_t k = 0; k < methods.size(); ++k)
    {
        const LinearFit fit = fit_line(thetas, means[k]);
        out.metrics[methods[k] + "_slope"] = fit.slope;
        out.metrics[methods[k] + "_r_squared"] = fit.r_squared;
    }
    bool doubled_better = true;
    for (std::size_t j = 0; j < thetas.size(); ++j)
        doubled_better = doubled_better && means[1][j] <= means[0][j];
    out.metrics["doubled_not_worse"] = doubled_better ? 1.0 : 0.0;
    out.metrics["n_min"] = static_cast<double>(n_min);
    out.tables = {{"noise_robustness", table}, {"noise_robustness_summary", summary}};
}

// ---- doppler_demo -------------------------------------------------------

void run_doppler_demo(const Config &cfg, const RunOptions &opts, ExperimentOutput &out)
{
    cfg.require_known(keys_with({"N", "m", "levels", "sigma", "signal_sigma", "sparsity", "method", "global"}));
    const Index n_dim = positive(cfg, "N"), m = positive(cfg, "m");
    const int levels = static_cast<int>(nonnegative(cfg, "levels"));
    const int trials = static_cast<int>(positive(cfg, "trials"));
    const std::uint64_t seed = cfg.get_seed("seed", 0);
    const double sigma = cfg.get_double("sigma"), signal_sigma = cfg.get_double("signal_sigma", 0.0);
    const bool with_global = cfg.get_bool("global", true);
    const std::string method_name = cfg.get_string("method", "analysis");
    require(method_name == "analysis" || method_name == "synthesis", "method must be analysis or synthesis");
    require(sigma >= 0.0 && signal_sigma >= 0.0, "noise levels must be nonnegative");
    require(n_dim >= 2 && (n_dim & (n_dim - 1)) == 0, "N must be a power of two");
    require(levels >= 0 && (Index{1} << levels) <= n_dim, "levels must satisfy 2^levels <= N");
    const DictionaryMethod method =
        method_name == "analysis" ? DictionaryMethod::analysis : DictionaryMethod::synthesis;
    const SolverOptions so = solver_options(cfg);

    const Matrix haar = haar_basis(n_dim, levels);
    std::vector<SubspaceProjector> projectors;
    for (const auto &block : haar_level_blocks(n_dim, levels))
    {
        Matrix span(n_dim, static_cast<Index>(block.size()));
        for (std::size_t j = 0; j < block.size(); ++j)
            span.col(static_cast<Index>(j)) = haar.col(block[j]);
        projectors.push_back(SubspaceProjector::from_span(span));
    }
    const GeneralFusionFrame frame(projectors);
    const AnalysisOperator global_op = AnalysisOperator::from_dictionary(haar);

    struct Trial
    {
        std::uint64_t seed;
        double fused, global;
        bool converged;
    };
    const auto results = run_indexed<Trial>(trials, opts.jobs, [&](int t) {
        Trial tr{};
        tr.seed = derive_seed(seed, static_cast<std::uint64_t>(t));
        const SignalVector x = doppler_signal(n_dim, signal_sigma, derive_seed(tr.seed, 0));
        const auto a = SensingMatrix::gaussian(m, n_dim, derive_seed(tr.seed, 1));
        MeasurementSet ys;
        for (Index i = 0; i < frame.size(); ++i)
        {
            Rng nr(derive_seed(derive_seed(tr.seed, 2), static_cast<std::uint64_t>(i)));
            const Vector e = sigma * gaussian_vector(m, nr);
            ys.measurements.push_back(a.entries() * frame.projector(i).apply(x.values()) + e);
            ys.noise_bounds.push_back(e.norm());
        }
        const RecoveryReport rep = dict_fused_recover(a, haar, frame, ys, method, so);
        tr.fused = (rep.fused_estimate.values() - x.values()).norm();
        tr.converged = rep.all_converged();
        tr.global = NAN;
        if (with_global)
        {
            Rng nr(derive_seed(tr.seed, 3));
            const Vector e = sigma * gaussian_vector(m, nr);
            const SolveResult g = l1_analysis(a.entries(), global_op, a.entries() * x.values() + e, e.norm(), so);
            tr.global = (g.solution - x.values()).norm();
            tr.converged = tr.converged && g.converged;
        }
        return tr;
    });

    const TableLayout layout("doppler_demo", out.effective);
    CsvTable table = layout.make({"fused_error", "global_error", "fused_better"});
    int better = 0;
    std::vector<double> fe, ge;
    for (std::size_t t = 0; t < results.size(); ++t)
    {
        const Trial &tr = results[t];
        const bool b = with_global && tr.fused < tr.global;
        better += b;
        fe.push_back(tr.fused);
        ge.push_back(tr.global);
        table.add_row(layout.row(cell(static_cast<long long>(t)), tr.seed,
                                 {cell(tr.fused), cell(tr.global), b ? "1" : "0"}));
        out.all_converged = out.all_converged && tr.converged;
    }
    out.metrics["mean_fused_error"] = stats_of(fe).mean;
    if (with_global)
    {
        out.metrics["mean_global_error"] = stats_of(ge).mean;
        out.metrics["fused_better_rate"] = static_cast<double>(better) / trials;
    }
    out.tables = {{"doppler_demo", table}};
}

// ---- coverage_check -----------------------------------------------------

void run_coverage_check(const Config &cfg, const RunOptions &opts, ExperimentOutput &out)
{
    cfg.require_known(keys_with({"N", "r", "eps", "counts"}));
    const Index n_dim = positive(cfg, "N"), r = positive(cfg, "r");
    const int trials = static_cast<int>(positive(cfg, "trials"));
    const std::uint64_t seed = cfg.get_seed("seed", 0);
    const double eps = cfg.get_double("eps");
    require(r <= n_dim, "need r <= N");
    require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    const int n_min = min_projection_count(n_dim, r, eps);
    std::vector<long long> counts = cfg.get_int_list("counts");
    for (auto c : counts)
        require(c >= 1, "counts must be at least 1");

    const auto freqs = run_indexed<double>(static_cast<int>(counts.size()), opts.jobs, [&](int j) {
        const auto c = counts[static_cast<std::size_t>(j)];
        return coverage_failure_frequency(n_dim, r, c, trials, derive_seed(seed, static_cast<std::uint64_t>(c)));
    });

    const TableLayout layout("coverage_check", out.effective);
    CsvTable table = layout.make({"n", "empirical_uncovered", "bound", "n_min"});
    for (std::size_t j = 0; j < counts.size(); ++j)
    {
        const double bound = uncovered_probability_bound(n_dim, r, counts[j]);
        const std::uint64_t row_seed = derive_seed(seed, static_cast<std::uint64_t>(counts[j]));
        table.add_row(layout.row("all", row_seed, {cell(counts[j]), cell(freqs[j]), cell(bound), cell(n_min)}));
        out.metrics["frequency_n" + std::to_string(counts[j])] = freqs[j];
    }
    out.metrics["n_min"] = n_min;
    out.tables = {{"coverage_check", table}};
}

struct ExperimentEntry
{
    std::string name;
    std::string help;
    int full_trials;
    void (*run)(const Config &, const RunOptions &, ExperimentOutput &);
};

const std::vector<ExperimentEntry> &registry()
{
    static const std::vector<ExperimentEntry> entries = {
        {"recovery_examples",
         "Fused recovery of a dense signal from random rank-r index sets vs single-sensor BPDN.\n"
         "  presets: bpdn13 (default), lsq22a, lsq22b, tiny\n"
         "  recovery_examples.csv: method, rel_error, lower_frame_bound, lsq_channels, l1_channels\n"
         "  recovery_examples_timing.csv: method, seconds (wall clock, not reproducible)",
         20, run_recovery_examples},
        {"projections_sweep",
         "Fused error as the number of projections runs over multiples of the minimal count.\n"
         "  projections_sweep.csv: n, multiplier, n_min, lower_frame_bound, uncovered, rel_error\n"
         "  projections_sweep_summary.csv: n, multiplier, n_min, min_error, mean_error, max_error",
         100, run_projections_sweep},
        {"framebound_growth",
         "Mean lower frame bound (min multiplicity) of random families vs n, with a line fit.\n"
         "  presets: half (default, r = N/2), fifth (r = N/5)\n"
         "  framebound_growth.csv: n, zeta, mean_lower_bound, stddev_lower_bound, independence_mean\n"
         "  framebound_growth_fit.csv: slope, intercept, r_squared, r_over_N",
         300, run_framebound_growth},
        {"noise_robustness",
         "Error vs per-channel noise norm theta for n_min and 2 n_min projections and global BPDN.\n"
         "  noise_robustness.csv: theta, method, n, error\n"
         "  noise_robustness_summary.csv: theta, method, n, min_error, mean_error, max_error",
         50, run_noise_robustness},
        {"doppler_demo",
         "Doppler signal from Haar-level subspaces: fused l1-analysis vs global l1-analysis.\n"
         "  presets: noisy (default), clean\n"
         "  doppler_demo.csv: fused_error, global_error, fused_better",
         20, run_doppler_demo},
        {"coverage_check",
         "Empirical frequency of non-covering random families vs the union bound.\n"
         "  coverage_check.csv: n, empirical_uncovered, bound, n_min",
         10000, run_coverage_check},
    };
    return entries;
}

const ExperimentEntry &entry(const std::string &name)
{
    for (const auto &e : registry())
        if (e.name == name)
            return e;
    throw ConfigError("unknown experiment '" + name + "'");
}

Config from_pairs(std::initializer_list<std::pair<const char *, const char *>> pairs)
{
    Config c;
    for (const auto &[k, v] : pairs)
        c.set(k, v);
    return c;
}

} // namespace

const std::vector<std::string> &experiment_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto &e : registry())
            n.push_back(e.name);
        return n;
    }();
    return names;
}

std::string experiment_help(const std::string &name)
{
    return entry(name).help;
}

Config experiment_preset(const std::string &experiment, const std::string &preset)
{
    const std::string &p = preset;
    if (experiment == "recovery_examples")
    {
        if (p.empty() || p == "bpdn13")
            return from_pairs({{"N", "600"}, {"m", "250"}, {"s", "200"}, {"r", "300"}, {"n", "13"}, {"trials", "20"}});
        if (p == "lsq22a")
            return from_pairs({{"N", "600"}, {"m", "250"}, {"s", "200"}, {"r", "200"}, {"n", "22"}, {"trials", "20"}});
        if (p == "lsq22b")
            return from_pairs({{"N", "600"}, {"m", "250"}, {"s", "500"}, {"r", "200"}, {"n", "22"}, {"trials", "20"}});
        if (p == "tiny")
            return from_pairs({{"N", "40"}, {"m", "20"}, {"s", "10"}, {"r", "20"}, {"n", "12"}, {"trials", "5"}});
    }
    else if (experiment == "projections_sweep")
    {
        if (p.empty() || p == "default")
            return from_pairs({{"N", "1000"}, {"m", "300"}, {"s", "200"}, {"r", "500"}, {"eps", "0.01"},
                               {"multipliers", "0.6,1,1.5,2,3,4,5"}, {"trials", "10"}});
    }
    else if (experiment == "framebound_growth")
    {
        if (p.empty() || p == "half")
            return from_pairs({{"N", "100"}, {"r", "50"}, {"n_first", "20"}, {"n_last", "150"}, {"n_step", "10"},
                               {"trials", "300"}});
        if (p == "fifth")
            return from_pairs({{"N", "100"}, {"r", "20"}, {"n_first", "100"}, {"n_last", "400"}, {"n_step", "30"},
                               {"trials", "300"}});
    }
    else if (experiment == "noise_robustness")
    {
        if (p.empty() || p == "default")
            return from_pairs({{"N", "500"}, {"m", "300"}, {"s", "80"}, {"r", "250"}, {"eps", "0.01"},
                               {"thetas", "0.05,0.1,0.2,0.3,0.4,0.5"}, {"trials", "5"}});
    }
    else if (experiment == "doppler_demo")
    {
        if (p.empty() || p == "noisy")
            return from_pairs({{"N", "1024"}, {"m", "174"}, {"levels", "8"}, {"sigma", "0.05"},
                               {"signal_sigma", "0.05"}, {"sparsity", "25"}, {"trials", "20"}});
        if (p == "clean")
            return from_pairs({{"N", "1024"}, {"m", "174"}, {"levels", "8"}, {"sigma", "0"}, {"signal_sigma", "0"},
                               {"sparsity", "25"}, {"trials", "20"}});
    }
    else if (experiment == "coverage_check")
    {
        if (p.empty() || p == "default")
            return from_pairs({{"N", "1000"}, {"r", "500"}, {"eps", "0.01"},
                               {"counts", "10,12,14,15,16,17,18,20,25,30"}, {"trials", "10000"}});
    }
    else
    {
        throw ConfigError("unknown experiment '" + experiment + "'");
    }
    throw ConfigError("experiment '" + experiment + "' has no preset named '" + p + "'");
}

ExperimentOutput run_experiment(const std::string &name, const Config &cfg, const RunOptions &opts)
{
    const ExperimentEntry &e = entry(name);
    if (opts.jobs < 1)
        throw ConfigError("--jobs must be at least 1");

    ExperimentOutput out;
    out.experiment = name;
    out.effective = experiment_preset(name, cfg.get_string("preset", ""));
    if (cfg.has("preset"))
        out.effective.set("preset", cfg.get_string("preset"));
    out.effective.merge(cfg);
    if (opts.full && !cfg.has("trials"))
        out.effective.set("trials", std::to_string(e.full_trials));
    if (opts.trials)
        out.effective.set("trials", std::to_string(*opts.trials));
    if (opts.seed)
        out.effective.set("seed", std::to_string(*opts.seed));
    if (!out.effective.has("seed"))
        out.effective.set("seed", "0");

    try
    {
        e.run(out.effective, opts, out);
    }
    catch (const InvalidArgument &ex)
    {
        // Argument checks deeper in the library stem from the config here.
        throw ConfigError(ex.what());
    }

    if (!opts.out_dir.empty())
    {
        std::filesystem::create_directories(opts.out_dir);
        for (const auto &[stem, table] : out.tables)
            table.save((std::filesystem::path(opts.out_dir) / (stem + ".csv")).string());
    }
    return out;
}

} // namespace fusecs
