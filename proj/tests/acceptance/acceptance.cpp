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

// Acceptance checks for the library and experiment harness. Prints one
// PASS/FAIL line per criterion and exits nonzero if any fails. Pass a list
// of criterion numbers to run a subset.

#include "fusecs/analysis.hpp"
#include "fusecs/expcli.hpp"
#include "fusecs/frames.hpp"
#include "fusecs/pipeline.hpp"
#include "fusecs/random.hpp"
#include "fusecs/solvers.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace fusecs;

namespace
{

struct Outcome
{
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char *f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int job_count()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

RunOptions experiment_options()
{
    RunOptions o;
    o.jobs = job_count();
    return o;
}

std::vector<Index> support_of(const Vector &z, double rel)
{
    std::vector<Index> out;
    const double cut = rel * std::max(z.cwiseAbs().maxCoeff(), 1e-300);
    for (Index k = 0; k < z.size(); ++k)
        if (std::abs(z[k]) > cut)
            out.push_back(k);
    return out;
}

// ---- 1: coverage count ---------------------------------------------------

Outcome coverage_count()
{
    const auto t0 = Clock::now();
    const int n_min = min_projection_count(1000, 500, 0.01);
    const int trials = 10000;
    const double freq = coverage_failure_frequency(1000, 500, 17, trials, 2024);
    const double limit = 0.01 + 3.0 * std::sqrt(0.01 / trials);
    const double secs = elapsed(t0);
    return {n_min == 17 && freq <= limit && secs < 10.0,
            "n_min=" + std::to_string(n_min) + " freq(17)=" + fmt("%.4f", freq) + " limit=" + fmt("%.4f", limit) +
                " time=" + fmt("%.1fs", secs)};
}

// ---- 2: frame algorithm --------------------------------------------------

Outcome frame_algorithm_envelope()
{
    const auto t0 = Clock::now();
    int frames = 0, envelope_breaks = 0, attempts = 0;
    double worst_final = 0.0;
    while (frames < 50)
    {
        const std::uint64_t seed = derive_seed(77, static_cast<std::uint64_t>(attempts++));
        Rng rng(seed);
        const Index n_dim = std::uniform_int_distribution<Index>(20, 200)(rng);
        const Index r = std::uniform_int_distribution<Index>(n_dim / 5, n_dim / 2)(rng);
        const Index count = std::uniform_int_distribution<Index>(8, 20)(rng);
        const FusionFrame f = build_family(ProjectionFamilySpec::random_fixed_rank(n_dim, r, count, derive_seed(seed, 1)));
        if (!f.is_valid())
            continue;
        ++frames;
        const SignalVector x(gaussian_vector(n_dim, rng));
        const SignalVector sx = apply_fusion_operator(f, x);
        const double ratio = static_cast<double>(f.upper_bound() - f.lower_bound()) / (f.upper_bound() + f.lower_bound());
        const FrameAlgorithmResult res = frame_algorithm(f, sx, 0, 1e-12, [&](int k, const Vector &xk) {
            if ((xk - x.values()).norm() > std::pow(ratio, k) * x.norm() + 1e-9)
                ++envelope_breaks;
        });
        const Vector exact = invert_fusion_exact(f, sx).values();
        worst_final = std::max(worst_final, (res.estimate.values() - exact).norm());
    }
    const double secs = elapsed(t0);
    return {envelope_breaks == 0 && worst_final <= 1e-8 && secs < 10.0,
            std::to_string(frames) + " frames, envelope breaks=" + std::to_string(envelope_breaks) +
                " max|x_K - S^-1 Sx|=" + fmt("%.2e", worst_final) + " time=" + fmt("%.1fs", secs)};
}

// ---- 3: dense-signal recovery --------------------------------------------

Outcome dense_recovery()
{
    const auto t0 = Clock::now();
    Config cfg;
    cfg.set("preset", "bpdn13");
    const ExperimentOutput out = run_experiment("recovery_examples", cfg, experiment_options());
    const double fused = out.metrics.at("fused_success_rate");
    const double global = out.metrics.at("global_failure_rate");
    const double secs = elapsed(t0);
    return {fused >= 0.9 && global >= 0.9 && secs < 300.0,
            "trials=" + out.effective.get_string("trials") + " fused err<=1e-3 rate=" + fmt("%.2f", fused) +
                " global err>0.1 rate=" + fmt("%.2f", global) + " time=" + fmt("%.1fs", secs)};
}

// ---- 4: lower frame bound growth -----------------------------------------

Outcome framebound_growth()
{
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (const char *preset : {"half", "fifth"})
    {
        Config cfg;
        cfg.set("preset", preset);
        const ExperimentOutput out = run_experiment("framebound_growth", cfg, experiment_options());
        const double slope = out.metrics.at("slope");
        const double r2 = out.metrics.at("r_squared");
        const double target = static_cast<double>(out.effective.get_int("r")) / out.effective.get_int("N");
        const bool pass = r2 >= 0.98 && slope > 0.0 && std::abs(slope - target) <= 0.25 * target;
        ok = ok && pass;
        detail += std::string(preset) + ": slope=" + fmt("%.3f", slope) + " (r/N=" + fmt("%.2f", target) +
                  ") R2=" + fmt("%.4f", r2) + "; ";
    }
    const double secs = elapsed(t0);
    return {ok && secs < 60.0, detail + "time=" + fmt("%.1fs", secs)};
}

// ---- 5: noise robustness -------------------------------------------------

Outcome noise_robustness()
{
    const auto t0 = Clock::now();
    const ExperimentOutput out = run_experiment("noise_robustness", Config{}, experiment_options());
    const double r2_min = out.metrics.at("fused_nmin_r_squared");
    const double r2_dbl = out.metrics.at("fused_2nmin_r_squared");
    const bool doubled = out.metrics.at("doubled_not_worse") == 1.0;
    const double secs = elapsed(t0);
    return {r2_min >= 0.95 && r2_dbl >= 0.95 && doubled && secs < 600.0,
            "trials=" + out.effective.get_string("trials") + " R2(n_min)=" + fmt("%.4f", r2_min) +
                " R2(2n_min)=" + fmt("%.4f", r2_dbl) + " doubled<=n_min at every theta=" + (doubled ? "yes" : "no") +
                " time=" + fmt("%.1fs", secs)};
}

// ---- 6: error-bound domination -------------------------------------------

Outcome bound_domination()
{
    const auto t0 = Clock::now();
    // Pseudo-inverse pipeline against the exact-noise bound.
    int lsq_trials = 0, lsq_ok = 0;
    for (int t = 0; lsq_trials < 200; ++t)
    {
        const std::uint64_t seed = derive_seed(606, static_cast<std::uint64_t>(t));
        const auto a = SensingMatrix::gaussian(40, 100, seed);
        const FusionFrame f = build_family(ProjectionFamilySpec::random_fixed_rank(100, 30, 12, derive_seed(seed, 1)));
        if (!f.is_valid())
            continue;
        ++lsq_trials;
        Rng rng(derive_seed(seed, 2));
        const SignalVector x(gaussian_vector(100, rng));
        const double eta = 0.01 + 0.5 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto s = synthesize_measurements(x, a, f, NoiseSpec::exact({eta}, derive_seed(seed, 3)));
        PipelineConfig cfg;
        cfg.policy = SolverPolicy::force_lsq;
        const RecoveryReport rep = fused_recover(a, f, s.set, cfg);
        const double err2 = (rep.fused_estimate.values() - x.values()).squaredNorm();
        lsq_ok += err2 <= bound_prop2(f, a, s.noise) * (1.0 + 1e-10);
    }

    // Local BPDN on tiny instances where the RIP-derived NSP constants apply.
    int tiny = 0, applicable = 0, tiny_ok = 0;
    double worst_ratio = 0.0;
    for (int t = 0; t < 100; ++t, ++tiny)
    {
        const std::uint64_t seed = derive_seed(616, static_cast<std::uint64_t>(t));
        Rng rng(seed);
        const Index n_dim = 8 + 2 * std::uniform_int_distribution<Index>(0, 2)(rng); // 8, 10 or 12
        const Index m = std::uniform_int_distribution<Index>(20, 60)(rng);
        const int s = std::uniform_int_distribution<int>(1, 2)(rng);
        const auto a = SensingMatrix::gaussian(m, n_dim, derive_seed(seed, 1));
        const FusionFrame f =
            build_family(ProjectionFamilySpec::partition(n_dim, {n_dim / 2, n_dim - n_dim / 2}));
        std::vector<NspConstants> constants;
        bool ok = true;
        for (Index i = 0; i < f.size() && ok; ++i)
        {
            const double delta = rip_exhaustive(a, 2 * s, f.projection(i)).delta;
            if (!(delta < rip_to_nsp_threshold()))
                ok = false;
            else
                constants.push_back(l1_from_l2(rip_to_nsp(delta), s));
        }
        if (!ok)
            continue;
        ++applicable;
        Vector x = 0.02 * gaussian_vector(n_dim, rng); // compressible tail
        for (Index k : sample_subset(n_dim, s, rng))
            x[k] += 2.0 * gaussian_vector(1, rng)[0];
        const SignalVector xs(x);
        const double eta = 0.1 * std::uniform_real_distribution<double>(0.1, 1.0)(rng);
        const auto meas = synthesize_measurements(xs, a, f, NoiseSpec::exact({eta}, derive_seed(seed, 2)));
        PipelineConfig cfg;
        cfg.policy = SolverPolicy::force_bpdn;
        const RecoveryReport rep = fused_recover(a, f, meas.set, cfg);
        const double err = (rep.fused_estimate.values() - x).norm();
        const auto sigma = best_term_errors(xs, f, SparsityPattern::uniform(f.size(), s));
        const double bound = bound_rdnsp(f, constants, sigma, meas.set.noise_bounds);
        worst_ratio = std::max(worst_ratio, err / bound);
        tiny_ok += err <= bound;
    }
    const double secs = elapsed(t0);
    return {lsq_ok == lsq_trials && applicable > 0 && tiny_ok == applicable,
            "lsq " + std::to_string(lsq_ok) + "/" + std::to_string(lsq_trials) + " dominated; tiny BPDN " +
                std::to_string(tiny_ok) + "/" + std::to_string(applicable) + " dominated (" + std::to_string(tiny) +
                " drawn, max err/bound=" + fmt("%.3f", worst_ratio) + ") time=" + fmt("%.1fs", secs)};
}

// ---- 7: oracle equivalence -----------------------------------------------

Outcome oracle_equivalence()
{
    const auto t0 = Clock::now();
    int agree = 0;
    const int instances = 100;
    SolverOptions opts;
    opts.tol_abs = 1e-10;
    opts.tol_rel = 1e-9;
    opts.max_iter = 20000;
    for (int t = 0; t < instances; ++t)
    {
        const std::uint64_t seed = derive_seed(707, static_cast<std::uint64_t>(t));
        Rng rng(seed);
        const Index n_dim = std::uniform_int_distribution<Index>(6, 12)(rng);
        const int s = std::uniform_int_distribution<int>(1, 2)(rng);
        const auto m = static_cast<Index>(std::ceil(2.0 * s * std::log(static_cast<double>(n_dim))));
        const auto a = SensingMatrix::gaussian(m, n_dim, derive_seed(seed, 1));
        const Vector x = sparse_gaussian_vector(n_dim, s, rng);
        const Vector y = a.entries() * x;
        const SolveResult r = bpdn(a.entries(), y, 0.0, opts);
        const SignalVector z0 = l0_oracle(a, y, 0.0, s);
        agree += support_of(r.solution, 1e-6) == support_of(z0.values(), 1e-6);
    }
    const double secs = elapsed(t0);
    return {agree >= 95, std::to_string(agree) + "/" + std::to_string(instances) +
                             " supports agree (m = ceil(2 s ln N), eta = 0) time=" + fmt("%.1fs", secs)};
}

// ---- 8: local support ----------------------------------------------------

Outcome support_lemma()
{
    const auto t0 = Clock::now();
    int solves = 0;
    double worst = 0.0;
    for (int t = 0; t < 30; ++t)
    {
        const std::uint64_t seed = derive_seed(808, static_cast<std::uint64_t>(t));
        Rng rng(seed);
        const Index n_dim = std::uniform_int_distribution<Index>(40, 160)(rng);
        const Index m = std::uniform_int_distribution<Index>(n_dim / 4, n_dim / 2)(rng);
        const Index r = std::uniform_int_distribution<Index>(m, n_dim - 1)(rng);
        const auto a = SensingMatrix::gaussian(m, n_dim, derive_seed(seed, 1));
        const FusionFrame f = build_family(ProjectionFamilySpec::random_fixed_rank(n_dim, r, 6, derive_seed(seed, 2)));
        const SignalVector x(t % 2 ? gaussian_vector(n_dim, rng) : sparse_gaussian_vector(n_dim, m / 4, rng));
        const double eta = t % 3 == 0 ? 0.0 : 0.05;
        const auto ys = synthesize_measurements(x, a, f, NoiseSpec::exact({eta}, derive_seed(seed, 3))).set;
        for (Index i = 0; i < f.size(); ++i)
        {
            const auto ui = static_cast<std::size_t>(i);
            const auto &omega = f.projection(i);
            // Lifted local problem over all of R^N with A P_i.
            const SolveResult lifted = bpdn(a.masked(omega), ys.measurements[ui], ys.noise_bounds[ui]);
            const double mass = lifted.solution.lpNorm<1>();
            if (mass > 0.0)
                worst = std::max(worst, (lifted.solution - omega.apply(lifted.solution)).lpNorm<1>() / mass);
            // Pipeline estimate.
            PipelineConfig cfg;
            cfg.policy = SolverPolicy::force_bpdn;
            const Vector local = solve_channel(a, omega, ys.measurements[ui], ys.noise_bounds[ui], cfg).estimate.values();
            const double lm = local.lpNorm<1>();
            if (lm > 0.0)
                worst = std::max(worst, (local - omega.apply(local)).lpNorm<1>() / lm);
            solves += 2;
        }
    }
    const double secs = elapsed(t0);
    return {worst <= 1e-8, std::to_string(solves) + " local solves, max relative l1 mass outside Omega_i=" +
                               fmt("%.2e", worst) + " time=" + fmt("%.1fs", secs)};
}

// ---- 9: Doppler ordering -------------------------------------------------

Outcome doppler_ordering()
{
    const auto t0 = Clock::now();
    const ExperimentOutput out = run_experiment("doppler_demo", Config{}, experiment_options());
    const double rate = out.metrics.at("fused_better_rate");
    const double secs = elapsed(t0);
    return {rate >= 0.8 && secs < 300.0,
            "trials=" + out.effective.get_string("trials") + " fused<global rate=" + fmt("%.2f", rate) +
                " mean fused=" + fmt("%.3f", out.metrics.at("mean_fused_error")) +
                " mean global=" + fmt("%.3f", out.metrics.at("mean_global_error")) + " time=" + fmt("%.1fs", secs)};
}

// ---- 10: RIP machinery ---------------------------------------------------

Outcome rip_machinery()
{
    const auto a = SensingMatrix::gaussian(20, 40, 1010);
    const RipEstimate est = rip_exhaustive(a, 2);
    double brute = 0.0;
    std::vector<Index> brute_support;
    for (Index i = 0; i < 40; ++i)
        for (Index j = i + 1; j < 40; ++j)
        {
            Matrix sub(20, 2);
            sub << a.entries().col(i), a.entries().col(j);
            const Eigen::SelfAdjointEigenSolver<Matrix> eig(sub.transpose() * sub);
            const double dev = std::max(eig.eigenvalues()[1] - 1.0, 1.0 - eig.eigenvalues()[0]);
            if (dev > brute)
            {
                brute = dev;
                brute_support = {i, j};
            }
        }
    const double diff = std::abs(est.delta - brute);
    const NspConstants zero = rip_to_nsp(0.0);
    auto rejects = [](double d) {
        try
        {
            rip_to_nsp(d);
            return false;
        }
        catch (const InvalidArgument &)
        {
            return true;
        }
    };
    const double th = 4.0 / std::sqrt(41.0);
    const bool nsp_ok = zero.rho == 0.0 && zero.tau == 1.0 && rejects(th) && rejects(std::nextafter(th, 1.0)) &&
                        rejects(0.9) && !rejects(std::nextafter(th, 0.0));
    return {diff <= 1e-12 && est.worst_support == brute_support && nsp_ok,
            "delta_2=" + fmt("%.15f", est.delta) + " |diff vs eigen scan|=" + fmt("%.1e", diff) +
                " same worst support=" + (est.worst_support == brute_support ? "yes" : "no") +
                " rip_to_nsp(0)=(" + fmt("%g", zero.rho) + "," + fmt("%g", zero.tau) + ") rejects>=4/sqrt(41)=" +
                (nsp_ok ? "yes" : "no")};
}

struct Criterion
{
    int id;
    const char *name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char **argv)
{
    const std::vector<Criterion> criteria = {
        {1, "coverage count", coverage_count},
        {2, "frame algorithm envelope", frame_algorithm_envelope},
        {3, "dense-signal recovery", dense_recovery},
        {4, "lower frame bound growth", framebound_growth},
        {5, "noise robustness", noise_robustness},
        {6, "error-bound domination", bound_domination},
        {7, "l0 oracle equivalence", oracle_equivalence},
        {8, "local support", support_lemma},
        {9, "Doppler ordering", doppler_ordering},
        {10, "RIP machinery", rip_machinery},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto &c : criteria)
    {
        if (!selected.empty() && !selected.count(c.id))
            continue;
        Outcome o;
        try
        {
            o = c.run();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
