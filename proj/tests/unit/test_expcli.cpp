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

#include "fusecs/expcli.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fusecs;

namespace
{

Config parse_text(const std::string &text)
{
    std::istringstream in(text);
    return Config::parse(in, "test");
}

std::string csv_text(const CsvTable &t)
{
    std::ostringstream out;
    t.write(out);
    return out.str();
}

} // namespace

TEST(Config, ParsesKeysCommentsAndLists)
{
    const Config c = parse_text("# header\nN = 100\n\n  r=50 # inline\nthetas = 0.1, 0.2,0.3\nname = bpdn13\nN = 120\n");
    EXPECT_EQ(c.get_int("N"), 120);
    EXPECT_EQ(c.get_int("r"), 50);
    EXPECT_EQ(c.get_double_list("thetas"), (std::vector<double>{0.1, 0.2, 0.3}));
    EXPECT_EQ(c.get_string("name"), "bpdn13");
    EXPECT_EQ(c.get_int("missing", 7), 7);
    EXPECT_TRUE(c.get_bool("flag", true));
}

TEST(Config, ReportsMalformedInput)
{
    EXPECT_THROW(parse_text("just words\n"), ConfigError);
    EXPECT_THROW(parse_text("= 3\n"), ConfigError);
    const Config c = parse_text("N = 10x\nseed = -4\nb = maybe\nlist = 1,,2\n");
    EXPECT_THROW(c.get_int("N"), ConfigError);
    EXPECT_THROW(c.get_double("N"), ConfigError);
    EXPECT_THROW(c.get_seed("seed", 0), ConfigError);
    EXPECT_THROW(c.get_bool("b", false), ConfigError);
    EXPECT_THROW(c.get_int_list("list"), ConfigError);
    EXPECT_THROW(c.get_string("absent"), ConfigError);
    EXPECT_THROW(c.require_known({"N", "seed", "b"}), ConfigError);
    EXPECT_THROW(Config::load("/nonexistent/dir/cfg.txt"), ConfigError);
}

TEST(Config, MergeOverrides)
{
    Config a = parse_text("N = 1\nm = 2\n");
    a.merge(parse_text("m = 3\ns = 4\n"));
    EXPECT_EQ(a.get_int("N"), 1);
    EXPECT_EQ(a.get_int("m"), 3);
    EXPECT_EQ(a.get_int("s"), 4);
    EXPECT_EQ(a.get_seed("big", 18446744073709551615ULL), 18446744073709551615ULL);
}

TEST(Csv, WritesHeaderAndRows)
{
    CsvTable t({"a", "b"});
    t.add_row({cell(1), cell(0.1)});
    t.add_row({cell(std::uint64_t{18446744073709551615ULL}), cell(-2.5)});
    EXPECT_EQ(csv_text(t), "a,b\n1,0.10000000000000001\n18446744073709551615,-2.5\n");
    EXPECT_EQ(t.column("b"), 1);
    EXPECT_THROW(t.column("c"), InvalidArgument);
    EXPECT_THROW(t.add_row({"1"}), DimensionError);
    CsvTable u({"a", "b"});
    u.append(t);
    EXPECT_EQ(u.rows().size(), 2u);
}

TEST(Csv, RoundTripsDoubles)
{
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -1e-300})
        EXPECT_EQ(std::stod(cell(v)), v);
}

TEST(Experiments, NamesPresetsAndHelp)
{
    const auto &names = experiment_names();
    ASSERT_EQ(names.size(), 6u);
    for (const auto &n : names)
    {
        EXPECT_FALSE(experiment_help(n).empty());
        EXPECT_NO_THROW(experiment_preset(n));
    }
    const Config p = experiment_preset("recovery_examples", "lsq22b");
    EXPECT_EQ(p.get_int("s"), 500);
    EXPECT_EQ(p.get_int("n"), 22);
    EXPECT_EQ(experiment_preset("framebound_growth", "fifth").get_int("r"), 20);
    EXPECT_THROW(experiment_preset("recovery_examples", "nope"), ConfigError);
    EXPECT_THROW(experiment_preset("nope"), ConfigError);
    EXPECT_THROW(run_experiment("nope", Config{}), ConfigError);
}

TEST(Experiments, RejectsUnknownAndInvalidKeys)
{
    Config bad = parse_text("preset = tiny\nbogus = 1\n");
    EXPECT_THROW(run_experiment("recovery_examples", bad), ConfigError);
    Config neg = parse_text("preset = tiny\nm = -3\n");
    EXPECT_THROW(run_experiment("recovery_examples", neg), ConfigError);
    RunOptions zero_jobs;
    zero_jobs.jobs = 0;
    EXPECT_THROW(run_experiment("coverage_check", Config{}, zero_jobs), ConfigError);
}

TEST(Experiments, TinyRecoveryPresetIsFastAndAccurate)
{
    const auto start = std::chrono::steady_clock::now();
    const ExperimentOutput out = run_experiment("recovery_examples", parse_text("preset = tiny\n"));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LT(secs, 5.0);
    EXPECT_GE(out.metrics.at("fused_success_rate"), 0.8);
    ASSERT_FALSE(out.tables.empty());
    EXPECT_EQ(out.tables.front().second.rows().size(), 10u); // fused and global per trial
    EXPECT_TRUE(out.all_converged);
}

TEST(Experiments, ResultsDoNotDependOnJobCount)
{
    RunOptions one;
    one.trials = 3;
    RunOptions three = one;
    three.jobs = 3;
    const Config cfg = parse_text("preset = tiny\nseed = 11\n");
    const auto a = run_experiment("recovery_examples", cfg, one);
    const auto b = run_experiment("recovery_examples", cfg, three);
    ASSERT_EQ(a.tables.size(), b.tables.size());
    for (std::size_t i = 0; i < a.tables.size(); ++i)
    {
        if (a.tables[i].first.ends_with("_timing"))
            continue; // wall clock
        EXPECT_EQ(csv_text(a.tables[i].second), csv_text(b.tables[i].second));
    }
}

TEST(Experiments, SeedOverrideChangesDraws)
{
    RunOptions o;
    o.trials = 2;
    const Config cfg = parse_text("preset = tiny\n");
    o.seed = 1;
    const auto a = run_experiment("recovery_examples", cfg, o);
    o.seed = 2;
    const auto b = run_experiment("recovery_examples", cfg, o);
    EXPECT_NE(csv_text(a.tables.front().second), csv_text(b.tables.front().second));
    EXPECT_EQ(a.effective.get_int("seed"), 1);
}

TEST(Experiments, CoverageWithFullRankSubsetsNeverFails)
{
    RunOptions o;
    o.trials = 200;
    const auto out = run_experiment("coverage_check", parse_text("N = 50\nr = 50\ncounts = 1,2\n"), o);
    EXPECT_EQ(out.metrics.at("frequency_n1"), 0.0);
    EXPECT_EQ(out.metrics.at("frequency_n2"), 0.0);
    EXPECT_EQ(out.metrics.at("n_min"), 1.0);
}

TEST(Experiments, WritesCsvFilesWithConfigColumns)
{
    const auto dir = std::filesystem::temp_directory_path() / "fusecs_expcli_test";
    std::filesystem::remove_all(dir);
    RunOptions o;
    o.trials = 50;
    o.out_dir = dir.string();
    run_experiment("coverage_check", parse_text("N = 40\nr = 20\ncounts = 3,6\n"), o);
    std::ifstream in(dir / "coverage_check.csv");
    ASSERT_TRUE(in.good());
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header.rfind("experiment,trial,trial_seed,", 0), 0u);
    EXPECT_NE(header.find("cfg_N"), std::string::npos);
    int rows = 0;
    for (std::string line; std::getline(in, line);)
        ++rows;
    EXPECT_EQ(rows, 2);
    std::filesystem::remove_all(dir);
}

TEST(RunIndexed, KeepsOrderAndRethrowsFirstError)
{
    const auto v = run_indexed<int>(50, 4, [](int i) { return i * i; });
    for (int i = 0; i < 50; ++i)
        EXPECT_EQ(v[static_cast<std::size_t>(i)], i * i);
    try
    {
        run_indexed<int>(20, 4, [](int i) -> int {
            if (i == 7 || i == 13)
                throw InvalidArgument("bad " + std::to_string(i));
            return i;
        });
        FAIL();
    }
    catch (const InvalidArgument &e)
    {
        EXPECT_STREQ(e.what(), "bad 7");
    }
}
