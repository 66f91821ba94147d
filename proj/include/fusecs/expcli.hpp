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

#ifndef FUSECS_EXPCLI_HPP
#define FUSECS_EXPCLI_HPP

#include "fusecs/core.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fusecs
{

// Malformed or inconsistent experiment configuration (CLI exit code 2).
class ConfigError : public Error
{
public:
    using Error::Error;
};

// ---- Config files ----------------------------------------------------------

// Flat `key = value` text. `#` starts a comment, blank lines are ignored,
// lists are comma separated. Later assignments override earlier ones.
class Config
{
public:
    static Config parse(std::istream &in, const std::string &origin = "<config>");
    static Config load(const std::string &path);

    bool has(const std::string &key) const { return values_.count(key) != 0; }
    void set(const std::string &key, const std::string &value) { values_[key] = value; }
    // Keys of `other` override ours.
    void merge(const Config &other);
    const std::map<std::string, std::string> &values() const { return values_; }

    std::string get_string(const std::string &key) const;
    std::string get_string(const std::string &key, const std::string &fallback) const;
    long long get_int(const std::string &key) const;
    long long get_int(const std::string &key, long long fallback) const;
    double get_double(const std::string &key) const;
    double get_double(const std::string &key, double fallback) const;
    std::uint64_t get_seed(const std::string &key, std::uint64_t fallback) const;
    bool get_bool(const std::string &key, bool fallback) const;
    std::vector<long long> get_int_list(const std::string &key) const;
    std::vector<double> get_double_list(const std::string &key) const;

    // Throws ConfigError naming the first key outside `allowed`.
    void require_known(const std::set<std::string> &allowed) const;

private:
    std::map<std::string, std::string> values_;
};

// ---- CSV tables ------------------------------------------------------------

class CsvTable
{
public:
    CsvTable() = default;
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    const std::vector<std::string> &header() const { return header_; }
    const std::vector<std::vector<std::string>> &rows() const { return rows_; }
    Index column(const std::string &name) const; // throws InvalidArgument if absent

    // Throws DimensionError when the cell count does not match the header.
    void add_row(std::vector<std::string> cells);
    void append(const CsvTable &other);

    void write(std::ostream &out) const;
    void save(const std::string &path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Cell helpers: integers verbatim, reals as %.17g.
std::string cell(double v);
std::string cell(long long v);
std::string cell(long v);
std::string cell(int v);
std::string cell(std::uint64_t v);

// ---- Experiments -----------------------------------------------------------

struct RunOptions
{
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    int jobs = 1;
    bool full = false;  // large-scale trial counts
    std::string out_dir; // empty: keep results in memory only
};

struct ExperimentOutput
{
    std::string experiment;
    Config effective;                                  // preset + file + flags
    std::vector<std::pair<std::string, CsvTable>> tables; // file stem -> table
    std::map<std::string, double> metrics;             // headline numbers
    bool all_converged = true;
};

// Names accepted by run_experiment, in CLI order.
const std::vector<std::string> &experiment_names();

// Short description and CSV schema of an experiment, for --help.
std::string experiment_help(const std::string &name);

// Preset defaults for an experiment; `preset` selects among the named
// variants (empty: the default one). Throws ConfigError on unknown names.
Config experiment_preset(const std::string &experiment, const std::string &preset = {});

// Runs one experiment: preset (chosen by the `preset` key of cfg) merged
// with cfg, then --seed/--trials overrides. Trials run on up to opts.jobs
// threads; rows are buffered per trial and emitted in trial order, so the
// tables do not depend on the job count. Writes <out_dir>/<stem>.csv when an
// output directory is given.
ExperimentOutput run_experiment(const std::string &name, const Config &cfg, const RunOptions &opts = {});

// Evaluates fn(t) for t = 0..count-1 on up to `jobs` threads and returns
// the results in index order. The first exception (by index) is rethrown.
template <class T>
std::vector<T> run_indexed(int count, int jobs, const std::function<T(int)> &fn);

} // namespace fusecs

#include "fusecs/detail/run_indexed.hpp"

#endif
