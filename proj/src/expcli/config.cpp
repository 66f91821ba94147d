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

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fusecs
{

namespace
{

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

long long parse_int(const std::string &key, const std::string &text)
{
    errno = 0;
    char *end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || *end != '\0' || errno == ERANGE)
        throw ConfigError("config key '" + key + "': expected an integer, got '" + text + "'");
    return v;
}

double parse_double(const std::string &key, const std::string &text)
{
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0' || errno == ERANGE)
        throw ConfigError("config key '" + key + "': expected a number, got '" + text + "'");
    return v;
}

} // namespace

Config Config::parse(std::istream &in, const std::string &origin)
{
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.values_[key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

Config Config::load(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse(in, path);
}

void Config::merge(const Config &other)
{
    for (const auto &[k, v] : other.values_)
        values_[k] = v;
}

std::string Config::get_string(const std::string &key) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string &key, const std::string &fallback) const
{
    return has(key) ? get_string(key) : fallback;
}

long long Config::get_int(const std::string &key) const
{
    return parse_int(key, get_string(key));
}

long long Config::get_int(const std::string &key, long long fallback) const
{
    return has(key) ? get_int(key) : fallback;
}

double Config::get_double(const std::string &key) const
{
    return parse_double(key, get_string(key));
}

double Config::get_double(const std::string &key, double fallback) const
{
    return has(key) ? get_double(key) : fallback;
}

std::uint64_t Config::get_seed(const std::string &key, std::uint64_t fallback) const
{
    if (!has(key))
        return fallback;
    const std::string text = get_string(key);
    errno = 0;
    char *end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || text[0] == '-' || *end != '\0' || errno == ERANGE)
        throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" + text + "'");
    return v;
}

bool Config::get_bool(const std::string &key, bool fallback) const
{
    if (!has(key))
        return fallback;
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<long long> Config::get_int_list(const std::string &key) const
{
    std::vector<long long> out;
    for (const auto &item : split_list(get_string(key)))
        out.push_back(parse_int(key, item));
    return out;
}

std::vector<double> Config::get_double_list(const std::string &key) const
{
    std::vector<double> out;
    for (const auto &item : split_list(get_string(key)))
        out.push_back(parse_double(key, item));
    return out;
}

void Config::require_known(const std::set<std::string> &allowed) const
{
    for (const auto &[k, v] : values_)
        if (!allowed.count(k))
            throw ConfigError("unknown config key '" + k + "'");
}

} // namespace fusecs
