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

#include "fusecs/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fusecs
{

namespace
{

std::string trim(const std::string &s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_commas(const std::string &line)
{
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
        fields.push_back(trim(field));
    return fields;
}

double parse_real(const std::string &field, std::size_t line_no)
{
    std::size_t used = 0;
    double value = 0.0;
    try
    {
        value = std::stod(field, &used);
    }
    catch (const std::exception &)
    {
        used = 0;
    }
    if (used == 0 || used != field.size())
        throw InvalidArgument("CSV line " + std::to_string(line_no) + ": cannot parse '" + field + "' as a number");
    return value;
}

std::ifstream open_input(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_output(const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw InvalidArgument("cannot open '" + path + "' for writing");
    return out;
}

} // namespace

std::string format_real(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

Matrix parse_matrix_csv(std::istream &in)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        line = trim(line);
        if (line.empty())
            continue;
        std::vector<double> row;
        for (const auto &field : split_commas(line))
            row.push_back(parse_real(field, line_no));
        if (!rows.empty() && row.size() != rows.front().size())
            throw DimensionError("CSV line " + std::to_string(line_no) + ": ragged row");
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw DimensionError("CSV: no data rows");
    Matrix a(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return a;
}

Matrix read_matrix_csv(const std::string &path)
{
    auto in = open_input(path);
    return parse_matrix_csv(in);
}

void write_matrix_csv(std::ostream &out, const Matrix &a)
{
    for (Index i = 0; i < a.rows(); ++i)
    {
        for (Index j = 0; j < a.cols(); ++j)
        {
            if (j > 0)
                out << ',';
            out << format_real(a(i, j));
        }
        out << '\n';
    }
}

void write_matrix_csv(const std::string &path, const Matrix &a)
{
    auto out = open_output(path);
    write_matrix_csv(out, a);
}

Vector read_vector_csv(const std::string &path)
{
    Matrix a = read_matrix_csv(path);
    if (a.cols() == 1)
        return a.col(0);
    if (a.rows() == 1)
        return a.row(0).transpose();
    throw DimensionError("'" + path + "' holds a matrix, expected a single row or column");
}

void write_vector_csv(std::ostream &out, const Vector &v)
{
    for (Index k = 0; k < v.size(); ++k)
        out << format_real(v[k]) << '\n';
}

void write_vector_csv(const std::string &path, const Vector &v)
{
    auto out = open_output(path);
    write_vector_csv(out, v);
}

std::vector<Vector> read_measurements_csv(const std::string &path)
{
    Matrix a = read_matrix_csv(path);
    std::vector<Vector> ys;
    for (Index i = 0; i < a.rows(); ++i)
        ys.emplace_back(a.row(i).transpose());
    return ys;
}

std::vector<IndexSetProjection> parse_index_sets(std::istream &in, Index ambient_dim)
{
    std::vector<IndexSetProjection> sets;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        line = trim(line);
        std::vector<Index> idx;
        if (!line.empty())
        {
            for (const auto &field : split_commas(line))
            {
                const double v = parse_real(field, line_no);
                if (v != static_cast<double>(static_cast<Index>(v)))
                    throw InvalidArgument("index set line " + std::to_string(line_no) + ": non-integer index");
                idx.push_back(static_cast<Index>(v));
            }
        }
        sets.push_back(IndexSetProjection::from_one_based(ambient_dim, idx));
    }
    // A trailing newline does not introduce an extra empty set.
    return sets;
}

FusionFrame read_frame(const std::string &path, Index ambient_dim)
{
    auto in = open_input(path);
    return FusionFrame(ambient_dim, parse_index_sets(in, ambient_dim));
}

void write_frame(std::ostream &out, const FusionFrame &frame)
{
    for (const auto &p : frame.projections())
    {
        bool first = true;
        for (Index k : p.indices())
        {
            if (!first)
                out << ',';
            out << k + 1;
            first = false;
        }
        out << '\n';
    }
}

void write_frame(const std::string &path, const FusionFrame &frame)
{
    auto out = open_output(path);
    write_frame(out, frame);
}

} // namespace fusecs
