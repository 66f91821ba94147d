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
#include "fusecs/io.hpp"

#include <fstream>
#include <ostream>

namespace fusecs
{

Index CsvTable::column(const std::string &name) const
{
    for (std::size_t j = 0; j < header_.size(); ++j)
        if (header_[j] == name)
            return static_cast<Index>(j);
    throw InvalidArgument("CsvTable: no column named '" + name + "'");
}

void CsvTable::add_row(std::vector<std::string> cells)
{
    if (cells.size() != header_.size())
        throw DimensionError("CsvTable: row has " + std::to_string(cells.size()) + " cells, header has " +
                             std::to_string(header_.size()));
    rows_.push_back(std::move(cells));
}

void CsvTable::append(const CsvTable &other)
{
    if (header_.empty() && rows_.empty())
        header_ = other.header_;
    if (other.header_ != header_)
        throw DimensionError("CsvTable: headers differ");
    rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

void CsvTable::write(std::ostream &out) const
{
    auto line = [&](const std::vector<std::string> &cells) {
        for (std::size_t j = 0; j < cells.size(); ++j)
            out << (j ? "," : "") << cells[j];
        out << '\n';
    };
    line(header_);
    for (const auto &r : rows_)
        line(r);
}

void CsvTable::save(const std::string &path) const
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path + "'");
    write(out);
}

std::string cell(double v)
{
    return format_real(v);
}

std::string cell(long long v)
{
    return std::to_string(v);
}

std::string cell(long v)
{
    return std::to_string(v);
}

std::string cell(int v)
{
    return std::to_string(v);
}

std::string cell(std::uint64_t v)
{
    return std::to_string(v);
}

} // namespace fusecs
