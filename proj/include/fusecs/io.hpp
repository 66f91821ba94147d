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

#ifndef FUSECS_IO_HPP
#define FUSECS_IO_HPP

// Plain-text formats:
//   matrices/vectors: CSV, one row per line, no header, dimensions inferred.
//     A vector may be stored as one column or as one row.
//   index sets: one set per line, 1-based comma-separated indices; an empty
//     line is an empty set.

#include "fusecs/core.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fusecs
{

Matrix parse_matrix_csv(std::istream &in);
Matrix read_matrix_csv(const std::string &path);
void write_matrix_csv(std::ostream &out, const Matrix &a);
void write_matrix_csv(const std::string &path, const Matrix &a);

Vector read_vector_csv(const std::string &path);
void write_vector_csv(std::ostream &out, const Vector &v);
void write_vector_csv(const std::string &path, const Vector &v);

// Measurement file for `fusecs solve`: one row per subspace, m columns.
std::vector<Vector> read_measurements_csv(const std::string &path);

std::vector<IndexSetProjection> parse_index_sets(std::istream &in, Index ambient_dim);
FusionFrame read_frame(const std::string &path, Index ambient_dim);
void write_frame(std::ostream &out, const FusionFrame &frame);
void write_frame(const std::string &path, const FusionFrame &frame);

// %.17g formatting shared by every CSV writer.
std::string format_real(double value);

} // namespace fusecs

#endif
