// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include "divdpp/types.hpp"

namespace divdpp::csv {

// Headerless CSV: one matrix row per line, comma-separated, full double
// precision round-trip.  Vectors are a single line.

Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);

Vector read_vector(std::istream& in);
Vector read_vector_file(const std::string& path);

void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);

void write_vector(std::ostream& out, const Vector& v);

/// Parse "3,1,4" into an index list (must be non-negative integers).
IndexList parse_index_list(const std::string& text);

/// Render an index list as "3,1,4".
std::string format_index_list(const IndexList& indices);

}  // namespace divdpp::csv
