// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "divdpp/csv.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "divdpp/errors.hpp"

namespace divdpp::csv {

namespace {

double parse_double(const std::string& token, std::size_t line_no) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' ||
                         *(end - 1) == '\r')) {
    --end;
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end) {
    throw Error("csv: cannot parse '" + token + "' as a number on line " +
                std::to_string(line_no));
  }
  return value;
}

std::vector<std::vector<double>> read_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // tolerate CRLF and blank trailing lines
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string token;
    while (std::getline(ss, token, ',')) {
      row.push_back(parse_double(token, line_no));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Matrix read_matrix(std::istream& in) {
  const auto rows = read_rows(in);
  if (rows.empty()) throw EmptyInputError("csv: no rows");
  const std::size_t cols = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw Error("csv: ragged row " + std::to_string(r + 1) + " has " +
                  std::to_string(rows[r].size()) + " fields, expected " +
                  std::to_string(cols));
    }
  }
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("csv: cannot open '" + path + "'");
  return read_matrix(in);
}

Vector read_vector(std::istream& in) {
  const Matrix m = read_matrix(in);
  if (m.rows() == 1) return m.row(0).transpose();
  if (m.cols() == 1) return m.col(0);
  throw DimensionError("csv: expected a single-line vector, got " +
                       std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()));
}

Vector read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("csv: cannot open '" + path + "'");
  return read_vector(in);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << m(r, c);
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error("csv: cannot open '" + path + "' for writing");
  write_matrix(out, m);
}

void write_vector(std::ostream& out, const Vector& v) {
  write_matrix(out, v.transpose());
}

IndexList parse_index_list(const std::string& text) {
  IndexList out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    std::size_t pos = 0;
    long long value = 0;
    try {
      value = std::stoll(token, &pos);
    } catch (const std::exception&) {
      throw ValueError("cannot parse index '" + token + "'");
    }
    if (pos != token.size() || value < 0) {
      throw ValueError("cannot parse index '" + token + "'");
    }
    out.push_back(static_cast<Index>(value));
  }
  return out;
}

std::string format_index_list(const IndexList& indices) {
  std::string out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(indices[i]);
  }
  return out;
}

}  // namespace divdpp::csv
