// vbvarsel/csv.hpp

// Copyright 2026  The vbvarsel authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef VBVARSEL_CSV_HPP_
#define VBVARSEL_CSV_HPP_

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vbvarsel/data_matrix.hpp"
#include "vbvarsel/errors.hpp"

namespace vbvarsel {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

// Locale-independent parse of a complete field into a finite double.
inline bool parse_double(const std::string& field, double& out) {
  if (field.empty()) return false;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

inline bool parse_int(const std::string& field, long long& out) {
  if (field.empty()) return false;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidData("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

// Shortest round-trippable decimal form.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  if (parse_double(buf, back) && back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[32];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
      if (parse_double(std::string(shorter), back) && back == v) {
        return shorter;
      }
    }
  }
  return buf;
}

}  // namespace detail

// Comma-separated numeric matrix.  A header row is detected by attempting to
// parse the first row: if every field is a finite number the file has no
// header.  All rows must have the same number of fields (RaggedRow) and all
// data cells must be finite numbers (NonNumericCell); line and field numbers
// in errors are 1-based.
inline DataMatrix load_csv(const std::string& path) {
  const std::vector<std::string> lines = detail::read_lines(path);
  if (lines.empty()) throw InvalidData("'" + path + "' is empty");

  const std::vector<std::string> first = detail::split_fields(lines[0]);
  const std::size_t n_cols = first.size();
  bool has_header = false;
  for (const std::string& f : first) {
    double ignored;
    if (!detail::parse_double(f, ignored)) {
      has_header = true;
      break;
    }
  }

  std::vector<std::string> names;
  if (has_header) names = first;

  const std::size_t first_data = has_header ? 1 : 0;
  if (lines.size() <= first_data) {
    throw InvalidData("'" + path + "' has no data rows");
  }
  const std::size_t n_rows = lines.size() - first_data;
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n_rows),
                         static_cast<Eigen::Index>(n_cols));
  for (std::size_t row = 0; row < n_rows; ++row) {
    const int line_no = static_cast<int>(first_data + row + 1);
    const std::vector<std::string> fields =
        detail::split_fields(lines[first_data + row]);
    if (fields.size() != n_cols) {
      throw RaggedRow(line_no, static_cast<int>(fields.size()),
                      static_cast<int>(n_cols));
    }
    for (std::size_t col = 0; col < n_cols; ++col) {
      double v;
      if (!detail::parse_double(fields[col], v)) {
        throw NonNumericCell(line_no, static_cast<int>(col + 1), fields[col]);
      }
      values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = v;
    }
  }
  return DataMatrix(std::move(values), std::move(names));
}

inline void write_csv(const std::string& path, const DataMatrix& data) {
  std::ofstream out(path);
  if (!out) throw InvalidData("cannot write '" + path + "'");
  if (!data.column_names.empty()) {
    for (std::size_t p = 0; p < data.column_names.size(); ++p) {
      out << (p ? "," : "") << data.column_names[p];
    }
    out << "\n";
  }
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index p = 0; p < data.j(); ++p) {
      out << (p ? "," : "") << detail::format_double(data.values(i, p));
    }
    out << "\n";
  }
}

// Integer labels, one observation per row.  Accepts either a single column of
// labels in row order or an (observation_index, label) pair per row; an
// optional header is skipped.
inline std::vector<int> load_labels_csv(const std::string& path) {
  const std::vector<std::string> lines = detail::read_lines(path);
  if (lines.empty()) throw InvalidData("'" + path + "' is empty");
  std::vector<std::pair<long long, long long>> rows;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::vector<std::string> fields = detail::split_fields(lines[li]);
    if (fields.size() != 1 && fields.size() != 2) {
      throw RaggedRow(static_cast<int>(li + 1),
                      static_cast<int>(fields.size()), 2);
    }
    long long index = static_cast<long long>(rows.size());
    long long label = 0;
    const bool two = fields.size() == 2;
    if (two && !detail::parse_int(fields[0], index)) {
      if (li == 0) continue;  // header
      throw NonNumericCell(static_cast<int>(li + 1), 1, fields[0]);
    }
    if (!detail::parse_int(fields[two ? 1 : 0], label)) {
      if (li == 0) continue;  // header
      throw NonNumericCell(static_cast<int>(li + 1), two ? 2 : 1,
                           fields[two ? 1 : 0]);
    }
    rows.emplace_back(index, label);
  }
  std::vector<int> labels(rows.size());
  for (const auto& [index, label] : rows) {
    if (index < 0 || index >= static_cast<long long>(rows.size())) {
      throw InvalidData("label row index " + std::to_string(index) +
                        " out of range in '" + path + "'");
    }
    labels[static_cast<std::size_t>(index)] = static_cast<int>(label);
  }
  return labels;
}

// Relevance mask: (covariate_index, 0/1) per row, optional header, one row
// per covariate.
inline std::vector<bool> load_relevant_csv(const std::string& path) {
  const std::vector<int> raw = load_labels_csv(path);
  std::vector<bool> mask(raw.size());
  for (std::size_t p = 0; p < raw.size(); ++p) {
    if (raw[p] != 0 && raw[p] != 1) {
      throw InvalidData("relevance flags must be 0 or 1, got " +
                        std::to_string(raw[p]) + " in '" + path + "'");
    }
    mask[p] = raw[p] == 1;
  }
  return mask;
}

}  // namespace vbvarsel

#endif  // VBVARSEL_CSV_HPP_
