// vbvarsel/errors.hpp

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

#ifndef VBVARSEL_ERRORS_HPP_
#define VBVARSEL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace vbvarsel {

// Root of the library exception hierarchy.  Every error thrown by this
// library derives from Error, which splits into ConfigError (the caller asked
// for something inconsistent) and DataError (the inputs or intermediate
// numerics are unusable).  The command line tool maps the two branches to
// distinct exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

// --- configuration problems -------------------------------------------------

class InvalidHyperparameter : public ConfigError {
 public:
  InvalidHyperparameter(const std::string& field, const std::string& why)
      : ConfigError("invalid hyperparameter '" + field + "': " + why),
        field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class InvalidSchedule : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Inconsistent synthetic-data request (bad weights, fractions, dof, ...).
class InvalidSpec : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnknownTable : public ConfigError {
 public:
  explicit UnknownTable(const std::string& id)
      : ConfigError("unknown reproduction table '" + id + "'") {}
};

class ConfigParseError : public ConfigError {
 public:
  ConfigParseError(const std::string& why, int line)
      : ConfigError("config line " + std::to_string(line) + ": " + why),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// --- data and numerical problems --------------------------------------------

class InvalidData : public DataError {
 public:
  using DataError::DataError;
};

class ZeroVarianceColumn : public DataError {
 public:
  explicit ZeroVarianceColumn(int column)
      : DataError("column " + std::to_string(column) +
                  " is constant (zero variance)"),
        column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

class NotPositiveDefinite : public DataError {
 public:
  using DataError::DataError;
};

class NumericalUnderflow : public DataError {
 public:
  using DataError::DataError;
};

class NonFiniteElbo : public DataError {
 public:
  using DataError::DataError;
};

class LengthMismatch : public DataError {
 public:
  using DataError::DataError;
};

// Count arguments to the enrichment test that violate their bounds.
class InvalidCounts : public DataError {
 public:
  using DataError::DataError;
};

// --- CSV ingestion -----------------------------------------------------------

// Base for CSV problems; line and column are 1-based, column 0 meaning the
// whole line.
class ParseError : public DataError {
 public:
  ParseError(const std::string& why, int line, int column = 0)
      : DataError("csv line " + std::to_string(line) +
                  (column > 0 ? ", field " + std::to_string(column) : "") +
                  ": " + why),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class RaggedRow : public ParseError {
 public:
  RaggedRow(int line, int got, int expected)
      : ParseError("row has " + std::to_string(got) + " fields, expected " +
                       std::to_string(expected),
                   line) {}
};

class NonNumericCell : public ParseError {
 public:
  NonNumericCell(int line, int column, const std::string& text)
      : ParseError("cannot parse '" + text + "' as a finite number", line,
                   column) {}
};

}  // namespace vbvarsel

#endif  // VBVARSEL_ERRORS_HPP_
