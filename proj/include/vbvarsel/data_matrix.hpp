// vbvarsel/data_matrix.hpp

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

#ifndef VBVARSEL_DATA_MATRIX_HPP_
#define VBVARSEL_DATA_MATRIX_HPP_

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "vbvarsel/errors.hpp"

namespace vbvarsel {

// Dense observations-by-covariates matrix with optional column names.
// Construction validates shape and finiteness, so downstream code can assume
// at least two rows, at least one column, and no NaN or infinity anywhere.
struct DataMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> column_names;  // empty, or one name per column

  DataMatrix() = default;

  explicit DataMatrix(Eigen::MatrixXd v, std::vector<std::string> names = {})
      : values(std::move(v)), column_names(std::move(names)) {
    if (values.rows() < 2) {
      throw InvalidData("need at least two observations, got " +
                        std::to_string(values.rows()));
    }
    if (values.cols() < 1) {
      throw InvalidData("need at least one covariate");
    }
    if (!values.allFinite()) {
      throw InvalidData("data contains non-finite entries");
    }
    if (!column_names.empty() &&
        column_names.size() != static_cast<std::size_t>(values.cols())) {
      throw InvalidData("got " + std::to_string(column_names.size()) +
                        " column names for " + std::to_string(values.cols()) +
                        " columns");
    }
  }

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index j() const { return values.cols(); }

  // Name of column j, falling back to its index when names are absent.
  std::string name_of(Eigen::Index j) const {
    if (column_names.empty()) return std::to_string(j);
    return column_names[static_cast<std::size_t>(j)];
  }
};

inline Eigen::VectorXd column_means(const Eigen::MatrixXd& x) {
  return x.colwise().mean();
}

// Per-column variance with the 1/N convention.
inline Eigen::VectorXd column_variances(const Eigen::MatrixXd& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  return (x.rowwise() - mean).array().square().colwise().mean();
}

// Center each column to mean zero and scale it to unit 1/N variance.
// A constant column cannot be scaled and raises ZeroVarianceColumn; the
// constancy test is exact (max equals min) so rounding noise in the mean does
// not mask it.
inline DataMatrix standardize(const DataMatrix& data) {
  const Eigen::MatrixXd& x = data.values;
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (x.col(j).maxCoeff() == x.col(j).minCoeff()) {
      throw ZeroVarianceColumn(static_cast<int>(j));
    }
    const double mean = x.col(j).mean();
    const Eigen::VectorXd centered = x.col(j).array() - mean;
    const double sd = std::sqrt(centered.squaredNorm() /
                                static_cast<double>(x.rows()));
    out.col(j) = centered / sd;
  }
  return DataMatrix(std::move(out), data.column_names);
}

}  // namespace vbvarsel

#endif  // VBVARSEL_DATA_MATRIX_HPP_
