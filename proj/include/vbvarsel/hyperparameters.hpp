// vbvarsel/hyperparameters.hpp

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

#ifndef VBVARSEL_HYPERPARAMETERS_HPP_
#define VBVARSEL_HYPERPARAMETERS_HPP_

#include <Eigen/Dense>
#include <string>

#include "vbvarsel/data_matrix.hpp"
#include "vbvarsel/errors.hpp"

namespace vbvarsel {

// Prior settings and run controls for the variational fit.
//
// The mixture is deliberately overfitted: k_max components with a symmetric
// Dirichlet(alpha0) prior on the weights.  A small alpha0 (well below 0.5)
// lets the posterior empty the surplus components so the effective number of
// clusters is recovered rather than fixed in advance.  Each component's
// covariate densities carry a Gaussian-Gamma prior
//   mu | tau ~ N(m0_j, (beta0 tau)^{-1}),  tau ~ Gamma(a0, scale = b0_j),
// and each covariate's selection indicator has a Bernoulli(delta_j) prior with
// delta_j ~ Beta(d0, d0).
//
// b0_j is the Gamma scale, so the prior precision has mean a0 * b0_j.  On
// standardized data the default a0 = 3, b0 = 0.2 centres that mean at 0.6,
// slightly below the marginal precision of 1: components start a little
// wider than the data, which lets surplus components empty out instead of
// latching onto noise.  The update equations work with the rate 1 / b0_j
// (see b0_rate).
//
// m0 and b0 may be left empty, in which case resolved() fills m0 with the
// per-covariate data means and broadcasts the scalar b0_scale across b0.
struct Hyperparameters {
  int k_max = 10;
  double alpha0 = 0.1;
  Eigen::VectorXd m0;      // empty, or one prior mean per covariate
  double beta0 = 1e-3;
  double a0 = 3.0;
  Eigen::VectorXd b0;      // empty, or one prior Gamma scale per covariate
  double b0_scale = 0.2;   // broadcast into b0 when b0 is empty
  double d0 = 0.9;
  double c_init = 1.0;     // initial selection weight for every covariate
  int max_iterations = 200;
  double epsilon = 1e-5;   // absolute ELBO improvement threshold
  bool standardize = true;

  // Prior Gamma rate for covariate j; only meaningful once resolved.
  double b0_rate(Eigen::Index j) const { return 1.0 / b0[j]; }

  void validate() const {
    if (k_max < 1) {
      throw InvalidHyperparameter("k_max", "must be at least 1");
    }
    if (!(alpha0 > 0.0)) {
      throw InvalidHyperparameter("alpha0", "must be positive");
    }
    if (!(beta0 > 0.0)) {
      throw InvalidHyperparameter("beta0", "must be positive");
    }
    if (!(a0 > 0.0)) {
      throw InvalidHyperparameter("a0", "must be positive");
    }
    if (!(b0_scale > 0.0)) {
      throw InvalidHyperparameter("b0_scale", "must be positive");
    }
    for (Eigen::Index j = 0; j < b0.size(); ++j) {
      if (!(b0[j] > 0.0)) {
        throw InvalidHyperparameter("b0", "entry " + std::to_string(j) +
                                              " must be positive");
      }
    }
    if (!m0.allFinite()) {
      throw InvalidHyperparameter("m0", "entries must be finite");
    }
    if (!(d0 > 0.0)) {
      throw InvalidHyperparameter("d0", "must be positive");
    }
    if (!(c_init > 0.0) || c_init > 1.0) {
      throw InvalidHyperparameter("c_init", "must lie in (0, 1]");
    }
    if (max_iterations < 1) {
      throw InvalidHyperparameter("max_iterations", "must be at least 1");
    }
    if (!(epsilon > 0.0)) {
      throw InvalidHyperparameter("epsilon", "must be positive");
    }
  }

  // Copy with m0 and b0 expanded against the given data (post
  // standardization, if any) and all lengths checked.
  Hyperparameters resolved(const DataMatrix& data) const {
    validate();
    Hyperparameters h = *this;
    const Eigen::Index j = data.j();
    if (h.m0.size() == 0) {
      h.m0 = column_means(data.values);
    } else if (h.m0.size() != j) {
      throw InvalidHyperparameter(
          "m0", "has length " + std::to_string(h.m0.size()) + " but data has " +
                    std::to_string(j) + " covariates");
    }
    if (h.b0.size() == 0) {
      h.b0 = Eigen::VectorXd::Constant(j, h.b0_scale);
    } else if (h.b0.size() != j) {
      throw InvalidHyperparameter(
          "b0", "has length " + std::to_string(h.b0.size()) + " but data has " +
                    std::to_string(j) + " covariates");
    }
    return h;
  }
};

}  // namespace vbvarsel

#endif  // VBVARSEL_HYPERPARAMETERS_HPP_
