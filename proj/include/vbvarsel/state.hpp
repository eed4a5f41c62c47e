// vbvarsel/state.hpp

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

#ifndef VBVARSEL_STATE_HPP_
#define VBVARSEL_STATE_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "vbvarsel/data_matrix.hpp"
#include "vbvarsel/errors.hpp"
#include "vbvarsel/hyperparameters.hpp"
#include "vbvarsel/rng.hpp"
#include "vbvarsel/schedule.hpp"

namespace vbvarsel {

// Maximum-likelihood Gaussian fitted to each covariate ignoring the cluster
// structure.  A covariate that is switched off is explained by this "null"
// density instead of the per-component ones.
struct NullParams {
  Eigen::VectorXd mu0;   // per-covariate mean
  Eigen::VectorXd tau0;  // per-covariate precision, 1 / (1/N variance)
};

inline NullParams fit_null_params(const DataMatrix& data) {
  const Eigen::MatrixXd& x = data.values;
  NullParams null;
  null.mu0 = x.colwise().mean();
  null.tau0.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (x.col(j).maxCoeff() == x.col(j).minCoeff()) {
      throw ZeroVarianceColumn(static_cast<int>(j));
    }
    const double var = (x.col(j).array() - null.mu0[j]).square().mean();
    null.tau0[j] = 1.0 / var;
  }
  return null;
}

// Free parameters of the factorized variational posterior:
//   q(z_n)     categorical with probabilities r.row(n),
//   q(pi)      Dirichlet(alpha),
//   q(mu,tau)  Gaussian-Gamma per component and covariate (beta, m, a, b),
//   q(gamma_j) Bernoulli(c_j), with the Beta posterior over delta_j implied
//              by c_j, d0, and the current temperature.
struct VariationalState {
  Eigen::MatrixXd r;      // N x K responsibilities, rows sum to one
  Eigen::VectorXd c;      // J selection weights in [0, 1]
  Eigen::VectorXd alpha;  // K
  Eigen::MatrixXd beta;   // K x J
  Eigen::MatrixXd m;      // K x J
  Eigen::MatrixXd a;      // K x J
  Eigen::MatrixXd b;      // K x J
  NullParams null;
  double temperature = 1.0;

  Eigen::Index n() const { return r.rows(); }
  Eigen::Index k() const { return r.cols(); }
  Eigen::Index j() const { return c.size(); }
};

namespace detail {

// Lloyd's algorithm with k-means++ seeding, restarted several times and
// keeping the partition with the lowest within-cluster sum of squares.
// Returns one hard label in [0, k) per row.
inline std::vector<int> kmeans_partition(const Eigen::MatrixXd& x, int k,
                                         Rng& rng, int restarts = 10,
                                         int max_rounds = 25) {
  const Eigen::Index n = x.rows();
  std::vector<int> best(static_cast<std::size_t>(n), 0);
  if (k < 2) return best;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < restarts; ++restart) {
    Eigen::MatrixXd centers(k, x.cols());
    centers.row(0) = x.row(static_cast<Eigen::Index>(
        rng.uniform_below(static_cast<std::uint64_t>(n))));
    Eigen::VectorXd d2 =
        (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int q = 1; q < k; ++q) {
      std::vector<double> w(d2.data(), d2.data() + d2.size());
      centers.row(q) = x.row(static_cast<Eigen::Index>(rng.categorical(w)));
      d2 = d2.cwiseMin((x.rowwise() - centers.row(q)).rowwise().squaredNorm());
    }
    std::vector<int> assign(static_cast<std::size_t>(n), 0);
    double sse = 0.0;
    for (int round = 0; round < max_rounds; ++round) {
      bool moved = false;
      sse = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        int arg = 0;
        double least = (x.row(i) - centers.row(0)).squaredNorm();
        for (int q = 1; q < k; ++q) {
          const double dq = (x.row(i) - centers.row(q)).squaredNorm();
          if (dq < least) {
            least = dq;
            arg = q;
          }
        }
        sse += least;
        if (assign[static_cast<std::size_t>(i)] != arg) moved = true;
        assign[static_cast<std::size_t>(i)] = arg;
      }
      if (!moved) break;
      for (int q = 0; q < k; ++q) {
        Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(x.cols());
        int count = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (assign[static_cast<std::size_t>(i)] == q) {
            sum += x.row(i);
            ++count;
          }
        }
        if (count > 0) centers.row(q) = sum / count;
      }
    }
    if (sse < best_sse) {
      best_sse = sse;
      best = assign;
    }
  }
  return best;
}

// State with one-hot responsibilities from the given hard labels, every
// covariate weighted c0, and all posterior parameters at their prior values.
// `hyper` must already be resolved against `data`.
inline VariationalState state_from_labels(const DataMatrix& data,
                                          const Hyperparameters& h,
                                          const TemperatureSchedule& schedule,
                                          const std::vector<int>& labels,
                                          double c0) {
  const Eigen::Index n = data.n();
  const Eigen::Index j = data.j();
  const Eigen::Index k = h.k_max;
  VariationalState st;
  st.r = Eigen::MatrixXd::Zero(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    st.r(i, labels[static_cast<std::size_t>(i)]) = 1.0;
  }
  st.c = Eigen::VectorXd::Constant(j, c0);
  st.alpha = Eigen::VectorXd::Constant(k, h.alpha0);
  st.beta = Eigen::MatrixXd::Constant(k, j, h.beta0);
  st.m = h.m0.transpose().replicate(k, 1);
  st.a = Eigen::MatrixXd::Constant(k, j, h.a0);
  st.b.resize(k, j);
  for (Eigen::Index p = 0; p < j; ++p) st.b.col(p).setConstant(h.b0_rate(p));
  st.null = fit_null_params(data);
  st.temperature = schedule.temperature(0);
  return st;
}

}  // namespace detail

// Starting state: a k-means partition of the rows (k-means++ seeding, best of
// several restarts) provides hard initial assignments, every covariate is
// weighted c_init, and all posterior parameters sit at their prior values.
// A data-driven start is essential: the selection weights react to the very
// first assignments, and a partition no better than chance sends every
// covariate's evidence negative at once, after which the fit cannot recover.
// `hyper` may be unresolved; m0 defaults to the column means of `data` as
// given (standardization, when requested, happens in fit() before this
// point).
inline VariationalState init_state(const DataMatrix& data,
                                   const Hyperparameters& hyper,
                                   const TemperatureSchedule& schedule,
                                   std::uint64_t seed) {
  schedule.validate();
  const Hyperparameters h = hyper.resolved(data);
  Rng rng(seed);
  const std::vector<int> labels =
      detail::kmeans_partition(data.values, h.k_max, rng);
  return detail::state_from_labels(data, h, schedule, labels, h.c_init);
}

}  // namespace vbvarsel

#endif  // VBVARSEL_STATE_HPP_
