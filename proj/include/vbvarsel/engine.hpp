// vbvarsel/engine.hpp

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

#ifndef VBVARSEL_ENGINE_HPP_
#define VBVARSEL_ENGINE_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "vbvarsel/data_matrix.hpp"
#include "vbvarsel/errors.hpp"
#include "vbvarsel/hyperparameters.hpp"
#include "vbvarsel/schedule.hpp"
#include "vbvarsel/special_functions.hpp"
#include "vbvarsel/state.hpp"

namespace vbvarsel {

// Coordinate ascent on the annealed evidence lower bound for a Gaussian
// mixture with covariate selection.  Every update below is the exact
// maximizer of its coordinate at temperature T, written so that each
// expression degenerates bit-for-bit to the plain (T = 1) update: annealing
// enters only through additive (T - 1) offsets and divisions by T, both of
// which are exact no-ops at T = 1.

// Per-fit constants: the data, its elementwise square, and the log density of
// every entry under the per-covariate null (maximum likelihood) Gaussian.
class FitWorkspace {
 public:
  FitWorkspace(const DataMatrix& data, const NullParams& null)
      : x_(data.values),
        x_sq_(data.values.array().square()),
        log_null_(data.n(), data.j()) {
    for (Eigen::Index j = 0; j < data.j(); ++j) {
      const double mu = null.mu0[j];
      const double tau = null.tau0[j];
      log_null_.col(j) =
          (0.5 * (std::log(tau) - detail::kLn2Pi) -
           0.5 * tau * (x_.col(j).array() - mu).square())
              .matrix();
    }
    log_null_colsum_ = log_null_.colwise().sum();
  }

  const Eigen::MatrixXd& x() const { return x_; }
  const Eigen::MatrixXd& x_sq() const { return x_sq_; }
  const Eigen::MatrixXd& log_null() const { return log_null_; }
  const Eigen::VectorXd& log_null_colsum() const { return log_null_colsum_; }

 private:
  Eigen::MatrixXd x_;
  Eigen::MatrixXd x_sq_;
  Eigen::MatrixXd log_null_;
  Eigen::VectorXd log_null_colsum_;
};

// Moments of the data weighted by the current responsibilities.
struct FitStats {
  Eigen::VectorXd n_k;       // K   soft counts
  Eigen::MatrixXd sum_x;     // KxJ sum_n r_nk x_nj
  Eigen::MatrixXd sum_x_sq;  // KxJ sum_n r_nk x_nj^2
};

inline FitStats collect_stats(const Eigen::MatrixXd& r,
                              const FitWorkspace& ws) {
  FitStats stats;
  stats.n_k = r.colwise().sum();
  stats.sum_x = r.transpose() * ws.x();
  stats.sum_x_sq = r.transpose() * ws.x_sq();
  return stats;
}

// E[ln pi_k] under the Dirichlet posterior.
inline double expected_log_weight(const VariationalState& st, int k) {
  return digamma(st.alpha[k]) - digamma(st.alpha.sum());
}

// E[ln N(x | mu_kj, tau_kj^{-1})] under the Gaussian-Gamma posterior of
// component k, covariate j:
//   -ln(2 pi)/2 + E[ln tau]/2 - (E[tau](x - m)^2 + 1/beta)/2.
inline double expected_log_density(const VariationalState& st, int k, int j,
                                   double x) {
  const double log_tau = digamma(st.a(k, j)) - std::log(st.b(k, j));
  const double e_tau = st.a(k, j) / st.b(k, j);
  const double d = x - st.m(k, j);
  return -detail::kHalfLn2Pi + 0.5 * log_tau -
         0.5 * (e_tau * d * d + 1.0 / st.beta(k, j));
}

namespace detail {

// Pieces of sum_j [c_j E ln f(x_nj|phi_kj) + (1-c_j) ln f0(x_nj)] shared by
// the responsibility update and the bound:
//   density(n,k) = base(k) - quad(n,k)/2,  plus null_part(n) for the
//   deselected remainder.
struct DensityTerms {
  Eigen::VectorXd log_pi;     // K   E[ln pi_k]
  Eigen::MatrixXd log_tau;    // KxJ E[ln tau_kj]
  Eigen::MatrixXd e_tau;      // KxJ E[tau_kj]
  Eigen::VectorXd base;       // K   sum_j c_j (-ln(2pi)/2 + log_tau/2 - 1/(2 beta))
  Eigen::MatrixXd quad;       // NxK sum_j c_j e_tau (x - m)^2
  Eigen::VectorXd null_part;  // N   sum_j (1 - c_j) ln f0
};

inline DensityTerms density_terms(const VariationalState& st,
                                  const FitWorkspace& ws) {
  DensityTerms t;
  const Eigen::Index k = st.k();
  const Eigen::Index j = st.j();

  t.log_pi.resize(k);
  const double psi_total = digamma(st.alpha.sum());
  for (Eigen::Index q = 0; q < k; ++q) {
    t.log_pi[q] = digamma(st.alpha[q]) - psi_total;
  }

  t.log_tau.resize(k, j);
  for (Eigen::Index q = 0; q < k; ++q) {
    for (Eigen::Index p = 0; p < j; ++p) {
      t.log_tau(q, p) = digamma(st.a(q, p)) - std::log(st.b(q, p));
    }
  }
  t.e_tau = (st.a.array() / st.b.array()).matrix();

  t.base = ((-kHalfLn2Pi + 0.5 * t.log_tau.array() -
             0.5 / st.beta.array()).matrix() *
            st.c);

  // Expand the selected quadratic form into three matrix products:
  //   quad = X.^2 W' - 2 X (W.*m)' + 1 (sum_j W.*m.^2)'
  // with W_kj = c_j E[tau_kj].
  const Eigen::MatrixXd w =
      (t.e_tau.array().rowwise() * st.c.transpose().array()).matrix();
  const Eigen::MatrixXd wm = (w.array() * st.m.array()).matrix();
  const Eigen::VectorXd wm2 =
      (w.array() * st.m.array().square()).rowwise().sum().matrix();
  t.quad = ws.x_sq() * w.transpose() - 2.0 * (ws.x() * wm.transpose());
  t.quad.rowwise() += wm2.transpose();

  t.null_part =
      ws.log_null() * (Eigen::VectorXd::Ones(j) - st.c);
  return t;
}

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace detail

// Responsibility update: r_nk proportional to exp((1/T)[E ln pi_k + selected
// and null density terms]), normalized per observation in log space.
// Returns the refreshed weighted moments of the new responsibilities.
inline FitStats update_responsibilities(VariationalState& st,
                                        const FitWorkspace& ws, double t) {
  const detail::DensityTerms dt = detail::density_terms(st, ws);
  Eigen::MatrixXd log_rho = -0.5 * dt.quad;
  log_rho.rowwise() += (dt.log_pi + dt.base).transpose();
  log_rho.colwise() += dt.null_part;
  log_rho /= t;

  const Eigen::VectorXd row_max = log_rho.rowwise().maxCoeff();
  if (!row_max.allFinite()) {
    throw NumericalUnderflow("responsibility row with no finite entry");
  }
  log_rho.colwise() -= row_max;
  st.r = log_rho.array().exp().matrix();
  const Eigen::VectorXd row_sum = st.r.rowwise().sum();
  st.r.array().colwise() /= row_sum.array();
  return collect_stats(st.r, ws);
}

// Selection update: per covariate, the log odds of being informative are the
// gap between the clustered and null explanations of that column,
//   ln eta1_j = (E ln delta_j + sum_nk r_nk E ln f(x_nj|phi_kj)) / T
//   ln eta0_j = (E ln(1-delta_j) + sum_n ln f0(x_nj)) / T,
// with the Beta posterior over delta_j implied by the previous committed c_j:
//   delta_j ~ Beta((c_j + d0 + T - 1)/T, (T - c_j + d0)/T).
inline void update_selection(VariationalState& st, const FitWorkspace& ws,
                             const FitStats& stats, const Hyperparameters& h,
                             double t) {
  const Eigen::Index k = st.k();
  const Eigen::Index j = st.j();
  const double tm1 = t - 1.0;
  const double dsum = (2.0 * h.d0 + (2.0 * t - 1.0)) / t;
  const double psi_dsum = digamma(dsum);

  // sum_n r_nk E ln f(x_nj | phi_kj), accumulated over components.
  Eigen::VectorXd evidence = Eigen::VectorXd::Zero(j);
  for (Eigen::Index q = 0; q < k; ++q) {
    const double nk = stats.n_k[q];
    for (Eigen::Index p = 0; p < j; ++p) {
      const double log_tau = digamma(st.a(q, p)) - std::log(st.b(q, p));
      const double e_tau = st.a(q, p) / st.b(q, p);
      const double m = st.m(q, p);
      const double sq =
          stats.sum_x_sq(q, p) - 2.0 * m * stats.sum_x(q, p) + nk * m * m;
      evidence[p] += nk * (-detail::kHalfLn2Pi + 0.5 * log_tau -
                           0.5 / st.beta(q, p)) -
                     0.5 * e_tau * sq;
    }
  }

  const Eigen::VectorXd c_prev = st.c;
  for (Eigen::Index p = 0; p < j; ++p) {
    const double d1 = (c_prev[p] + h.d0 + tm1) / t;
    const double d2 = ((t - c_prev[p]) + h.d0) / t;
    const double e_log_delta = digamma(d1) - psi_dsum;
    const double e_log_1m_delta = digamma(d2) - psi_dsum;
    const double log_eta1 = (e_log_delta + evidence[p]) / t;
    const double log_eta0 = (e_log_1m_delta + ws.log_null_colsum()[p]) / t;
    st.c[p] = logistic(log_eta1 - log_eta0);
  }
}

// Dirichlet update: alpha_k = (N_k + alpha0 + T - 1) / T.
inline void update_mixture_weights(VariationalState& st, const FitStats& stats,
                                   const Hyperparameters& h, double t) {
  const double tm1 = t - 1.0;
  st.alpha = (((stats.n_k.array() + h.alpha0) + tm1) / t).matrix();
}

// Gaussian-Gamma update per component and covariate, with the data terms
// damped by the selection weight c_j.  A covariate with c_j = 0 contributes
// no evidence, so its posterior is written directly from the prior; that also
// keeps the reduction exact in floating point.
inline void update_component_params(VariationalState& st,
                                    const FitWorkspace& ws,
                                    const FitStats& stats,
                                    const Hyperparameters& h, double t) {
  const Eigen::Index k = st.k();
  const Eigen::Index j = st.j();
  const double tm1 = t - 1.0;

  Eigen::VectorXd xbar(j), s(j);
  for (Eigen::Index q = 0; q < k; ++q) {
    const double nk = stats.n_k[q];
    if (nk > 0.0) {
      xbar = stats.sum_x.row(q).transpose() / nk;
      const Eigen::MatrixXd dev = ws.x().rowwise() - xbar.transpose();
      s = (dev.array().square().matrix().transpose() * st.r.col(q)) / nk;
    } else {
      xbar.setZero();
      s.setZero();
    }
    for (Eigen::Index p = 0; p < j; ++p) {
      const double cj = st.c[p];
      if (cj == 0.0) {
        st.beta(q, p) = h.beta0 / t;
        st.m(q, p) = h.m0[p];
        st.a(q, p) = (h.a0 + tm1) / t;
        st.b(q, p) = h.b0_rate(p) / t;
        continue;
      }
      const double cn = cj * nk;
      st.beta(q, p) = (cn + h.beta0) / t;
      st.m(q, p) =
          (cj * stats.sum_x(q, p) + h.m0[p] * h.beta0) / (t * st.beta(q, p));
      st.a(q, p) = ((0.5 * cn + h.a0) + tm1) / t;
      const double shrink = h.beta0 * cn / (h.beta0 + cn);
      const double d = xbar[p] - h.m0[p];
      st.b(q, p) = h.b0_rate(p) / t + (cn * s[p] + shrink * d * d) / (2.0 * t);
    }
  }
}

// Annealed evidence lower bound of the committed state:
//   E[ln p(X|..)] + E[ln p(Z|pi)] + E[ln p(pi)] + E[ln p(mu,tau)]
//   + E[ln p(gamma,delta)] - T (E[ln q(Z)] + E[ln q(pi)] + E[ln q(mu,tau)]
//   + E[ln q(gamma,delta)]).
inline double compute_elbo(const VariationalState& st, const FitWorkspace& ws,
                           const Hyperparameters& h, double t) {
  const Eigen::Index n = st.n();
  const Eigen::Index k = st.k();
  const Eigen::Index j = st.j();
  const detail::DensityTerms dt = detail::density_terms(st, ws);

  // E[ln p(X | Z, gamma, mu, tau)]
  Eigen::MatrixXd g = -0.5 * dt.quad;
  g.rowwise() += dt.base.transpose();
  double log_lik = (st.r.array() * g.array()).sum() + dt.null_part.sum();

  // E[ln p(Z | pi)] and the Dirichlet prior and entropy terms.
  const Eigen::VectorXd n_k = st.r.colwise().sum();
  const double log_p_z = n_k.dot(dt.log_pi);
  const double kd = static_cast<double>(k);
  const double log_p_pi = log_gamma(kd * h.alpha0) - kd * log_gamma(h.alpha0) +
                          (h.alpha0 - 1.0) * dt.log_pi.sum();
  const double alpha_total = st.alpha.sum();
  double log_q_pi = log_gamma(alpha_total);
  for (Eigen::Index q = 0; q < k; ++q) {
    log_q_pi += -log_gamma(st.alpha[q]) + (st.alpha[q] - 1.0) * dt.log_pi[q];
  }

  // Gaussian-Gamma prior and entropy, accumulated per cell.
  double log_p_phi = 0.0;
  double log_q_phi = 0.0;
  const double lg_a0 = log_gamma(h.a0);
  for (Eigen::Index q = 0; q < k; ++q) {
    for (Eigen::Index p = 0; p < j; ++p) {
      const double lt = dt.log_tau(q, p);
      const double et = dt.e_tau(q, p);
      const double dm = st.m(q, p) - h.m0[p];
      log_p_phi += 0.5 * (std::log(h.beta0) - detail::kLn2Pi) + 0.5 * lt -
                   0.5 * h.beta0 * (et * dm * dm + 1.0 / st.beta(q, p)) +
                   h.a0 * std::log(h.b0_rate(p)) - lg_a0 + (h.a0 - 1.0) * lt -
                   h.b0_rate(p) * et;
      log_q_phi += 0.5 * (std::log(st.beta(q, p)) - detail::kLn2Pi) - 0.5 +
                   0.5 * lt + st.a(q, p) * std::log(st.b(q, p)) -
                   log_gamma(st.a(q, p)) + (st.a(q, p) - 1.0) * lt -
                   st.a(q, p);
    }
  }

  // Selection prior and entropy under the Beta posterior implied by c.
  const double tm1 = t - 1.0;
  double log_p_sel = 0.0;
  double log_q_sel = 0.0;
  for (Eigen::Index p = 0; p < j; ++p) {
    const double c = st.c[p];
    const double d1 = (c + h.d0 + tm1) / t;
    const double d2 = ((t - c) + h.d0) / t;
    const double psi_sum = digamma(d1 + d2);
    const double e_log_delta = digamma(d1) - psi_sum;
    const double e_log_1m_delta = digamma(d2) - psi_sum;
    log_p_sel += c * e_log_delta + (1.0 - c) * e_log_1m_delta +
                 (h.d0 - 1.0) * (e_log_delta + e_log_1m_delta) -
                 log_beta(h.d0, h.d0);
    log_q_sel += detail::xlogx(c) + detail::xlogx(1.0 - c) +
                 (d1 - 1.0) * e_log_delta + (d2 - 1.0) * e_log_1m_delta -
                 log_beta(d1, d2);
  }

  // Categorical entropy of the responsibilities.
  double log_q_z = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index q = 0; q < k; ++q) {
      log_q_z += detail::xlogx(st.r(i, q));
    }
  }

  const double elbo = log_lik + log_p_z + log_p_pi + log_p_phi + log_p_sel -
                      t * (log_q_z + log_q_pi + log_q_phi + log_q_sel);
  if (!std::isfinite(elbo)) {
    throw NonFiniteElbo("bound evaluated to " + std::to_string(elbo));
  }
  return elbo;
}

// Hard assignment per observation: the most responsible component, smallest
// index on ties.
inline std::vector<int> extract_assignments(const VariationalState& st) {
  std::vector<int> labels(static_cast<std::size_t>(st.n()));
  for (Eigen::Index i = 0; i < st.n(); ++i) {
    int best = 0;
    for (Eigen::Index q = 1; q < st.k(); ++q) {
      if (st.r(i, q) > st.r(i, best)) best = static_cast<int>(q);
    }
    labels[static_cast<std::size_t>(i)] = best;
  }
  return labels;
}

inline std::vector<bool> extract_selection(const VariationalState& st,
                                           double threshold = 0.5) {
  std::vector<bool> selected(static_cast<std::size_t>(st.j()));
  for (Eigen::Index p = 0; p < st.j(); ++p) {
    selected[static_cast<std::size_t>(p)] = st.c[p] >= threshold;
  }
  return selected;
}

struct FitResult {
  std::vector<int> labels;
  std::vector<bool> selected;
  Eigen::VectorXd c;
  std::vector<double> elbo_trace;         // one entry per iteration
  std::vector<double> temperature_trace;  // parallel to elbo_trace
  int iterations = 0;
  bool converged = false;
  std::vector<int> cluster_sizes;
  int effective_k = 0;
  bool elbo_decreased = false;     // bound dropped beyond tolerance at T = 1
  double largest_elbo_drop = 0.0;  // most negative offending change
  bool refined = false;  // the selection-guided second pass won on the bound
  VariationalState state;
};

namespace detail {

// Runs the update cycle on a freshly initialized state until the bound
// settles: one parameter refresh from the hard initial assignments (the
// components all sit at the same prior, so leading with the responsibility
// update would wash the start back to uniform), then per iteration at the
// scheduled temperature: responsibilities, selection, mixture weights,
// component parameters, bound.  Convergence needs a non-negative improvement
// below epsilon once the schedule has settled at its final temperature; the
// improvement is frequently exactly zero because the selection weights and
// responsibilities saturate, making consecutive states bit-identical.
// Hitting max_iterations is reported through `converged = false`, not an
// error.  Trace, iteration, convergence, and bound-monotonicity fields are
// filled in `res`; the caller finishes the rest.
inline void run_updates(VariationalState& st, const FitWorkspace& ws,
                        const Hyperparameters& h,
                        const TemperatureSchedule& schedule, FitResult& res) {
  {
    const double t = schedule.temperature(0);
    const FitStats stats = collect_stats(st.r, ws);
    update_mixture_weights(st, stats, h, t);
    update_component_params(st, ws, stats, h, t);
  }

  double prev_elbo = 0.0;
  double prev_t = 0.0;
  for (int i = 0; i < h.max_iterations; ++i) {
    const double t = schedule.temperature(i);
    st.temperature = t;
    const FitStats stats = update_responsibilities(st, ws, t);
    update_selection(st, ws, stats, h, t);
    update_mixture_weights(st, stats, h, t);
    update_component_params(st, ws, stats, h, t);
    const double elbo = compute_elbo(st, ws, h, t);
    res.elbo_trace.push_back(elbo);
    res.temperature_trace.push_back(t);
    res.iterations = i + 1;

    if (i > 0) {
      const double improvement = elbo - prev_elbo;
      if (t == 1.0 && prev_t == 1.0) {
        const double tol = 1e-8 * std::max(1.0, std::abs(prev_elbo));
        if (improvement < -tol) {
          res.elbo_decreased = true;
          res.largest_elbo_drop = std::min(res.largest_elbo_drop, improvement);
        }
      }
      const bool settled =
          schedule.kind == ScheduleKind::kFixed || t == 1.0;
      if (settled && improvement >= 0.0 && improvement < h.epsilon) {
        res.converged = true;
        break;
      }
    }
    prev_elbo = elbo;
    prev_t = t;
  }
}

inline void finish_result(FitResult& res, VariationalState&& st, int k_max) {
  res.labels = extract_assignments(st);
  res.selected = extract_selection(st);
  res.c = st.c;
  res.cluster_sizes.assign(static_cast<std::size_t>(k_max), 0);
  for (int label : res.labels) {
    ++res.cluster_sizes[static_cast<std::size_t>(label)];
  }
  res.effective_k = static_cast<int>(
      std::count_if(res.cluster_sizes.begin(), res.cluster_sizes.end(),
                    [](int size) { return size > 0; }));
  res.state = std::move(st);
}

}  // namespace detail

// Full fit in two passes.  The first pass starts from a k-means partition of
// all covariates and runs the update cycle to convergence.  Its selection
// verdict is then used to build a sharper start: k-means on the selected
// covariates alone, selection weights reset to the neutral 1/2 so every
// covariate is re-decided against the improved partition.  Whichever pass
// ends with the higher bound wins.  The second pass exists because the
// first k-means partition is diluted by the irrelevant covariates; re-seeding
// inside the selected subspace recovers splits the diluted partition merged,
// and re-deciding the covariates drops the ones that only matched the noise
// in the initial partition.  Deterministic given seed.
inline FitResult fit(const DataMatrix& data, const Hyperparameters& hyper,
                     const TemperatureSchedule& schedule, std::uint64_t seed) {
  schedule.validate();
  const DataMatrix working =
      hyper.standardize ? vbvarsel::standardize(data) : data;
  const Hyperparameters h = hyper.resolved(working);

  VariationalState st = init_state(working, h, schedule, seed);
  const FitWorkspace ws(working, st.null);
  FitResult res;
  detail::run_updates(st, ws, h, schedule, res);

  const Eigen::Index j = working.j();
  Eigen::Index n_selected = 0;
  for (Eigen::Index p = 0; p < j; ++p) n_selected += st.c[p] >= 0.5 ? 1 : 0;
  if (n_selected > 0 && n_selected < j) {
    Eigen::MatrixXd sub(working.n(), n_selected);
    Eigen::Index q = 0;
    for (Eigen::Index p = 0; p < j; ++p) {
      if (st.c[p] >= 0.5) sub.col(q++) = working.values.col(p);
    }
    Rng rng(seed + 1);
    const std::vector<int> labels =
        detail::kmeans_partition(sub, h.k_max, rng);
    VariationalState st2 =
        detail::state_from_labels(working, h, schedule, labels, 0.5);
    FitResult res2;
    detail::run_updates(st2, ws, h, schedule, res2);
    if (res2.elbo_trace.back() > res.elbo_trace.back()) {
      res2.refined = true;
      detail::finish_result(res2, std::move(st2), h.k_max);
      return res2;
    }
  }

  detail::finish_result(res, std::move(st), h.k_max);
  return res;
}

}  // namespace vbvarsel

#endif  // VBVARSEL_ENGINE_HPP_
