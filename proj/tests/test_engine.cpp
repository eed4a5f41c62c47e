// vbvarsel/tests/test_engine.cpp

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

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "vbvarsel/engine.hpp"
#include "vbvarsel/metrics.hpp"
#include "vbvarsel/rng.hpp"
#include "vbvarsel/synthetic.hpp"

namespace {

void check_close(double got, double want, double tol = 1e-10) {
  CAPTURE(got, want);
  CHECK(std::abs(got - want) <= tol * std::max(1.0, std::abs(want)));
}

// ---------------------------------------------------------------------------
// Plain-loop reference for one full update cycle.  Every quantity below is
// written as the textbook sum it stands for, with no shared code or matrix
// expansion tricks, so agreement with the engine checks the vectorized forms.

struct NaiveModel {
  Eigen::MatrixXd x;
  Eigen::VectorXd mu0, tau0;  // null model
  vbvarsel::Hyperparameters h;

  double ln2pi = std::log(2.0 * std::acos(-1.0));

  double log_null(int i, int p) const {
    const double d = x(i, p) - mu0[p];
    return 0.5 * (std::log(tau0[p]) - ln2pi) - 0.5 * tau0[p] * d * d;
  }

  // E[ln N(x | mu_kp, tau_kp^{-1})] under the variational posterior.
  double e_log_density(const vbvarsel::VariationalState& st, int q, int p,
                       double value) const {
    const double e_log_tau = vbvarsel::digamma(st.a(q, p)) -
                             std::log(st.b(q, p));
    const double e_tau = st.a(q, p) / st.b(q, p);
    const double d = value - st.m(q, p);
    return -0.5 * ln2pi + 0.5 * e_log_tau -
           0.5 * (e_tau * d * d + 1.0 / st.beta(q, p));
  }

  Eigen::MatrixXd responsibilities(const vbvarsel::VariationalState& st,
                                   double t) const {
    const int n = static_cast<int>(st.n());
    const int k = static_cast<int>(st.k());
    const int j = static_cast<int>(st.j());
    double psi_total = vbvarsel::digamma(st.alpha.sum());
    Eigen::MatrixXd log_rho(n, k);
    for (int i = 0; i < n; ++i) {
      for (int q = 0; q < k; ++q) {
        double acc = vbvarsel::digamma(st.alpha[q]) - psi_total;
        for (int p = 0; p < j; ++p) {
          acc += st.c[p] * e_log_density(st, q, p, x(i, p)) +
                 (1.0 - st.c[p]) * log_null(i, p);
        }
        log_rho(i, q) = acc / t;
      }
    }
    Eigen::MatrixXd r(n, k);
    for (int i = 0; i < n; ++i) {
      const double top = log_rho.row(i).maxCoeff();
      double total = 0.0;
      for (int q = 0; q < k; ++q) {
        r(i, q) = std::exp(log_rho(i, q) - top);
        total += r(i, q);
      }
      for (int q = 0; q < k; ++q) r(i, q) /= total;
    }
    return r;
  }

  Eigen::VectorXd selection(const vbvarsel::VariationalState& st,
                            const Eigen::MatrixXd& r, double t) const {
    const int n = static_cast<int>(st.n());
    const int k = static_cast<int>(st.k());
    const int j = static_cast<int>(st.j());
    Eigen::VectorXd c(j);
    const double psi_sum =
        vbvarsel::digamma((2.0 * h.d0 + (2.0 * t - 1.0)) / t);
    for (int p = 0; p < j; ++p) {
      double evidence = 0.0;
      double null_evidence = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int q = 0; q < k; ++q) {
          evidence += r(i, q) * e_log_density(st, q, p, x(i, p));
        }
        null_evidence += log_null(i, p);
      }
      const double d1 = (st.c[p] + h.d0 + t - 1.0) / t;
      const double d2 = ((t - st.c[p]) + h.d0) / t;
      const double log_eta1 =
          (vbvarsel::digamma(d1) - psi_sum + evidence) / t;
      const double log_eta0 =
          (vbvarsel::digamma(d2) - psi_sum + null_evidence) / t;
      c[p] = 1.0 / (1.0 + std::exp(log_eta0 - log_eta1));
    }
    return c;
  }

  Eigen::VectorXd weights(const Eigen::MatrixXd& r, double t) const {
    const int k = static_cast<int>(r.cols());
    Eigen::VectorXd alpha(k);
    for (int q = 0; q < k; ++q) {
      alpha[q] = (r.col(q).sum() + h.alpha0 + t - 1.0) / t;
    }
    return alpha;
  }

  void component_params(vbvarsel::VariationalState& st, double t) const {
    const int n = static_cast<int>(st.n());
    const int k = static_cast<int>(st.k());
    const int j = static_cast<int>(st.j());
    for (int q = 0; q < k; ++q) {
      double nk = 0.0;
      for (int i = 0; i < n; ++i) nk += st.r(i, q);
      for (int p = 0; p < j; ++p) {
        const double cj = st.c[p];
        if (cj == 0.0) {
          st.beta(q, p) = h.beta0 / t;
          st.m(q, p) = h.m0[p];
          st.a(q, p) = (h.a0 + t - 1.0) / t;
          st.b(q, p) = 1.0 / h.b0[p] / t;
          continue;
        }
        double sum_x = 0.0;
        for (int i = 0; i < n; ++i) sum_x += st.r(i, q) * x(i, p);
        const double xbar = nk > 0.0 ? sum_x / nk : 0.0;
        double s = 0.0;
        if (nk > 0.0) {
          for (int i = 0; i < n; ++i) {
            s += st.r(i, q) * (x(i, p) - xbar) * (x(i, p) - xbar);
          }
          s /= nk;
        }
        st.beta(q, p) = (cj * nk + h.beta0) / t;
        st.m(q, p) = (cj * sum_x + h.m0[p] * h.beta0) / (t * st.beta(q, p));
        st.a(q, p) = (0.5 * cj * nk + h.a0 + t - 1.0) / t;
        const double shrink =
            h.beta0 * cj * nk / (h.beta0 + cj * nk);
        const double d = xbar - h.m0[p];
        st.b(q, p) = 1.0 / h.b0[p] / t +
                     (cj * nk * s + shrink * d * d) / (2.0 * t);
      }
    }
  }

  double xlogx(double v) const { return v > 0.0 ? v * std::log(v) : 0.0; }
  double lbeta(double a, double b) const {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  }

  double elbo(const vbvarsel::VariationalState& st, double t) const {
    const int n = static_cast<int>(st.n());
    const int k = static_cast<int>(st.k());
    const int j = static_cast<int>(st.j());
    const double psi_total = vbvarsel::digamma(st.alpha.sum());

    double log_lik = 0.0, log_p_z = 0.0, log_q_z = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int q = 0; q < k; ++q) {
        double selected = 0.0;
        for (int p = 0; p < j; ++p) {
          selected += st.c[p] * e_log_density(st, q, p, x(i, p));
        }
        log_lik += st.r(i, q) * selected;
        log_p_z +=
            st.r(i, q) * (vbvarsel::digamma(st.alpha[q]) - psi_total);
        log_q_z += xlogx(st.r(i, q));
      }
      for (int p = 0; p < j; ++p) {
        log_lik += (1.0 - st.c[p]) * log_null(i, p);
      }
    }

    double log_p_pi = std::lgamma(k * h.alpha0) - k * std::lgamma(h.alpha0);
    double log_q_pi = std::lgamma(st.alpha.sum());
    for (int q = 0; q < k; ++q) {
      const double e_log_pi = vbvarsel::digamma(st.alpha[q]) - psi_total;
      log_p_pi += (h.alpha0 - 1.0) * e_log_pi;
      log_q_pi += -std::lgamma(st.alpha[q]) + (st.alpha[q] - 1.0) * e_log_pi;
    }

    double log_p_phi = 0.0, log_q_phi = 0.0;
    for (int q = 0; q < k; ++q) {
      for (int p = 0; p < j; ++p) {
        const double e_log_tau =
            vbvarsel::digamma(st.a(q, p)) - std::log(st.b(q, p));
        const double e_tau = st.a(q, p) / st.b(q, p);
        const double rate0 = 1.0 / h.b0[p];
        const double dm = st.m(q, p) - h.m0[p];
        log_p_phi += 0.5 * (std::log(h.beta0) - ln2pi) + 0.5 * e_log_tau -
                     0.5 * h.beta0 * (e_tau * dm * dm + 1.0 / st.beta(q, p)) +
                     h.a0 * std::log(rate0) - std::lgamma(h.a0) +
                     (h.a0 - 1.0) * e_log_tau - rate0 * e_tau;
        log_q_phi += 0.5 * (std::log(st.beta(q, p)) - ln2pi) - 0.5 +
                     0.5 * e_log_tau + st.a(q, p) * std::log(st.b(q, p)) -
                     std::lgamma(st.a(q, p)) +
                     (st.a(q, p) - 1.0) * e_log_tau - st.a(q, p);
      }
    }

    double log_p_sel = 0.0, log_q_sel = 0.0;
    for (int p = 0; p < j; ++p) {
      const double c = st.c[p];
      const double d1 = (c + h.d0 + t - 1.0) / t;
      const double d2 = ((t - c) + h.d0) / t;
      const double psi_sum = vbvarsel::digamma(d1 + d2);
      const double e_log_delta = vbvarsel::digamma(d1) - psi_sum;
      const double e_log_1m = vbvarsel::digamma(d2) - psi_sum;
      log_p_sel += c * e_log_delta + (1.0 - c) * e_log_1m +
                   (h.d0 - 1.0) * (e_log_delta + e_log_1m) -
                   lbeta(h.d0, h.d0);
      log_q_sel += xlogx(c) + xlogx(1.0 - c) + (d1 - 1.0) * e_log_delta +
                   (d2 - 1.0) * e_log_1m - lbeta(d1, d2);
    }

    return log_lik + log_p_z + log_p_pi + log_p_phi + log_p_sel -
           t * (log_q_z + log_q_pi + log_q_phi + log_q_sel);
  }
};

// Random data plus a random (but valid) variational state for K = 2.
struct RandomInstance {
  vbvarsel::DataMatrix data;
  vbvarsel::VariationalState st;
  NaiveModel naive;
};

RandomInstance random_instance(int n, int j, int k, vbvarsel::Rng& rng) {
  Eigen::MatrixXd x(n, j);
  for (int i = 0; i < n; ++i) {
    for (int p = 0; p < j; ++p) x(i, p) = rng.normal(0.3 * p, 1.5);
  }
  RandomInstance inst;
  inst.data = vbvarsel::DataMatrix(x);

  vbvarsel::Hyperparameters h;
  h.k_max = k;
  h.alpha0 = 0.3;
  h.beta0 = 0.01;
  h.a0 = 2.0;
  h.b0_scale = 0.5;
  h.d0 = 1.0;
  const vbvarsel::Hyperparameters resolved = h.resolved(inst.data);

  vbvarsel::VariationalState st;
  st.r.resize(n, k);
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int q = 0; q < k; ++q) {
      st.r(i, q) = std::exp(rng.normal());
      total += st.r(i, q);
    }
    for (int q = 0; q < k; ++q) st.r(i, q) /= total;
  }
  st.c.resize(j);
  for (int p = 0; p < j; ++p) st.c[p] = rng.uniform(0.05, 0.95);
  st.alpha.resize(k);
  for (int q = 0; q < k; ++q) st.alpha[q] = rng.uniform(0.2, 3.0);
  st.beta.resize(k, j);
  st.m.resize(k, j);
  st.a.resize(k, j);
  st.b.resize(k, j);
  for (int q = 0; q < k; ++q) {
    for (int p = 0; p < j; ++p) {
      st.beta(q, p) = rng.uniform(0.5, 2.0);
      st.m(q, p) = rng.normal();
      st.a(q, p) = rng.uniform(1.0, 4.0);
      st.b(q, p) = rng.uniform(0.5, 3.0);
    }
  }
  st.null = vbvarsel::fit_null_params(inst.data);
  inst.st = std::move(st);

  inst.naive.x = inst.data.values;
  inst.naive.mu0 = inst.st.null.mu0;
  inst.naive.tau0 = inst.st.null.tau0;
  inst.naive.h = resolved;
  return inst;
}

void compare_matrices(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want,
                      double tol = 1e-10) {
  REQUIRE(got.rows() == want.rows());
  REQUIRE(got.cols() == want.cols());
  for (Eigen::Index i = 0; i < got.rows(); ++i) {
    for (Eigen::Index q = 0; q < got.cols(); ++q) {
      CAPTURE(i, q);
      check_close(got(i, q), want(i, q), tol);
    }
  }
}

vbvarsel::SyntheticDataset easy_dataset(std::uint64_t seed) {
  vbvarsel::SyntheticSpec spec;
  spec.n = 100;
  spec.j_total = 20;
  spec.frac_relevant = 0.5;
  spec.seed = seed;
  return vbvarsel::generate_base(spec);
}

}  // namespace

TEST_CASE("one update cycle matches the plain-loop reference") {
  vbvarsel::Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const double t = trial % 2 == 0 ? 1.0 : 2.0;
    RandomInstance inst = random_instance(10, 4, 2, rng);
    const vbvarsel::Hyperparameters& h = inst.naive.h;
    const vbvarsel::FitWorkspace ws(inst.data, inst.st.null);
    CAPTURE(trial, t);

    // Responsibilities from the same incoming state.
    const Eigen::MatrixXd r_ref = inst.naive.responsibilities(inst.st, t);
    const vbvarsel::FitStats stats =
        vbvarsel::update_responsibilities(inst.st, ws, t);
    compare_matrices(inst.st.r, r_ref);

    // Selection sees the refreshed responsibilities and the previous c.
    const Eigen::VectorXd c_ref = inst.naive.selection(inst.st, inst.st.r, t);
    vbvarsel::update_selection(inst.st, ws, stats, h, t);
    compare_matrices(inst.st.c, c_ref);

    const Eigen::VectorXd alpha_ref = inst.naive.weights(inst.st.r, t);
    vbvarsel::update_mixture_weights(inst.st, stats, h, t);
    compare_matrices(inst.st.alpha, alpha_ref);

    // Component parameters from the refreshed r and c; run the reference on
    // a copy of the same state.
    vbvarsel::VariationalState ref_state = inst.st;
    inst.naive.component_params(ref_state, t);
    vbvarsel::update_component_params(inst.st, ws, stats, h, t);
    compare_matrices(inst.st.beta, ref_state.beta);
    compare_matrices(inst.st.m, ref_state.m);
    compare_matrices(inst.st.a, ref_state.a);
    compare_matrices(inst.st.b, ref_state.b);

    check_close(vbvarsel::compute_elbo(inst.st, ws, h, t),
                inst.naive.elbo(inst.st, t), 1e-10);
  }
}

TEST_CASE("responsibilities normalize and conserve the observation count") {
  vbvarsel::Rng rng(32);
  RandomInstance inst = random_instance(50, 6, 4, rng);
  const vbvarsel::FitWorkspace ws(inst.data, inst.st.null);
  const vbvarsel::FitStats stats =
      vbvarsel::update_responsibilities(inst.st, ws, 1.0);
  for (Eigen::Index i = 0; i < inst.st.n(); ++i) {
    check_close(inst.st.r.row(i).sum(), 1.0, 1e-12);
    CHECK(inst.st.r.row(i).minCoeff() >= 0.0);
  }
  check_close(stats.n_k.sum(), 50.0, 1e-12);
  // The returned moments are exactly the moments of the committed state.
  const vbvarsel::FitStats again = vbvarsel::collect_stats(inst.st.r, ws);
  compare_matrices(stats.sum_x, again.sum_x, 1e-14);
}

TEST_CASE("Dirichlet masses total K alpha0 + N at unit temperature") {
  vbvarsel::Rng rng(33);
  RandomInstance inst = random_instance(40, 5, 3, rng);
  const vbvarsel::FitWorkspace ws(inst.data, inst.st.null);
  const vbvarsel::FitStats stats =
      vbvarsel::update_responsibilities(inst.st, ws, 1.0);
  vbvarsel::update_mixture_weights(inst.st, stats, inst.naive.h, 1.0);
  check_close(inst.st.alpha.sum(), 3.0 * inst.naive.h.alpha0 + 40.0, 1e-12);
}

TEST_CASE("a fully deselected covariate keeps its prior exactly") {
  vbvarsel::Rng rng(34);
  for (const double t : {1.0, 2.0}) {
    RandomInstance inst = random_instance(20, 5, 3, rng);
    const vbvarsel::Hyperparameters& h = inst.naive.h;
    const vbvarsel::FitWorkspace ws(inst.data, inst.st.null);
    inst.st.c[1] = 0.0;
    inst.st.c[3] = 0.0;
    const vbvarsel::FitStats stats = vbvarsel::collect_stats(inst.st.r, ws);
    vbvarsel::update_component_params(inst.st, ws, stats, h, t);
    for (const int p : {1, 3}) {
      for (Eigen::Index q = 0; q < inst.st.k(); ++q) {
        CHECK(inst.st.beta(q, p) == h.beta0 / t);
        CHECK(inst.st.m(q, p) == h.m0[p]);
        CHECK(inst.st.a(q, p) == (h.a0 + t - 1.0) / t);
        CHECK(inst.st.b(q, p) == h.b0_rate(p) / t);
      }
    }
  }
}

TEST_CASE("saturated selection weights keep every quantity finite") {
  vbvarsel::Rng rng(35);
  RandomInstance inst = random_instance(15, 4, 2, rng);
  const vbvarsel::Hyperparameters& h = inst.naive.h;
  const vbvarsel::FitWorkspace ws(inst.data, inst.st.null);
  inst.st.c << 0.0, 1.0, 0.0, 1.0;
  // One-hot responsibilities exercise the 0 log 0 = 0 entropy convention.
  inst.st.r.setZero();
  for (Eigen::Index i = 0; i < inst.st.n(); ++i) inst.st.r(i, i % 2) = 1.0;

  const vbvarsel::FitStats stats = vbvarsel::collect_stats(inst.st.r, ws);
  vbvarsel::update_mixture_weights(inst.st, stats, h, 1.0);
  vbvarsel::update_component_params(inst.st, ws, stats, h, 1.0);
  const double elbo = vbvarsel::compute_elbo(inst.st, ws, h, 1.0);
  CHECK(std::isfinite(elbo));
  vbvarsel::update_selection(inst.st, ws, stats, h, 1.0);
  for (Eigen::Index p = 0; p < 4; ++p) {
    CHECK(std::isfinite(inst.st.c[p]));
    CHECK(inst.st.c[p] >= 0.0);
    CHECK(inst.st.c[p] <= 1.0);
  }
}

TEST_CASE("hard assignments break ties toward the smallest index") {
  vbvarsel::VariationalState st;
  st.r.resize(2, 3);
  st.r << 0.2, 0.6, 0.2,
          0.4, 0.2, 0.4;
  const std::vector<int> labels = vbvarsel::extract_assignments(st);
  CHECK(labels == std::vector<int>{1, 0});

  st.c.resize(3);
  st.c << 0.49, 0.5, 0.51;
  const std::vector<bool> selected = vbvarsel::extract_selection(st);
  CHECK(selected == std::vector<bool>{false, true, true});
  const std::vector<bool> strict = vbvarsel::extract_selection(st, 0.505);
  CHECK(strict == std::vector<bool>{false, false, true});
}

TEST_CASE("the bound never falls at unit temperature") {
  const vbvarsel::SyntheticDataset ds = easy_dataset(41);
  const vbvarsel::Hyperparameters hyper;
  const vbvarsel::FitResult res = vbvarsel::fit(
      ds.data, hyper, vbvarsel::TemperatureSchedule::fixed(1.0), 1);
  CHECK(res.converged);
  CHECK_FALSE(res.elbo_decreased);
  REQUIRE(res.elbo_trace.size() >= 2);
  for (std::size_t i = 1; i < res.elbo_trace.size(); ++i) {
    const double prev = res.elbo_trace[i - 1];
    const double tol = 1e-8 * std::max(1.0, std::abs(prev));
    CAPTURE(i);
    CHECK(res.elbo_trace[i] - prev >= -tol);
  }
}

TEST_CASE("an annealed run settles to 1 and then climbs monotonically") {
  const vbvarsel::SyntheticDataset ds = easy_dataset(42);
  const vbvarsel::Hyperparameters hyper;
  const vbvarsel::FitResult res = vbvarsel::fit(
      ds.data, hyper, vbvarsel::TemperatureSchedule::geometric(4.0, 5), 1);
  CHECK_FALSE(res.elbo_decreased);
  REQUIRE(res.temperature_trace.size() == res.elbo_trace.size());
  CHECK(res.temperature_trace.front() == 4.0);
  CHECK(res.temperature_trace.back() == 1.0);
  for (std::size_t i = 1; i < res.elbo_trace.size(); ++i) {
    if (res.temperature_trace[i - 1] != 1.0) continue;
    const double prev = res.elbo_trace[i - 1];
    CHECK(res.elbo_trace[i] - prev >= -1e-8 * std::max(1.0, std::abs(prev)));
  }
}

TEST_CASE("a unit-temperature schedule is bit-identical to no schedule") {
  const vbvarsel::SyntheticDataset ds = easy_dataset(43);
  const vbvarsel::Hyperparameters hyper;
  const vbvarsel::FitResult plain = vbvarsel::fit(
      ds.data, hyper, vbvarsel::TemperatureSchedule::fixed(1.0), 2);
  const vbvarsel::FitResult annealed = vbvarsel::fit(
      ds.data, hyper, vbvarsel::TemperatureSchedule::geometric(1.0, 5), 2);
  CHECK(plain.labels == annealed.labels);
  CHECK(plain.iterations == annealed.iterations);
  CHECK(plain.converged == annealed.converged);
  REQUIRE(plain.elbo_trace.size() == annealed.elbo_trace.size());
  for (std::size_t i = 0; i < plain.elbo_trace.size(); ++i) {
    CHECK(plain.elbo_trace[i] == annealed.elbo_trace[i]);
  }
  CHECK((plain.c - annealed.c).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fits are reproducible from their seed") {
  const vbvarsel::SyntheticDataset ds = easy_dataset(44);
  const vbvarsel::Hyperparameters hyper;
  const auto schedule = vbvarsel::TemperatureSchedule::fixed(1.0);
  const vbvarsel::FitResult one = vbvarsel::fit(ds.data, hyper, schedule, 7);
  const vbvarsel::FitResult two = vbvarsel::fit(ds.data, hyper, schedule, 7);
  CHECK(one.labels == two.labels);
  CHECK(one.selected == two.selected);
  CHECK(one.refined == two.refined);
  CHECK((one.c - two.c).cwiseAbs().maxCoeff() == 0.0);
  CHECK(one.elbo_trace == two.elbo_trace);
}

TEST_CASE("the fit recovers planted clusters and covariates") {
  const vbvarsel::SyntheticDataset ds = easy_dataset(45);
  const vbvarsel::Hyperparameters hyper;
  const vbvarsel::FitResult res = vbvarsel::fit(
      ds.data, hyper, vbvarsel::TemperatureSchedule::fixed(1.0), 1);
  CHECK(res.converged);
  CHECK(res.effective_k == 3);
  CHECK(vbvarsel::adjusted_rand_index(res.labels, ds.labels) >= 0.95);
  const vbvarsel::SelectionMetrics sel =
      vbvarsel::selection_metrics(res.selected, ds.relevant);
  CHECK(sel.relevant_selected == 1.0);
  CHECK(sel.irrelevant_deselected >= 0.9);
  int total = 0;
  for (int size : res.cluster_sizes) total += size;
  CHECK(total == 100);
}

TEST_CASE("a permuted copy of a relevant covariate is dropped") {
  vbvarsel::SyntheticSpec spec;
  spec.n = 100;
  spec.j_total = 10;
  spec.frac_relevant = 0.5;
  spec.seed = 46;
  const vbvarsel::SyntheticDataset ds = vbvarsel::generate_base(spec);
  const vbvarsel::DataMatrix broken =
      vbvarsel::permute_covariates(ds.data, {0}, 5);
  const vbvarsel::Hyperparameters hyper;
  const vbvarsel::FitResult res = vbvarsel::fit(
      broken, hyper, vbvarsel::TemperatureSchedule::fixed(1.0), 1);
  CHECK(res.c[0] < 0.5);
  for (int p = 1; p < 5; ++p) {
    CAPTURE(p);
    CHECK(res.c[p] >= 0.5);
  }
}

TEST_CASE("relabeling the components leaves the bound unchanged") {
  const vbvarsel::SyntheticDataset ds = easy_dataset(47);
  vbvarsel::Hyperparameters hyper;
  const vbvarsel::FitResult res = vbvarsel::fit(
      ds.data, hyper, vbvarsel::TemperatureSchedule::fixed(1.0), 1);

  const vbvarsel::DataMatrix working = vbvarsel::standardize(ds.data);
  const vbvarsel::Hyperparameters h = hyper.resolved(working);
  const vbvarsel::FitWorkspace ws(working, res.state.null);
  const double before = vbvarsel::compute_elbo(res.state, ws, h, 1.0);

  vbvarsel::VariationalState swapped = res.state;
  const Eigen::Index k = swapped.k();
  for (Eigen::Index q = 0; q < k; ++q) {
    const Eigen::Index from = (q + 1) % k;  // cyclic component relabeling
    swapped.r.col(q) = res.state.r.col(from);
    swapped.alpha[q] = res.state.alpha[from];
    swapped.beta.row(q) = res.state.beta.row(from);
    swapped.m.row(q) = res.state.m.row(from);
    swapped.a.row(q) = res.state.a.row(from);
    swapped.b.row(q) = res.state.b.row(from);
  }
  const double after = vbvarsel::compute_elbo(swapped, ws, h, 1.0);
  check_close(after, before, 1e-9);
}

TEST_CASE("permuting the covariates only permutes the verdict") {
  const vbvarsel::SyntheticDataset ds = easy_dataset(48);
  const Eigen::Index j = ds.data.j();

  // Reverse the column order.
  Eigen::MatrixXd reversed(ds.data.n(), j);
  for (Eigen::Index p = 0; p < j; ++p) {
    reversed.col(p) = ds.data.values.col(j - 1 - p);
  }
  const vbvarsel::DataMatrix mirrored(reversed);

  const vbvarsel::Hyperparameters hyper;
  const auto schedule = vbvarsel::TemperatureSchedule::fixed(1.0);
  const vbvarsel::FitResult res = vbvarsel::fit(ds.data, hyper, schedule, 3);
  const vbvarsel::FitResult mirrored_res =
      vbvarsel::fit(mirrored, hyper, schedule, 3);

  CHECK(vbvarsel::adjusted_rand_index(res.labels, mirrored_res.labels) == 1.0);
  for (Eigen::Index p = 0; p < j; ++p) {
    CAPTURE(p);
    check_close(mirrored_res.c[j - 1 - p], res.c[p], 1e-6);
  }
  check_close(mirrored_res.elbo_trace.back(), res.elbo_trace.back(), 1e-8);
}
