// vbvarsel/synthetic.hpp

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

#ifndef VBVARSEL_SYNTHETIC_HPP_
#define VBVARSEL_SYNTHETIC_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vbvarsel/data_matrix.hpp"
#include "vbvarsel/errors.hpp"
#include "vbvarsel/rng.hpp"

namespace vbvarsel {

// Benchmark generator: a three-way (by default) Gaussian mixture that only
// lives in the first block of covariates, padded with pure noise columns.
// Cluster ell puts its relevant covariates at N(centres[ell], 1); irrelevant
// covariates are N(0, 1) regardless of the cluster.

enum class CorrelationKind {
  kNone,
  kFixedAll,                // one rho shared by every cluster and covariate
  kPerCluster,              // rho drawn per cluster, shared by its covariates
  kPerClusterAndCovariate,  // rho drawn per cluster and covariate
};

inline std::string to_string(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::kNone: return "none";
    case CorrelationKind::kFixedAll: return "fixed_all";
    case CorrelationKind::kPerCluster: return "per_cluster";
    case CorrelationKind::kPerClusterAndCovariate:
      return "per_cluster_and_covariate";
  }
  return "?";
}

struct CorrelationSpec {
  CorrelationKind kind = CorrelationKind::kNone;
  double rho = 0.0;       // kFixedAll
  double rho_min = 0.0;   // sampled variants draw from [rho_min, rho_max]
  double rho_max = 0.5;
};

enum class Misspecification {
  kNone,
  kStudentTNoise,       // additive per-row Student t noise, output left raw
  kStudentTComponents,  // relevant block multivariate t, output standardized
};

inline std::string to_string(Misspecification m) {
  switch (m) {
    case Misspecification::kNone: return "none";
    case Misspecification::kStudentTNoise: return "student_t_noise";
    case Misspecification::kStudentTComponents: return "student_t_components";
  }
  return "?";
}

struct SyntheticSpec {
  int n = 100;
  int j_total = 200;
  double frac_relevant = 0.1;
  std::vector<double> weights = {0.5, 0.3, 0.2};
  std::vector<double> centres = {0.0, 2.0, -2.0};
  CorrelationSpec correlation;
  double noise_sd = 0.0;  // extra iid Gaussian noise on every entry
  Misspecification misspecification = Misspecification::kNone;
  std::vector<double> t_noise_dof = {2.0, 3.0, 3.0};  // per cluster
  double t_component_dof = 3.0;
  std::uint64_t seed = 0;

  int n_relevant() const {
    return static_cast<int>(std::lround(frac_relevant * j_total));
  }

  void validate() const {
    if (n < 2) throw InvalidSpec("n must be at least 2");
    if (j_total < 1) throw InvalidSpec("j_total must be at least 1");
    if (!(frac_relevant >= 0.0) || frac_relevant > 1.0) {
      throw InvalidSpec("frac_relevant must lie in [0, 1]");
    }
    if (weights.empty() || weights.size() != centres.size()) {
      throw InvalidSpec("weights and centres must have equal, nonzero length");
    }
    double total = 0.0;
    for (double w : weights) {
      if (!(w > 0.0)) throw InvalidSpec("cluster weights must be positive");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-8) {
      throw InvalidSpec("cluster weights must sum to 1, got " +
                        std::to_string(total));
    }
    const CorrelationSpec& corr = correlation;
    if (corr.kind == CorrelationKind::kFixedAll) {
      if (!(corr.rho >= 0.0) || corr.rho > 0.5) {
        throw InvalidSpec("correlation rho must lie in [0, 0.5]");
      }
    } else if (corr.kind != CorrelationKind::kNone) {
      if (!(corr.rho_min >= 0.0) || corr.rho_max > 0.5 ||
          corr.rho_min > corr.rho_max) {
        throw InvalidSpec("correlation range must satisfy 0 <= min <= max <= 0.5");
      }
    }
    if (!(noise_sd >= 0.0)) throw InvalidSpec("noise_sd must be nonnegative");
    if (misspecification == Misspecification::kStudentTNoise) {
      if (t_noise_dof.size() != weights.size()) {
        throw InvalidSpec("need one t_noise_dof per cluster");
      }
      for (double dof : t_noise_dof) {
        if (!(dof > 1.0)) throw InvalidSpec("t_noise_dof must exceed 1");
      }
    }
    if (misspecification == Misspecification::kStudentTComponents &&
        !(t_component_dof > 1.0)) {
      throw InvalidSpec("t_component_dof must exceed 1");
    }
    if (misspecification != Misspecification::kNone &&
        corr.kind != CorrelationKind::kNone) {
      throw InvalidSpec("misspecified scenarios do not take correlation");
    }
  }
};

struct SyntheticDataset {
  DataMatrix data;
  std::vector<int> labels;     // generating cluster per observation
  std::vector<bool> relevant;  // true for the informative covariate block
};

namespace detail {

inline std::vector<std::string> default_names(int j) {
  std::vector<std::string> names(static_cast<std::size_t>(j));
  for (int p = 0; p < j; ++p) {
    names[static_cast<std::size_t>(p)] = "v" + std::to_string(p);
  }
  return names;
}

inline std::vector<int> draw_labels(const SyntheticSpec& spec, Rng& rng) {
  std::vector<int> labels(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    labels[static_cast<std::size_t>(i)] = rng.categorical(spec.weights);
  }
  return labels;
}

// Equicorrelation matrix (1 - rho) I + rho 1 1'; positive definite for
// rho in [0, 0.5] at any dimension.
inline Eigen::MatrixXd equicorrelation(int dim, double rho) {
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(dim, dim, rho);
  sigma.diagonal().setConstant(1.0);
  return sigma;
}

// One-factor correlation D + lambda lambda' with lambda_j = sqrt(rho_j) and
// D_jj = 1 - rho_j: unit diagonal, off-diagonal sqrt(rho_i rho_j), positive
// definite whenever every rho_j < 1.
inline Eigen::MatrixXd one_factor_correlation(
    const std::vector<double>& rho) {
  const int dim = static_cast<int>(rho.size());
  Eigen::VectorXd lambda(dim);
  for (int p = 0; p < dim; ++p) lambda[p] = std::sqrt(rho[static_cast<std::size_t>(p)]);
  Eigen::MatrixXd sigma = lambda * lambda.transpose();
  for (int p = 0; p < dim; ++p) {
    sigma(p, p) = 1.0;
  }
  return sigma;
}

inline SyntheticDataset assemble(const SyntheticSpec& spec,
                                 Eigen::MatrixXd x, std::vector<int> labels) {
  SyntheticDataset ds;
  ds.data = DataMatrix(std::move(x), default_names(spec.j_total));
  ds.labels = std::move(labels);
  ds.relevant.assign(static_cast<std::size_t>(spec.j_total), false);
  for (int p = 0; p < spec.n_relevant(); ++p) {
    ds.relevant[static_cast<std::size_t>(p)] = true;
  }
  return ds;
}

}  // namespace detail

// Independent-covariate mixture: relevant block N(centre_label, 1) per entry,
// irrelevant block N(0, 1).
inline SyntheticDataset generate_base(const SyntheticSpec& spec) {
  spec.validate();
  if (spec.correlation.kind != CorrelationKind::kNone ||
      spec.misspecification != Misspecification::kNone) {
    throw InvalidSpec("generate_base needs a plain spec");
  }
  Rng rng(spec.seed);
  std::vector<int> labels = detail::draw_labels(spec, rng);
  const int r = spec.n_relevant();
  Eigen::MatrixXd x(spec.n, spec.j_total);
  for (int i = 0; i < spec.n; ++i) {
    const double centre = spec.centres[static_cast<std::size_t>(
        labels[static_cast<std::size_t>(i)])];
    for (int p = 0; p < spec.j_total; ++p) {
      x(i, p) = p < r ? centre + rng.normal() : rng.normal();
    }
  }
  return detail::assemble(spec, std::move(x), std::move(labels));
}

// Correlated variant: the relevant block of each observation is drawn from a
// multivariate normal whose correlation matrix depends on the cluster, built
// either from one shared rho, one rho per cluster, or one rho per cluster and
// covariate.  Sampled structures that fail the Cholesky factorization are
// redrawn a bounded number of times.
inline SyntheticDataset generate_correlated(const SyntheticSpec& spec) {
  spec.validate();
  if (spec.correlation.kind == CorrelationKind::kNone) {
    throw InvalidSpec("generate_correlated needs a correlation structure");
  }
  if (spec.misspecification != Misspecification::kNone) {
    throw InvalidSpec("generate_correlated takes no misspecification");
  }
  const int r = spec.n_relevant();
  if (r < 1) {
    throw InvalidSpec("correlation requires at least one relevant covariate");
  }

  Rng rng(spec.seed);
  std::vector<int> labels = detail::draw_labels(spec, rng);

  const int n_clusters = static_cast<int>(spec.weights.size());
  std::vector<Eigen::MatrixXd> chol(static_cast<std::size_t>(n_clusters));
  for (int ell = 0; ell < n_clusters; ++ell) {
    constexpr int kMaxDraws = 10;
    bool ok = false;
    for (int attempt = 0; attempt < kMaxDraws && !ok; ++attempt) {
      Eigen::MatrixXd sigma;
      switch (spec.correlation.kind) {
        case CorrelationKind::kFixedAll:
          sigma = detail::equicorrelation(r, spec.correlation.rho);
          break;
        case CorrelationKind::kPerCluster:
          sigma = detail::equicorrelation(
              r, rng.uniform(spec.correlation.rho_min, spec.correlation.rho_max));
          break;
        case CorrelationKind::kPerClusterAndCovariate: {
          std::vector<double> rho(static_cast<std::size_t>(r));
          for (int p = 0; p < r; ++p) {
            rho[static_cast<std::size_t>(p)] =
                rng.uniform(spec.correlation.rho_min, spec.correlation.rho_max);
          }
          sigma = detail::one_factor_correlation(rho);
          break;
        }
        case CorrelationKind::kNone:
          break;
      }
      Eigen::LLT<Eigen::MatrixXd> llt(sigma);
      if (llt.info() == Eigen::Success) {
        chol[static_cast<std::size_t>(ell)] = llt.matrixL();
        ok = true;
      } else if (spec.correlation.kind == CorrelationKind::kFixedAll) {
        break;  // a fixed structure cannot be redrawn
      }
    }
    if (!ok) {
      throw NotPositiveDefinite("cluster " + std::to_string(ell) +
                                " correlation matrix is not positive definite");
    }
  }

  Eigen::MatrixXd x(spec.n, spec.j_total);
  Eigen::VectorXd z(r);
  for (int i = 0; i < spec.n; ++i) {
    const int ell = labels[static_cast<std::size_t>(i)];
    const double centre = spec.centres[static_cast<std::size_t>(ell)];
    for (int p = 0; p < r; ++p) z[p] = rng.normal();
    x.row(i).head(r) =
        (chol[static_cast<std::size_t>(ell)] * z).array() + centre;
    for (int p = r; p < spec.j_total; ++p) x(i, p) = rng.normal();
  }
  return detail::assemble(spec, std::move(x), std::move(labels));
}

// Copy with iid N(0, sd^2) added to every entry; sd = 0 returns the input
// unchanged.
inline SyntheticDataset add_gaussian_noise(const SyntheticDataset& ds,
                                           double sd, std::uint64_t seed) {
  if (!(sd >= 0.0)) throw InvalidSpec("noise sd must be nonnegative");
  SyntheticDataset out = ds;
  if (sd == 0.0) return out;
  Rng rng(seed);
  for (Eigen::Index i = 0; i < out.data.n(); ++i) {
    for (Eigen::Index p = 0; p < out.data.j(); ++p) {
      out.data.values(i, p) += sd * rng.normal();
    }
  }
  return out;
}

// Heavy-tailed departures from the model.  kStudentTNoise adds Student t
// noise (dof chosen by the observation's cluster) to every entry of the base
// draw and returns the result raw.  kStudentTComponents replaces each
// observation's relevant block with a spherical multivariate t around the
// cluster centre (one chi-square mixing variable per observation) and
// standardizes the finished matrix.
inline SyntheticDataset generate_misspecified(const SyntheticSpec& spec) {
  spec.validate();
  if (spec.misspecification == Misspecification::kNone) {
    throw InvalidSpec("generate_misspecified needs a misspecification");
  }
  const int r = spec.n_relevant();
  Rng rng(spec.seed);
  std::vector<int> labels = detail::draw_labels(spec, rng);
  Eigen::MatrixXd x(spec.n, spec.j_total);

  if (spec.misspecification == Misspecification::kStudentTNoise) {
    for (int i = 0; i < spec.n; ++i) {
      const double centre = spec.centres[static_cast<std::size_t>(
          labels[static_cast<std::size_t>(i)])];
      for (int p = 0; p < spec.j_total; ++p) {
        x(i, p) = p < r ? centre + rng.normal() : rng.normal();
      }
    }
    for (int i = 0; i < spec.n; ++i) {
      const double dof = spec.t_noise_dof[static_cast<std::size_t>(
          labels[static_cast<std::size_t>(i)])];
      for (int p = 0; p < spec.j_total; ++p) {
        x(i, p) += rng.student_t(dof);
      }
    }
    return detail::assemble(spec, std::move(x), std::move(labels));
  }

  const double dof = spec.t_component_dof;
  for (int i = 0; i < spec.n; ++i) {
    const double centre = spec.centres[static_cast<std::size_t>(
        labels[static_cast<std::size_t>(i)])];
    const double scale = std::sqrt(dof / rng.chi_squared(dof));
    for (int p = 0; p < spec.j_total; ++p) {
      x(i, p) = p < r ? centre + scale * rng.normal() : rng.normal();
    }
  }
  SyntheticDataset ds = detail::assemble(spec, std::move(x), std::move(labels));
  ds.data = standardize(ds.data);
  return ds;
}

// Spec-driven entry point: routes to the matching generator and then layers
// optional iid Gaussian noise on top (drawn from the continuation of the same
// seeded stream via a derived seed).
inline SyntheticDataset generate(const SyntheticSpec& spec) {
  spec.validate();
  SyntheticDataset ds;
  if (spec.misspecification != Misspecification::kNone) {
    ds = generate_misspecified(spec);
  } else if (spec.correlation.kind != CorrelationKind::kNone) {
    ds = generate_correlated(spec);
  } else {
    ds = generate_base(spec);
  }
  if (spec.noise_sd > 0.0) {
    ds = add_gaussian_noise(ds, spec.noise_sd, spec.seed + 0x9e3779b97f4a7c15ULL);
  }
  return ds;
}

// Independently shuffle the entries of each listed column, breaking its
// association with the cluster labels while preserving its marginal exactly.
inline DataMatrix permute_covariates(const DataMatrix& data,
                                     const std::vector<int>& columns,
                                     std::uint64_t seed) {
  DataMatrix out = data;
  Rng rng(seed);
  std::vector<double> column(static_cast<std::size_t>(data.n()));
  for (int p : columns) {
    if (p < 0 || p >= data.j()) {
      throw InvalidSpec("permute_covariates: column " + std::to_string(p) +
                        " out of range");
    }
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      column[static_cast<std::size_t>(i)] = out.values(i, p);
    }
    rng.shuffle(column);
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      out.values(i, p) = column[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

}  // namespace vbvarsel

#endif  // VBVARSEL_SYNTHETIC_HPP_
