// Effective sample size via the initial monotone positive sequence
// estimator (Geyer): autocovariances are paired as Gamma_m = gamma_{2m} +
// gamma_{2m+1}, summed while positive with the monotone adjustment, giving
//   ESS = N * gamma_0 / (-gamma_0 + 2 * sum_m Gamma_m).
#pragma once

#include <Eigen/Dense>
#include <span>
#include <stdexcept>
#include <vector>

#include "bhs/linear.hpp"

namespace bhs {

struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double effective_sample_size(std::span<const double> draws) {
  const std::size_t n = draws.size();
  if (n < 100) throw std::invalid_argument("need at least 100 draws for ESS");

  double mean = 0.0;
  for (double x : draws) mean += x;
  mean /= static_cast<double>(n);

  auto gamma_at = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) {
      s += (draws[i] - mean) * (draws[i + lag] - mean);
    }
    return s / static_cast<double>(n);
  };

  const double gamma0 = gamma_at(0);
  if (!(gamma0 > 0.0)) throw DegenerateInputError("constant sequence has no ESS");

  double var_sum = -gamma0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double pair = gamma_at(2 * m) + gamma_at(2 * m + 1);
    if (pair <= 0.0) break;
    if (pair > prev_pair) pair = prev_pair;  // monotone adjustment
    prev_pair = pair;
    var_sum += 2.0 * pair;
  }
  if (!(var_sum > 0.0)) var_sum = gamma0;

  return static_cast<double>(n) * gamma0 / var_sum;
}

struct EssReport {
  Eigen::VectorXd per_coefficient_ess;
  Eigen::VectorXd ess_proportion;  // ESS / retained length at this thin level
  int thin_level = 1;
};

inline EssReport ess_report_for(const Eigen::MatrixXd& draws, int thin_level) {
  if (thin_level < 1) throw std::invalid_argument("thin level must be >= 1");
  const Eigen::Index n_sub = (draws.rows() + thin_level - 1) / thin_level;
  if (n_sub < 100) {
    throw std::invalid_argument("fewer than 100 draws retained at this thin level");
  }
  EssReport rep;
  rep.thin_level = thin_level;
  rep.per_coefficient_ess.resize(draws.cols());
  rep.ess_proportion.resize(draws.cols());
  std::vector<double> col(static_cast<std::size_t>(n_sub));
  for (Eigen::Index j = 0; j < draws.cols(); ++j) {
    for (Eigen::Index k = 0; k < n_sub; ++k) {
      col[static_cast<std::size_t>(k)] = draws(k * thin_level, j);
    }
    double ess = effective_sample_size(col);
    rep.per_coefficient_ess(j) = ess;
    rep.ess_proportion(j) = ess / static_cast<double>(n_sub);
  }
  return rep;
}

inline std::vector<EssReport> ess_vs_thinning(const ChainOutput& chain,
                                              const std::vector<int>& thin_levels) {
  std::vector<EssReport> out;
  out.reserve(thin_levels.size());
  for (int t : thin_levels) out.push_back(ess_report_for(chain.beta_draws, t));
  return out;
}

}  // namespace bhs
