// Chib's marginal-likelihood estimator from Gibbs output:
//
//   log m(y) = log p(y | theta*) + log p(theta*) - log p_hat(theta* | y),
//
// with the posterior ordinate decomposed over the sweep blocks
// (beta, sigma^2, lambda^2, tau^2, {nu, xi}) and each conditional ordinate
// estimated by the reduced-run scheme: the beta ordinate averages over the
// main run, then one reduced run per conditioning level with the earlier
// blocks frozen at theta*. The {nu, xi} ordinate is available in closed
// form once lambda^2 and tau^2 are fixed.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "bhs/distributions.hpp"
#include "bhs/gauss_sampler.hpp"
#include "bhs/linear.hpp"

namespace bhs {

struct MarginalLikelihoodEstimate {
  double log_marginal = 0.0;
  double log_likelihood_ordinate = 0.0;
  double log_prior_ordinate = 0.0;
  double log_posterior_ordinate = 0.0;  // sum of the five block values below
  double log_post_beta = 0.0;
  double log_post_sigma2 = 0.0;
  double log_post_lambda2 = 0.0;
  double log_post_tau2 = 0.0;
  double log_post_aux = 0.0;
  double mc_standard_error = 0.0;  // independence-approximate, delta method
  int n_reduced_runs = 0;
};

namespace detail {

struct LogMean {
  std::vector<double> terms;
  void add(double log_term) { terms.push_back(log_term); }
  double value() const {
    double mx = -std::numeric_limits<double>::infinity();
    for (double t : terms) mx = std::max(mx, t);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - mx);
    return mx + std::log(s / static_cast<double>(terms.size()));
  }
  // squared MC standard error of the log mean (delta method, iid approx)
  double se2() const {
    double lm = value();
    if (!std::isfinite(lm)) return 0.0;
    double s = 0.0;
    for (double t : terms) {
      double r = std::exp(t - lm) - 1.0;
      s += r * r;
    }
    double g = static_cast<double>(terms.size());
    return s / (g * (g - 1.0));
  }
};

inline GaussCondSpec beta_cond_spec(const HsState& state,
                                    const RegressionData& data,
                                    const LinearWorkspace& ws) {
  GaussCondSpec spec;
  spec.design = data.X;
  spec.weighted_response = ws.xty;
  spec.prior_precision_diag = shrinkage_precision(state);
  spec.noise_variance = state.sigma2;
  return spec;
}

inline InvGammaParams sigma2_cond_params(const HsState& state,
                                         const RegressionData& data) {
  double rss = (data.y - data.X * state.beta).squaredNorm();
  double prior_quad = state.beta.cwiseProduct(
      shrinkage_precision(state).cwiseProduct(state.beta)).sum();
  double n = static_cast<double>(data.n());
  double p = static_cast<double>(data.p());
  return {0.5 * (n + p), std::max(0.5 * rss + 0.5 * prior_quad, kScaleFloor)};
}

inline double lambda2_cond_log_pdf(const HsState& state,
                                   const Eigen::VectorXd& lambda2_star) {
  double denom = 2.0 * clamp_scale(state.tau2) * clamp_scale(state.sigma2);
  double lp = 0.0;
  for (Eigen::Index j = 0; j < lambda2_star.size(); ++j) {
    double scale = 1.0 / clamp_scale(state.nu(j)) +
                   state.beta(j) * state.beta(j) / denom;
    lp += inv_gamma_log_pdf(lambda2_star(j), {1.0, std::max(scale, kScaleFloor)});
  }
  return lp;
}

inline double tau2_cond_log_pdf(const HsState& state, double tau2_star) {
  double p = static_cast<double>(state.lambda2.size());
  double s = 0.0;
  for (Eigen::Index j = 0; j < state.lambda2.size(); ++j) {
    s += state.beta(j) * state.beta(j) / clamp_scale(state.lambda2(j));
  }
  double scale = 1.0 / clamp_scale(state.xi) + s / (2.0 * clamp_scale(state.sigma2));
  return inv_gamma_log_pdf(tau2_star, {0.5 * (p + 1.0), std::max(scale, kScaleFloor)});
}

inline void require_finite(double v, const std::string& block) {
  if (!std::isfinite(v)) {
    throw NumericalError("non-finite Chib ordinate in block " + block);
  }
}

}  // namespace detail

// Posterior means from a pilot run; the default ordinate point.
inline HsState default_ordinate(const RegressionData& data, SamplerConfig cfg) {
  cfg.store_lambda2 = true;
  RandomStream rng(detail::mix64(cfg.seed ^ 0x5bd1e995u));
  HsState state = HsState::initial(data.p());
  LinearWorkspace ws(data);
  HsState acc = state;
  acc.beta.setZero();
  acc.sigma2 = 0.0;
  acc.lambda2.setZero();
  acc.tau2 = 0.0;
  acc.nu.setZero();
  acc.xi = 0.0;
  for (int it = 0; it < cfg.n_burn; ++it) sweep(state, data, cfg, ws, rng);
  for (int k = 0; k < cfg.n_keep; ++k) {
    sweep(state, data, cfg, ws, rng);
    acc.beta += state.beta;
    acc.sigma2 += state.sigma2;
    acc.lambda2 += state.lambda2;
    acc.tau2 += state.tau2;
    acc.nu += state.nu;
    acc.xi += state.xi;
  }
  double g = static_cast<double>(cfg.n_keep);
  acc.beta /= g;
  acc.sigma2 /= g;
  acc.lambda2 /= g;
  acc.tau2 /= g;
  acc.nu /= g;
  acc.xi /= g;
  return acc;
}

inline MarginalLikelihoodEstimate chib_marginal_likelihood(
    const RegressionData& data, const SamplerConfig& cfg,
    const HsState& ordinate) {
  validate(cfg);
  if (cfg.prior_variant != PriorVariant::horseshoe ||
      cfg.sigma_prior != SigmaPrior::jeffreys) {
    throw std::invalid_argument(
        "Chib estimator implemented for the plain horseshoe with the default "
        "sigma prior");
  }
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  LinearWorkspace ws(data);
  RandomStream root(cfg.seed);

  auto run_sweeps = [&](HsState state, RandomStream rng, auto&& frozen_sweep,
                        detail::LogMean& acc, auto&& ordinate_term) {
    for (int it = 0; it < cfg.n_burn; ++it) frozen_sweep(state, rng);
    for (int k = 0; k < cfg.n_keep; ++k) {
      frozen_sweep(state, rng);
      acc.add(ordinate_term(state));
    }
  };

  // --- main run: beta ordinate -------------------------------------------
  detail::LogMean post_beta;
  {
    HsState state = HsState::initial(p);
    RandomStream rng = root.split(1);
    auto full_sweep = [&](HsState& s, RandomStream& r) { sweep(s, data, cfg, ws, r); };
    run_sweeps(state, rng, full_sweep, post_beta, [&](const HsState& s) {
      return gauss_log_density(detail::beta_cond_spec(s, data, ws), ordinate.beta);
    });
  }

  // --- reduced run 1: beta frozen, sigma^2 ordinate ----------------------
  detail::LogMean post_sigma2;
  {
    HsState state = HsState::initial(p);
    state.beta = ordinate.beta;
    RandomStream rng = root.split(2);
    auto red = [&](HsState& s, RandomStream& r) {
      s.sigma2 = update_sigma2(s, data, r, cfg.sigma_prior);
      s.lambda2 = update_lambda2(s, r);
      s.tau2 = update_tau2(s, r);
      AuxDraw aux = update_aux(s, r, cfg.prior_variant, cfg.hsplus_convention);
      s.nu = aux.nu;
      s.xi = aux.xi;
    };
    run_sweeps(state, rng, red, post_sigma2, [&](const HsState& s) {
      return inv_gamma_log_pdf(ordinate.sigma2, detail::sigma2_cond_params(s, data));
    });
  }

  // --- reduced run 2: beta, sigma^2 frozen, lambda^2 ordinate ------------
  detail::LogMean post_lambda2;
  {
    HsState state = HsState::initial(p);
    state.beta = ordinate.beta;
    state.sigma2 = ordinate.sigma2;
    RandomStream rng = root.split(3);
    auto red = [&](HsState& s, RandomStream& r) {
      s.lambda2 = update_lambda2(s, r);
      s.tau2 = update_tau2(s, r);
      AuxDraw aux = update_aux(s, r, cfg.prior_variant, cfg.hsplus_convention);
      s.nu = aux.nu;
      s.xi = aux.xi;
    };
    run_sweeps(state, rng, red, post_lambda2, [&](const HsState& s) {
      return detail::lambda2_cond_log_pdf(s, ordinate.lambda2);
    });
  }

  // --- reduced run 3: beta, sigma^2, lambda^2 frozen, tau^2 ordinate -----
  detail::LogMean post_tau2;
  {
    HsState state = HsState::initial(p);
    state.beta = ordinate.beta;
    state.sigma2 = ordinate.sigma2;
    state.lambda2 = ordinate.lambda2;
    RandomStream rng = root.split(4);
    auto red = [&](HsState& s, RandomStream& r) {
      s.tau2 = update_tau2(s, r);
      AuxDraw aux = update_aux(s, r, cfg.prior_variant, cfg.hsplus_convention);
      s.nu = aux.nu;
      s.xi = aux.xi;
    };
    run_sweeps(state, rng, red, post_tau2, [&](const HsState& s) {
      return detail::tau2_cond_log_pdf(s, ordinate.tau2);
    });
  }

  MarginalLikelihoodEstimate est;
  est.n_reduced_runs = 3;

  // likelihood ordinate
  double rss = (data.y - data.X * ordinate.beta).squaredNorm();
  constexpr double kLog2Pi = 1.8378770664093454836;
  est.log_likelihood_ordinate =
      -0.5 * n * (kLog2Pi + std::log(ordinate.sigma2)) - 0.5 * rss / ordinate.sigma2;

  // prior ordinate (Jeffreys sigma^2 prior enters unnormalized as 1/sigma^2;
  // the quadrature oracle uses the same measure)
  double lp = -std::log(ordinate.sigma2);
  for (Eigen::Index j = 0; j < p; ++j) {
    double v = ordinate.lambda2(j) * ordinate.tau2 * ordinate.sigma2;
    lp += -0.5 * (kLog2Pi + std::log(v)) -
          0.5 * ordinate.beta(j) * ordinate.beta(j) / v;
    lp += inv_gamma_log_pdf(ordinate.lambda2(j), {0.5, 1.0 / ordinate.nu(j)});
    lp += inv_gamma_log_pdf(ordinate.nu(j), {0.5, 1.0});
  }
  lp += inv_gamma_log_pdf(ordinate.tau2, {0.5, 1.0 / ordinate.xi});
  lp += inv_gamma_log_pdf(ordinate.xi, {0.5, 1.0});
  est.log_prior_ordinate = lp;

  est.log_post_beta = post_beta.value();
  est.log_post_sigma2 = post_sigma2.value();
  est.log_post_lambda2 = post_lambda2.value();
  est.log_post_tau2 = post_tau2.value();
  // nu, xi ordinate: exact given lambda^2*, tau^2*
  double aux_lp = inv_gamma_log_pdf(ordinate.xi, {1.0, 1.0 + 1.0 / ordinate.tau2});
  for (Eigen::Index j = 0; j < p; ++j) {
    aux_lp += inv_gamma_log_pdf(ordinate.nu(j), {1.0, 1.0 + 1.0 / ordinate.lambda2(j)});
  }
  est.log_post_aux = aux_lp;

  detail::require_finite(est.log_post_beta, "beta");
  detail::require_finite(est.log_post_sigma2, "sigma2");
  detail::require_finite(est.log_post_lambda2, "lambda2");
  detail::require_finite(est.log_post_tau2, "tau2");
  detail::require_finite(est.log_post_aux, "nu/xi");
  detail::require_finite(est.log_likelihood_ordinate, "likelihood");
  detail::require_finite(est.log_prior_ordinate, "prior");

  est.log_posterior_ordinate = est.log_post_beta + est.log_post_sigma2 +
                               est.log_post_lambda2 + est.log_post_tau2 +
                               est.log_post_aux;
  est.log_marginal = est.log_likelihood_ordinate + est.log_prior_ordinate -
                     est.log_posterior_ordinate;
  est.mc_standard_error =
      std::sqrt(post_beta.se2() + post_sigma2.se2() + post_lambda2.se2() +
                post_tau2.se2());
  return est;
}

inline MarginalLikelihoodEstimate chib_marginal_likelihood(
    const RegressionData& data, const SamplerConfig& cfg) {
  return chib_marginal_likelihood(data, cfg, default_ordinate(data, cfg));
}

}  // namespace bhs
