// Polya-gamma augmented horseshoe samplers for logistic and
// negative-binomial regression. Conditional on the latent omega_i the
// likelihood is Gaussian in beta,
//
//   beta | . ~ N_p(A^{-1} X' Omega z, A^{-1}),  A = X' Omega X + Lambda_*^{-1},
//
// with Omega z = kappa, kappa_i = y_i - 1/2 (logistic) or (y_i - h)/2
// (negative binomial). The hyperparameter conditionals are the linear-model
// ones with sigma^2 = 1. The leading design column is an explicit intercept
// and is left unshrunk (prior precision 1e-12).
#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "bhs/distributions.hpp"
#include "bhs/gauss_sampler.hpp"
#include "bhs/linear.hpp"
#include "bhs/rng.hpp"

namespace bhs {

enum class GlmFamily { logistic, negbin };

inline constexpr double kInterceptPrecision = 1e-12;

struct GlmData {
  Eigen::MatrixXd X;  // n x p, first column all ones (intercept)
  Eigen::VectorXd y;  // {0,1} for logistic, counts for negbin
  double dispersion_h = 1.0;  // negbin only, fixed

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

inline void validate(const GlmData& data, GlmFamily family) {
  if (data.X.rows() != data.y.size()) throw std::invalid_argument("X/y row mismatch");
  if (data.X.cols() < 1 || !(data.X.col(0).array() == 1.0).all()) {
    throw std::invalid_argument("first column of X must be an all-ones intercept");
  }
  for (Eigen::Index i = 0; i < data.y.size(); ++i) {
    double v = data.y(i);
    if (family == GlmFamily::logistic) {
      if (v != 0.0 && v != 1.0) throw std::invalid_argument("logistic y must be 0/1");
    } else {
      if (v < 0.0 || v != std::floor(v)) {
        throw std::invalid_argument("negbin y must be non-negative integers");
      }
    }
  }
  if (family == GlmFamily::negbin && !(data.dispersion_h > 0.0)) {
    throw std::invalid_argument("negbin dispersion h must be positive");
  }
}

// Full state: beta spans all p columns (intercept first); the shrinkage
// hyperparameters cover only the p-1 penalized coefficients.
struct GlmState {
  Eigen::VectorXd beta;     // p
  Eigen::VectorXd omega;    // n
  Eigen::VectorXd lambda2;  // p-1
  double tau2 = 1.0;
  Eigen::VectorXd nu;  // p-1
  double xi = 1.0;
  Eigen::VectorXd eta2;  // p-1, horseshoe+ only
  Eigen::VectorXd phi;   // p-1, horseshoe+ only

  static GlmState initial(Eigen::Index n, Eigen::Index p) {
    GlmState s;
    s.beta = Eigen::VectorXd::Zero(p);
    s.omega = Eigen::VectorXd::Constant(n, 0.25);
    s.lambda2 = Eigen::VectorXd::Ones(p - 1);
    s.nu = Eigen::VectorXd::Ones(p - 1);
    s.eta2 = Eigen::VectorXd::Ones(p - 1);
    s.phi = Eigen::VectorXd::Ones(p - 1);
    return s;
  }

  // view of the shrunk block in hs_linear's state layout, sigma^2 = 1
  HsState shrunk_view() const {
    HsState h;
    h.beta = beta.tail(beta.size() - 1);
    h.sigma2 = 1.0;
    h.lambda2 = lambda2;
    h.tau2 = tau2;
    h.nu = nu;
    h.xi = xi;
    h.eta2 = eta2;
    h.phi = phi;
    return h;
  }
};

// omega_i | beta ~ PG(1, x_i' beta)
inline Eigen::VectorXd update_omega_logistic(const GlmState& state,
                                             const GlmData& data,
                                             RandomStream& rng) {
  Eigen::VectorXd psi = data.X * state.beta;
  Eigen::VectorXd out(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    out(i) = sample_polya_gamma({1.0, psi(i)}, rng);
  }
  return out;
}

// omega_i | beta ~ PG(y_i + h, x_i' beta)
inline Eigen::VectorXd update_omega_negbin(const GlmState& state,
                                           const GlmData& data,
                                           RandomStream& rng) {
  Eigen::VectorXd psi = data.X * state.beta;
  Eigen::VectorXd out(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    out(i) = sample_polya_gamma({data.y(i) + data.dispersion_h, psi(i)}, rng);
  }
  return out;
}

inline Eigen::VectorXd glm_kappa(const GlmData& data, GlmFamily family) {
  if (family == GlmFamily::logistic) return data.y.array() - 0.5;
  return 0.5 * (data.y.array() - data.dispersion_h);
}

inline Eigen::VectorXd glm_prior_precision(const GlmState& state) {
  const Eigen::Index p = state.beta.size();
  Eigen::VectorXd prec(p);
  prec(0) = kInterceptPrecision;
  for (Eigen::Index j = 1; j < p; ++j) {
    prec(j) = 1.0 / clamp_scale(clamp_scale(state.lambda2(j - 1)) *
                                clamp_scale(state.tau2));
  }
  return prec;
}

inline Eigen::VectorXd update_beta_glm(const GlmState& state, const GlmData& data,
                                       GlmFamily family, RandomStream& rng,
                                       BackendPolicy policy = BackendPolicy::automatic) {
  Eigen::VectorXd sqrt_omega = state.omega.cwiseSqrt();
  GaussCondSpec spec;
  spec.design = sqrt_omega.asDiagonal() * data.X;  // Omega^{1/2} X
  spec.weighted_response = data.X.transpose() * glm_kappa(data, family);
  spec.prior_precision_diag = glm_prior_precision(state);
  spec.noise_variance = 1.0;
  return sample_beta(spec, rng, policy);
}

inline void sweep_glm(GlmState& state, const GlmData& data, GlmFamily family,
                      const SamplerConfig& cfg, RandomStream& rng) {
  state.omega = (family == GlmFamily::logistic)
                    ? update_omega_logistic(state, data, rng)
                    : update_omega_negbin(state, data, rng);
  state.beta = update_beta_glm(state, data, family, rng, cfg.backend_policy);
  HsState view = state.shrunk_view();
  state.lambda2 = update_lambda2(view, rng);
  view.lambda2 = state.lambda2;
  state.tau2 = update_tau2(view, rng);
  view.tau2 = state.tau2;
  AuxDraw aux = update_aux(view, rng, cfg.prior_variant, cfg.hsplus_convention);
  state.nu = aux.nu;
  state.xi = aux.xi;
  view.nu = state.nu;
  view.xi = state.xi;
  if (cfg.prior_variant == PriorVariant::horseshoe_plus) {
    EtaDraw eta = update_eta2(view, rng, cfg.prior_variant, cfg.hsplus_convention);
    state.eta2 = eta.eta2;
    state.phi = eta.phi;
  }
}

inline ChainOutput run_chain_glm(const GlmData& data, const SamplerConfig& cfg,
                                 GlmFamily family) {
  validate(cfg);
  validate(data, family);
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::Index p = data.p();

  RandomStream rng(cfg.seed);
  GlmState state = GlmState::initial(data.n(), p);

  ChainOutput out;
  out.beta_draws.resize(cfg.n_keep, p);
  out.sigma2_draws = Eigen::VectorXd::Ones(cfg.n_keep);
  out.tau2_draws.resize(cfg.n_keep);
  if (cfg.store_lambda2) out.lambda2_draws.resize(cfg.n_keep, p - 1);

  for (int it = 0; it < cfg.n_burn; ++it) sweep_glm(state, data, family, cfg, rng);
  for (int k = 0; k < cfg.n_keep; ++k) {
    for (int t = 0; t < cfg.thin; ++t) sweep_glm(state, data, family, cfg, rng);
    out.beta_draws.row(k) = state.beta.transpose();
    out.tau2_draws(k) = state.tau2;
    if (cfg.store_lambda2) out.lambda2_draws.row(k) = state.lambda2.transpose();
  }

  out.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace bhs
