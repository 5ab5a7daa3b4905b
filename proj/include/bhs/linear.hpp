// Gibbs sampler for horseshoe (and horseshoe+) linear regression via the
// inverse-gamma auxiliary-variable hierarchy:
//
//   y | X, beta, sigma^2   ~ N_n(X beta, sigma^2 I)
//   beta_j                 ~ N(0, lambda_j^2 tau^2 sigma^2)
//   lambda_j^2 | nu_j      ~ IG(1/2, 1/nu_j)
//   tau^2 | xi             ~ IG(1/2, 1/xi)
//   nu_j, xi               ~ IG(1/2, 1)
//
// Every conditional is Gaussian or inverse-gamma, so the sweep is plain
// Gibbs: beta -> sigma^2 -> lambda^2 -> tau^2 -> (nu, xi) [-> (eta^2, phi)].
#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cstdint>
#include <stdexcept>

#include "bhs/distributions.hpp"
#include "bhs/gauss_sampler.hpp"
#include "bhs/rng.hpp"

namespace bhs {

// All variance-type quantities are clamped to this range before use; the
// half-Cauchy tails occasionally overflow doubles otherwise.
inline constexpr double kScaleFloor = 1e-12;
inline constexpr double kScaleCeil = 1e12;

inline double clamp_scale(double x) {
  if (!(x > kScaleFloor)) return kScaleFloor;
  if (x > kScaleCeil) return kScaleCeil;
  return x;
}

struct RegressionData {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  bool standardized = false;
  Eigen::VectorXd column_means;
  Eigen::VectorXd column_norms;
  double y_center = 0.0;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

// Zero-mean, unit-Euclidean-length predictor columns; centred response.
inline RegressionData standardize(Eigen::MatrixXd X, Eigen::VectorXd y) {
  if (X.rows() != y.size()) throw std::invalid_argument("X/y row mismatch");
  RegressionData d;
  d.column_means = X.colwise().mean();
  X.rowwise() -= d.column_means.transpose();
  d.column_norms = X.colwise().norm();
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    double s = d.column_norms(j);
    if (s > 0.0) X.col(j) /= s;
  }
  d.y_center = y.mean();
  y.array() -= d.y_center;
  d.X = std::move(X);
  d.y = std::move(y);
  d.standardized = true;
  return d;
}

enum class PriorVariant { horseshoe, horseshoe_plus };
enum class SigmaPrior { jeffreys, half_cauchy };
// Horseshoe+ scale convention: `conventional` is lambda_j ~ C+(0, eta_j),
// eta_j ~ C+(0, 1); `paper_literal` keeps the printed conditional
// nu_j | . ~ IG(1, eta_j^2 + 1/lambda_j^2) together with eta_j^2 ~ C+(0,1),
// which is not conjugate in the eta layer (sampled numerically there).
enum class HsPlusConvention { conventional, paper_literal };

struct SamplerConfig {
  int n_burn = 1000;
  int n_keep = 1000;
  int thin = 1;
  PriorVariant prior_variant = PriorVariant::horseshoe;
  SigmaPrior sigma_prior = SigmaPrior::jeffreys;
  HsPlusConvention hsplus_convention = HsPlusConvention::conventional;
  BackendPolicy backend_policy = BackendPolicy::automatic;
  std::uint64_t seed = 1;
  bool store_lambda2 = false;
};

inline void validate(const SamplerConfig& c) {
  if (c.n_keep < 1 || c.thin < 1 || c.n_burn < 0) {
    throw std::invalid_argument("invalid chain lengths");
  }
}

struct HsState {
  Eigen::VectorXd beta;
  double sigma2 = 1.0;
  Eigen::VectorXd lambda2;
  double tau2 = 1.0;
  Eigen::VectorXd nu;
  double xi = 1.0;
  Eigen::VectorXd eta2;  // horseshoe+ only
  Eigen::VectorXd phi;   // horseshoe+ only
  double omega_sigma = 1.0;  // auxiliary for half-Cauchy sigma prior

  static HsState initial(Eigen::Index p) {
    HsState s;
    s.beta = Eigen::VectorXd::Zero(p);
    s.lambda2 = Eigen::VectorXd::Ones(p);
    s.nu = Eigen::VectorXd::Ones(p);
    s.eta2 = Eigen::VectorXd::Ones(p);
    s.phi = Eigen::VectorXd::Ones(p);
    return s;
  }
};

struct ChainOutput {
  Eigen::MatrixXd beta_draws;     // n_keep x p
  Eigen::VectorXd sigma2_draws;   // n_keep
  Eigen::VectorXd tau2_draws;     // n_keep
  Eigen::MatrixXd lambda2_draws;  // n_keep x p when stored, else 0 x 0
  double wall_clock_seconds = 0.0;
};

// Precomputed Gram pieces so the Rue backend avoids the O(n p^2) product
// every sweep.
struct LinearWorkspace {
  Eigen::MatrixXd gram;  // X'X
  Eigen::VectorXd xty;   // X'y

  explicit LinearWorkspace(const RegressionData& d)
      : gram(d.X.transpose() * d.X), xty(d.X.transpose() * d.y) {}
};

inline Eigen::VectorXd shrinkage_precision(const HsState& s) {
  Eigen::VectorXd d(s.lambda2.size());
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    d(j) = 1.0 / clamp_scale(clamp_scale(s.lambda2(j)) * clamp_scale(s.tau2));
  }
  return d;
}

// beta | . ~ N_p(A^{-1} X'y, sigma^2 A^{-1}), A = X'X + (tau^2 Lambda)^{-1}
inline Eigen::VectorXd update_beta(const HsState& state,
                                   const RegressionData& data,
                                   RandomStream& rng,
                                   BackendPolicy policy = BackendPolicy::automatic,
                                   const LinearWorkspace* ws = nullptr) {
  Eigen::VectorXd prec = shrinkage_precision(state);
  GaussBackend backend = select_backend(data.n(), data.p(), policy);
  if (backend == GaussBackend::rue && ws != nullptr) {
    return detail::sample_beta_rue_gram(ws->gram, ws->xty, prec, state.sigma2, rng);
  }
  GaussCondSpec spec{data.X, ws ? ws->xty : Eigen::VectorXd(data.X.transpose() * data.y),
                     prec, state.sigma2};
  return backend == GaussBackend::rue ? sample_beta_rue(spec, rng)
                                      : sample_beta_fast(spec, rng);
}

// sigma^2 | . ~ IG((n+p)/2, RSS/2 + beta' Lambda_*^{-1} beta / 2); with the
// half-Cauchy prior on sigma the shape gains 1/2 and the scale gains
// 1/omega_sigma, with omega_sigma | sigma^2 ~ IG(1, 1 + 1/sigma^2).
inline double update_sigma2(HsState& state, const RegressionData& data,
                            RandomStream& rng,
                            SigmaPrior prior = SigmaPrior::jeffreys) {
  const double n = static_cast<double>(data.n());
  const double p = static_cast<double>(data.p());
  double rss = (data.y - data.X * state.beta).squaredNorm();
  double prior_quad = state.beta.cwiseProduct(
      shrinkage_precision(state).cwiseProduct(state.beta)).sum();
  double shape = 0.5 * (n + p);
  double scale = 0.5 * rss + 0.5 * prior_quad;
  if (prior == SigmaPrior::half_cauchy) {
    state.omega_sigma = clamp_scale(
        sample_inv_gamma({1.0, 1.0 + 1.0 / clamp_scale(state.sigma2)}, rng));
    shape += 0.5;
    scale += 1.0 / state.omega_sigma;
  }
  scale = std::max(scale, kScaleFloor);
  return clamp_scale(sample_inv_gamma({shape, scale}, rng));
}

// lambda_j^2 | . ~ IG(1, 1/nu_j + beta_j^2 / (2 tau^2 sigma^2))
inline Eigen::VectorXd update_lambda2(const HsState& state, RandomStream& rng) {
  const double denom = 2.0 * clamp_scale(state.tau2) * clamp_scale(state.sigma2);
  Eigen::VectorXd out(state.lambda2.size());
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    double scale = 1.0 / clamp_scale(state.nu(j)) +
                   state.beta(j) * state.beta(j) / denom;
    out(j) = clamp_scale(sample_inv_gamma({1.0, std::max(scale, kScaleFloor)}, rng));
  }
  return out;
}

// tau^2 | . ~ IG((p+1)/2, 1/xi + (1/(2 sigma^2)) sum beta_j^2 / lambda_j^2)
inline double update_tau2(const HsState& state, RandomStream& rng) {
  const double p = static_cast<double>(state.lambda2.size());
  double s = 0.0;
  for (Eigen::Index j = 0; j < state.lambda2.size(); ++j) {
    s += state.beta(j) * state.beta(j) / clamp_scale(state.lambda2(j));
  }
  double scale = 1.0 / clamp_scale(state.xi) + s / (2.0 * clamp_scale(state.sigma2));
  return clamp_scale(
      sample_inv_gamma({0.5 * (p + 1.0), std::max(scale, kScaleFloor)}, rng));
}

struct AuxDraw {
  Eigen::VectorXd nu;
  double xi;
};

// nu_j | . ~ IG(1, 1 + 1/lambda_j^2)   (horseshoe)
//        ~ IG(1, 1/eta_j^2 + 1/lambda_j^2)   (horseshoe+, conventional)
//        ~ IG(1, eta_j^2 + 1/lambda_j^2)     (horseshoe+, paper-literal)
// xi | . ~ IG(1, 1 + 1/tau^2)
inline AuxDraw update_aux(const HsState& state, RandomStream& rng,
                          PriorVariant variant = PriorVariant::horseshoe,
                          HsPlusConvention conv = HsPlusConvention::conventional) {
  AuxDraw out;
  out.nu.resize(state.nu.size());
  for (Eigen::Index j = 0; j < out.nu.size(); ++j) {
    double base;
    if (variant == PriorVariant::horseshoe) {
      base = 1.0;
    } else if (conv == HsPlusConvention::conventional) {
      base = 1.0 / clamp_scale(state.eta2(j));
    } else {
      base = clamp_scale(state.eta2(j));
    }
    double scale = base + 1.0 / clamp_scale(state.lambda2(j));
    out.nu(j) = clamp_scale(sample_inv_gamma({1.0, scale}, rng));
  }
  out.xi = clamp_scale(
      sample_inv_gamma({1.0, 1.0 + 1.0 / clamp_scale(state.tau2)}, rng));
  return out;
}

struct EtaDraw {
  Eigen::VectorXd eta2;
  Eigen::VectorXd phi;
};

namespace detail {

// paper-literal eta update: w = eta_j^2 with density
// p(w | nu_j) proportional to w^{1/2} exp(-w/nu_j) / (1 + w^2), w > 0.
// Not a standard family; drawn by inverse-CDF on a dense grid in log w.
inline double sample_eta2_paper_literal(double nu_j, RandomStream& rng) {
  constexpr int kGrid = 512;
  // support: the gamma factor w^{1/2} e^{-w/nu} concentrates below ~20*nu
  double lo = std::log(1e-8);
  double hi = std::log(std::max(20.0 * nu_j, 10.0));
  double dz = (hi - lo) / (kGrid - 1);
  double cdf[kGrid];
  double acc = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    double z = lo + i * dz;
    double w = std::exp(z);
    // density in z = log w carries the Jacobian w
    double f = std::exp(1.5 * z - w / nu_j) / (1.0 + w * w);
    acc += f;
    cdf[i] = acc;
  }
  double u = rng.uniform() * acc;
  int i = 0;
  while (i < kGrid - 1 && cdf[i] < u) ++i;
  double prev = (i == 0) ? 0.0 : cdf[i - 1];
  double frac = (cdf[i] > prev) ? (u - prev) / (cdf[i] - prev) : 0.5;
  return std::exp(lo + (i - 1 + frac) * dz);
}

}  // namespace detail

// Horseshoe+ eta layer. Conventional convention is fully conjugate:
//   eta_j^2 | . ~ IG(1, 1/nu_j + 1/phi_j),  phi_j | . ~ IG(1, 1 + 1/eta_j^2).
inline EtaDraw update_eta2(const HsState& state, RandomStream& rng,
                           PriorVariant variant,
                           HsPlusConvention conv = HsPlusConvention::conventional) {
  if (variant != PriorVariant::horseshoe_plus) {
    throw std::logic_error("eta update requires the horseshoe_plus prior");
  }
  EtaDraw out;
  out.eta2.resize(state.eta2.size());
  out.phi.resize(state.phi.size());
  for (Eigen::Index j = 0; j < out.eta2.size(); ++j) {
    if (conv == HsPlusConvention::conventional) {
      double scale = 1.0 / clamp_scale(state.nu(j)) + 1.0 / clamp_scale(state.phi(j));
      out.eta2(j) = clamp_scale(
          sample_inv_gamma({1.0, std::max(scale, kScaleFloor)}, rng));
      out.phi(j) = clamp_scale(
          sample_inv_gamma({1.0, 1.0 + 1.0 / out.eta2(j)}, rng));
    } else {
      out.eta2(j) =
          clamp_scale(detail::sample_eta2_paper_literal(clamp_scale(state.nu(j)), rng));
      out.phi(j) = 1.0;  // unused in the literal convention
    }
  }
  return out;
}

inline void sweep(HsState& state, const RegressionData& data,
                  const SamplerConfig& cfg, const LinearWorkspace& ws,
                  RandomStream& rng) {
  state.beta = update_beta(state, data, rng, cfg.backend_policy, &ws);
  state.sigma2 = update_sigma2(state, data, rng, cfg.sigma_prior);
  state.lambda2 = update_lambda2(state, rng);
  state.tau2 = update_tau2(state, rng);
  AuxDraw aux = update_aux(state, rng, cfg.prior_variant, cfg.hsplus_convention);
  state.nu = aux.nu;
  state.xi = aux.xi;
  if (cfg.prior_variant == PriorVariant::horseshoe_plus) {
    EtaDraw eta = update_eta2(state, rng, cfg.prior_variant, cfg.hsplus_convention);
    state.eta2 = eta.eta2;
    state.phi = eta.phi;
  }
}

inline ChainOutput run_chain(const RegressionData& data, const SamplerConfig& cfg) {
  validate(cfg);
  if (data.X.rows() != data.y.size()) {
    throw std::invalid_argument("X/y row mismatch");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::Index p = data.p();

  RandomStream rng(cfg.seed);
  HsState state = HsState::initial(p);
  LinearWorkspace ws(data);

  ChainOutput out;
  out.beta_draws.resize(cfg.n_keep, p);
  out.sigma2_draws.resize(cfg.n_keep);
  out.tau2_draws.resize(cfg.n_keep);
  if (cfg.store_lambda2) out.lambda2_draws.resize(cfg.n_keep, p);

  for (int it = 0; it < cfg.n_burn; ++it) sweep(state, data, cfg, ws, rng);
  for (int k = 0; k < cfg.n_keep; ++k) {
    for (int t = 0; t < cfg.thin; ++t) sweep(state, data, cfg, ws, rng);
    out.beta_draws.row(k) = state.beta.transpose();
    out.sigma2_draws(k) = state.sigma2;
    out.tau2_draws(k) = state.tau2;
    if (cfg.store_lambda2) out.lambda2_draws.row(k) = state.lambda2.transpose();
  }

  out.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// Map standardized-scale coefficient draws back to the original predictor
// scale (and recover the implied intercept per draw).
inline Eigen::MatrixXd destandardize_beta(const Eigen::MatrixXd& beta_draws,
                                          const RegressionData& data) {
  Eigen::MatrixXd out = beta_draws;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    double s = data.column_norms(j);
    if (s > 0.0) out.col(j) /= s;
  }
  return out;
}

}  // namespace bhs
