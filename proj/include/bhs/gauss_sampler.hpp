// Exact sampling from the Gaussian conditional of the regression
// coefficients
//
//   beta | . ~ N_p(A^{-1} t, sigma^2 A^{-1}),  A = Phi' Phi + D,
//
// where Phi is the (possibly weighted) design, t the weighted response and
// D the diagonal prior precision. Two backends: Rue's Cholesky sampler
// (cubic in p) and the Bhattacharya et al. data-augmentation sampler that
// works on the n x n system (linear in p), selected automatically by
// problem shape.
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <sstream>
#include <stdexcept>

#include "bhs/rng.hpp"

namespace bhs {

struct GaussCondSpec {
  Eigen::MatrixXd design;                // n x p, Phi
  Eigen::VectorXd weighted_response;     // p,     t = Phi' y  (or X' Omega z)
  Eigen::VectorXd prior_precision_diag;  // p,     diag of D
  double noise_variance = 1.0;           // sigma^2 (1 for GLMs)
};

enum class BackendPolicy { automatic, force_rue, force_fast };
enum class GaussBackend { rue, fast };

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void validate(const GaussCondSpec& spec) {
  const auto p = spec.design.cols();
  if (spec.weighted_response.size() != p ||
      spec.prior_precision_diag.size() != p) {
    throw std::invalid_argument("GaussCondSpec dimension mismatch");
  }
  if (!(spec.noise_variance > 0.0)) {
    throw std::invalid_argument("noise variance must be positive");
  }
  if (!(spec.prior_precision_diag.array() > 0.0).all() ||
      !spec.prior_precision_diag.allFinite()) {
    throw std::invalid_argument("prior precisions must be positive and finite");
  }
}

inline GaussBackend select_backend(Eigen::Index n, Eigen::Index p,
                                   BackendPolicy policy = BackendPolicy::automatic) {
  switch (policy) {
    case BackendPolicy::force_rue: return GaussBackend::rue;
    case BackendPolicy::force_fast: return GaussBackend::fast;
    case BackendPolicy::automatic: break;
  }
  return (n > p) ? GaussBackend::rue : GaussBackend::fast;
}

namespace detail {

// Cholesky with escalating diagonal jitter eps*mean(diag(A)),
// eps in {0, 1e-12, 1e-10, 1e-8, 1e-6}.
inline Eigen::LLT<Eigen::MatrixXd> chol_with_jitter(const Eigen::MatrixXd& a) {
  const double base = a.diagonal().mean();
  const double eps[] = {0.0, 1e-12, 1e-10, 1e-8, 1e-6};
  for (double e : eps) {
    Eigen::MatrixXd aj = a;
    aj.diagonal().array() += e * base;
    Eigen::LLT<Eigen::MatrixXd> llt(aj);
    if (llt.info() == Eigen::Success) return llt;
  }
  std::ostringstream msg;
  msg << "Cholesky factorization failed after jitter escalation up to 1e-6 * "
      << base;
  throw NumericalError(msg.str());
}

// Rue draw given a precomputed Gram matrix Phi'Phi.
inline Eigen::VectorXd sample_beta_rue_gram(const Eigen::MatrixXd& gram,
                                            const Eigen::VectorXd& t,
                                            const Eigen::VectorXd& prior_prec,
                                            double sigma2, RandomStream& rng) {
  const Eigen::Index p = gram.rows();
  Eigen::MatrixXd a = gram;
  a.diagonal() += prior_prec;
  auto llt = chol_with_jitter(a);
  Eigen::VectorXd mean = llt.solve(t);
  Eigen::VectorXd z(p);
  for (Eigen::Index j = 0; j < p; ++j) z(j) = rng.normal();
  // L^{-T} z has covariance A^{-1}
  llt.matrixU().solveInPlace(z);
  return mean + std::sqrt(sigma2) * z;
}

}  // namespace detail

inline Eigen::VectorXd sample_beta_rue(const GaussCondSpec& spec,
                                       RandomStream& rng) {
  validate(spec);
  Eigen::MatrixXd gram = spec.design.transpose() * spec.design;
  return detail::sample_beta_rue_gram(gram, spec.weighted_response,
                                      spec.prior_precision_diag,
                                      spec.noise_variance, rng);
}

// Bhattacharya-Chakraborty-Mallick sampler: one n x n solve instead of a
// p x p factorization. Exact draw from the same law as sample_beta_rue.
inline Eigen::VectorXd sample_beta_fast(const GaussCondSpec& spec,
                                        RandomStream& rng) {
  validate(spec);
  const Eigen::Index n = spec.design.rows();
  const Eigen::Index p = spec.design.cols();
  const double sigma = std::sqrt(spec.noise_variance);

  Eigen::VectorXd dinv = spec.prior_precision_diag.cwiseInverse();  // D^{-1}
  // W = D^{-1} Phi' (p x n); M = Phi D^{-1} Phi' + I (n x n)
  Eigen::MatrixXd w = dinv.asDiagonal() * spec.design.transpose();
  Eigen::MatrixXd m = spec.design * w;
  m.diagonal().array() += 1.0;
  auto llt = detail::chol_with_jitter(m);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("inner n x n solve failed in fast Gaussian sampler");
  }

  // mean = Sigma t via Woodbury: D^{-1}t - W M^{-1} Phi D^{-1} t
  Eigen::VectorXd dt = dinv.cwiseProduct(spec.weighted_response);
  Eigen::VectorXd mean = dt - w * llt.solve(spec.design * dt);

  // zero-mean part: u ~ N(0, sigma^2 D^{-1}), delta ~ N(0, I_n),
  // v = Phi u / sigma + delta, centered = u - sigma W M^{-1} v
  Eigen::VectorXd u(p), delta(n);
  for (Eigen::Index j = 0; j < p; ++j) u(j) = sigma * std::sqrt(dinv(j)) * rng.normal();
  for (Eigen::Index i = 0; i < n; ++i) delta(i) = rng.normal();
  Eigen::VectorXd v = spec.design * u / sigma + delta;
  return mean + u - sigma * (w * llt.solve(v));
}

inline Eigen::VectorXd sample_beta(const GaussCondSpec& spec, RandomStream& rng,
                                   BackendPolicy policy = BackendPolicy::automatic) {
  return select_backend(spec.design.rows(), spec.design.cols(), policy) ==
                 GaussBackend::rue
             ? sample_beta_rue(spec, rng)
             : sample_beta_fast(spec, rng);
}

// log N_p(beta; A^{-1} t, sigma^2 A^{-1}); shares the factorization code
// path with the sampler.
inline double gauss_log_density(const GaussCondSpec& spec,
                                const Eigen::VectorXd& beta) {
  validate(spec);
  const Eigen::Index p = spec.design.cols();
  Eigen::MatrixXd a = spec.design.transpose() * spec.design;
  a.diagonal() += spec.prior_precision_diag;
  auto llt = detail::chol_with_jitter(a);
  Eigen::VectorXd mean = llt.solve(spec.weighted_response);
  // quadratic form (beta-mean)' A (beta-mean) via the factor
  Eigen::VectorXd r = llt.matrixL().transpose() * (beta - mean);
  double quad = r.squaredNorm() / spec.noise_variance;
  double logdet_a = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  constexpr double kLog2Pi = 1.8378770664093454836;
  return 0.5 * (logdet_a - p * std::log(spec.noise_variance)) -
         0.5 * p * kLog2Pi - 0.5 * quad;
}

}  // namespace bhs
