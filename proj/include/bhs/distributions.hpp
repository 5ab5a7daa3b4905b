// Scalar distribution samplers and densities used by the Gibbs updates:
// inverse-gamma and Polya-gamma. The half-Cauchy never needs a direct
// sampler inside the hierarchy; it enters through its inverse-gamma scale
// mixture (x^2 | a ~ IG(1/2, 1/a), a ~ IG(1/2, 1/A^2)  =>  x ~ C+(0, A)).
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "bhs/rng.hpp"

namespace bhs {

inline constexpr double kPi = 3.14159265358979323846;

struct InvGammaParams {
  double shape;  // alpha
  double scale;  // beta in p(z) = beta^alpha/Gamma(alpha) z^{-alpha-1} e^{-beta/z}
};

struct PolyaGammaParams {
  double shape;  // b
  double tilt;   // c
};

inline void validate(const InvGammaParams& p) {
  if (!(p.shape > 0.0) || !std::isfinite(p.shape) ||
      !(p.scale > 0.0) || !std::isfinite(p.scale)) {
    throw std::domain_error("inverse-gamma parameters must be finite and positive");
  }
}

inline double sample_inv_gamma(const InvGammaParams& p, RandomStream& rng) {
  validate(p);
  // reciprocal of a gamma(shape, rate = scale) draw
  double g = rng.gamma(p.shape, 1.0 / p.scale);
  // gamma variates can underflow to 0 for tiny shapes; retry a few times
  for (int k = 0; g <= 0.0 && k < 64; ++k) g = rng.gamma(p.shape, 1.0 / p.scale);
  if (g <= 0.0) g = 1e-300;
  return 1.0 / g;
}

inline double inv_gamma_log_pdf(double z, const InvGammaParams& p) {
  validate(p);
  if (!(z > 0.0)) throw std::domain_error("inverse-gamma support is z > 0");
  return p.shape * std::log(p.scale) - std::lgamma(p.shape) -
         (p.shape + 1.0) * std::log(z) - p.scale / z;
}

// E[PG(b, c)] = b/(2c) tanh(c/2), with limit b/4 at c = 0.
inline double polya_gamma_mean(double b, double c) {
  if (std::fabs(c) < 1e-8) return 0.25 * b;
  return b / (2.0 * c) * std::tanh(0.5 * c);
}

namespace detail {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

// a_n(x) coefficients of the alternating series for the J*(1, z) density,
// piecewise around the truncation point t (Polson, Scott & Windle).
inline double pg_aterm(int n, double x, double t) {
  double f;
  if (x <= t) {
    f = std::log(kPi) + std::log(n + 0.5) +
        1.5 * (std::log(2.0 / kPi) - std::log(x)) -
        2.0 * (n + 0.5) * (n + 0.5) / x;
  } else {
    f = std::log(kPi) + std::log(n + 0.5) -
        0.5 * x * kPi * kPi * (n + 0.5) * (n + 0.5);
  }
  return std::exp(f);
}

// Inverse-Gaussian(mu, 1) variate
inline double rand_invgauss(double mu, RandomStream& rng) {
  double u = rng.normal();
  double v = u * u;
  double out = mu + 0.5 * mu * (mu * v - std::sqrt(4.0 * mu * v + mu * mu * v * v));
  if (rng.uniform() > mu / (mu + out)) out = mu * mu / out;
  return out;
}

// Gamma(1/2) truncated to (pi/2, inf); Chung (1998)
inline double trunc_gamma_half(RandomStream& rng) {
  const double c = kPi / 2.0;
  for (;;) {
    double x = 2.0 * rng.exponential() + c;
    double gx = std::sqrt(kPi / 2.0) / std::sqrt(x);
    if (rng.uniform() <= gx) return x;
  }
}

// Inverse-Gaussian(1/z, 1) truncated to (0, t); Windle (2013), Algorithm 4
inline double trunc_invgauss(double z, double t, RandomStream& rng) {
  double mu = 1.0 / z;
  if (mu > t) {
    for (;;) {
      double x = 1.0 / trunc_gamma_half(rng);
      if (std::log(rng.uniform()) < -0.5 * z * z * x) return x;
    }
  }
  double x = t + 1.0;
  while (x >= t) x = rand_invgauss(mu, rng);
  return x;
}

// Exact PG(1, c) draw via the alternating-series rejection sampler
// (Windle 2013, Algorithm 6). PG(1, c) = J*(1, c/2) / 4.
inline double sample_pg1(double c, RandomStream& rng) {
  double z = std::fabs(c) * 0.5;
  const double t = 2.0 / kPi;

  double K = 0.5 * z * z + kPi * kPi / 8.0;
  double logA = std::log(4.0) - std::log(kPi) - z;
  double Kt = K * t;
  double w = std::sqrt(kPi / 2.0);

  double logf1 = logA + std::log(norm_cdf(w * (t * z - 1.0))) + std::log(K) + Kt;
  double logf2 = logA + 2.0 * z + std::log(norm_cdf(-w * (t * z + 1.0))) +
                 std::log(K) + Kt;
  double p_over_q = std::exp(logf1) + std::exp(logf2);
  double ratio = 1.0 / (1.0 + p_over_q);

  for (;;) {
    double x;
    if (rng.uniform() < ratio) {
      x = t + rng.exponential() / K;  // truncated exponential tail
    } else {
      x = trunc_invgauss(z, t, rng);  // truncated inverse-Gaussian body
    }

    // squeeze via partial sums S_n of the alternating series
    double sn = pg_aterm(0, x, t);
    double u = rng.uniform() * sn;
    int i = 1;
    int sign = -1;
    bool even = false;
    for (;;) {
      sn += sign * pg_aterm(i, x, t);
      if (!even && u <= sn) return 0.25 * x;
      if (even && u > sn) break;
      even = !even;
      sign = -sign;
      ++i;
    }
  }
}

// PG(b, c) for non-integer b: truncated sum-of-gammas representation
//   PG(b, c) = (1/(2 pi^2)) sum_k g_k / d_k,  g_k ~ Gamma(b, 1),
//   d_k = (k - 1/2)^2 + c^2/(4 pi^2),
// truncated at kTerms with a moment-matched gamma tail correction. The tail
// mean uses the closed form sum_k 1/d_k = (pi/(2a)) tanh(pi a), a = |c|/(2 pi).
inline double sample_pg_series(double b, double c, RandomStream& rng) {
  constexpr int kTerms = 200;
  const double a2 = c * c / (4.0 * kPi * kPi);

  double x = 0.0;
  double partial_inv = 0.0;   // sum of 1/d_k over kept terms
  double partial_inv2 = 0.0;  // sum of 1/d_k^2 over kept terms
  for (int k = 1; k <= kTerms; ++k) {
    double dk = (k - 0.5) * (k - 0.5) + a2;
    x += rng.gamma(b, 1.0) / dk;
    partial_inv += 1.0 / dk;
    partial_inv2 += 1.0 / (dk * dk);
  }

  double total_inv;
  if (a2 > 1e-14) {
    double a = std::sqrt(a2);
    total_inv = kPi / (2.0 * a) * std::tanh(kPi * a);
  } else {
    total_inv = kPi * kPi / 2.0;  // sum 1/(k-1/2)^2
  }
  double tail_inv = std::max(total_inv - partial_inv, 0.0);
  // tail of sum 1/d_k^2, summed numerically; converges ~ O(1/K^3)
  double tail_inv2 = 0.0;
  for (int k = kTerms + 1; k <= kTerms + 4000; ++k) {
    double dk = (k - 0.5) * (k - 0.5) + a2;
    tail_inv2 += 1.0 / (dk * dk);
  }

  double tail_mean = b * tail_inv;
  double tail_var = b * tail_inv2;
  if (tail_mean > 0.0 && tail_var > 0.0) {
    double shape = tail_mean * tail_mean / tail_var;
    double scale = tail_var / tail_mean;
    x += rng.gamma(shape, scale);
  }
  return x / (2.0 * kPi * kPi);
}

}  // namespace detail

inline double sample_polya_gamma(const PolyaGammaParams& p, RandomStream& rng) {
  if (!(p.shape > 0.0) || !std::isfinite(p.shape) || !std::isfinite(p.tilt)) {
    throw std::domain_error("Polya-gamma shape must be finite and positive");
  }
  double b = p.shape;
  double c = p.tilt;
  double nearest = std::round(b);
  if (std::fabs(b - nearest) < 1e-12 && nearest >= 1.0) {
    // integer shape: sum of independent PG(1, c) draws (additivity in b)
    int n = static_cast<int>(nearest);
    double x = 0.0;
    for (int i = 0; i < n; ++i) x += detail::sample_pg1(c, rng);
    return x;
  }
  return detail::sample_pg_series(b, c, rng);
}

}  // namespace bhs
