// Test-only oracles, independent of the library's sampling paths:
// analytic CDFs, Kolmogorov-Smirnov statistics, Gauss-Legendre quadrature
// and AR(1) chain generation.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double cauchy_cdf(double x, double loc, double scale) {
  return 0.5 + std::atan((x - loc) / scale) / M_PI;
}

inline double half_cauchy_cdf(double x, double scale) {
  return x <= 0.0 ? 0.0 : 2.0 * std::atan(x / scale) / M_PI;
}

inline double half_cauchy_quantile(double u, double scale) {
  return scale * std::tan(M_PI * u / 2.0);
}

// Regularized lower incomplete gamma P(a, x); series + continued fraction.
inline double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) return NAN;
  if (x == 0.0) return 0.0;
  double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  // Lentz continued fraction for Q(a, x)
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  double q = std::exp(-x + a * std::log(x) - gln) * h;
  return 1.0 - q;
}

// CDF of IG(shape, scale) at z: Q(shape, scale/z)
inline double inv_gamma_cdf(double z, double shape, double scale) {
  if (z <= 0.0) return 0.0;
  return 1.0 - gamma_p(shape, scale / z);
}

// One-sample KS statistic against a given CDF.
inline double ks_statistic(std::vector<double> xs,
                           const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double f = cdf(xs[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

// Two-sample KS statistic.
inline double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i; else ++j;
    double fa = static_cast<double>(i) / static_cast<double>(a.size());
    double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

inline double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double variance(const std::vector<double>& xs) {
  double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

inline double std_error(const std::vector<double>& xs) {
  return std::sqrt(variance(xs) / static_cast<double>(xs.size()));
}

// Gauss-Legendre nodes/weights on [a, b] via Newton iteration.
struct GaussLegendre {
  std::vector<double> x, w;
  GaussLegendre(int n, double a, double b) : x(n), w(n) {
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 0; k < n; ++k) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
        }
        pp = n * (z * p0 - p1) / (z * z - 1.0);
        double z1 = z;
        z = z1 - p0 / pp;
        if (std::fabs(z - z1) < 1e-15) break;
      }
      double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
      x[i] = xm - xl * z;
      x[n - 1 - i] = xm + xl * z;
      w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
      w[n - 1 - i] = w[i];
    }
  }
  double integrate(const std::function<double(double)>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
    return s;
  }
};

// CDF of an unnormalized density on (lo, hi), tabulated on a log-spaced
// grid; used for KS tests against densities known only up to a constant.
struct GridCdf {
  std::vector<double> xs, cdf;
  GridCdf(const std::function<double(double)>& log_density, double lo, double hi,
          int n = 20000) : xs(n), cdf(n) {
    double zlo = std::log(lo), zhi = std::log(hi);
    double dz = (zhi - zlo) / (n - 1);
    double acc = 0.0;
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
      double z = zlo + i * dz;
      double x = std::exp(z);
      double f = std::exp(log_density(x)) * x;  // Jacobian of z = log x
      if (i > 0) acc += 0.5 * (prev + f) * dz;
      prev = f;
      xs[i] = x;
      cdf[i] = acc;
    }
    for (double& c : cdf) c /= acc;
  }
  double operator()(double x) const {
    if (x <= xs.front()) return 0.0;
    if (x >= xs.back()) return 1.0;
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs.begin());
    double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return cdf[i - 1] + t * (cdf[i] - cdf[i - 1]);
  }
};

// AR(1) chain x_t = rho x_{t-1} + sqrt(1-rho^2) e_t, stationary N(0,1).
inline std::vector<double> ar1_chain(std::size_t n, double rho, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> norm(0.0, 1.0);
  std::vector<double> xs(n);
  double x = norm(gen);
  double s = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    x = rho * x + s * norm(gen);
    xs[i] = x;
  }
  return xs;
}

}  // namespace oracle
