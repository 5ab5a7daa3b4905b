#include <doctest.h>

#include <Eigen/Dense>
#include <chrono>
#include <vector>

#include "bhs/gauss_sampler.hpp"
#include "bhs/rng.hpp"
#include "oracle.hpp"

using bhs::BackendPolicy;
using bhs::GaussBackend;
using bhs::GaussCondSpec;
using bhs::RandomStream;

namespace {

GaussCondSpec random_spec(int n, int p, RandomStream& rng, double prec_lo = 0.1,
                          double prec_hi = 10.0) {
  GaussCondSpec spec;
  spec.design.resize(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) spec.design(i, j) = rng.normal();
  }
  spec.weighted_response.resize(p);
  spec.prior_precision_diag.resize(p);
  for (int j = 0; j < p; ++j) {
    spec.weighted_response(j) = rng.normal();
    spec.prior_precision_diag(j) = prec_lo + (prec_hi - prec_lo) * rng.uniform();
  }
  spec.noise_variance = 0.5 + rng.uniform();
  return spec;
}

struct DenseOracle {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// direct dense inversion, independent of the Cholesky draw path
DenseOracle dense_moments(const GaussCondSpec& spec) {
  Eigen::MatrixXd a = spec.design.transpose() * spec.design;
  a.diagonal() += spec.prior_precision_diag;
  Eigen::MatrixXd ainv = a.fullPivLu().inverse();
  return {ainv * spec.weighted_response, spec.noise_variance * ainv};
}

}  // namespace

TEST_CASE("backend selection follows the n > p rule") {
  CHECK(bhs::select_backend(1000, 10) == GaussBackend::rue);
  CHECK(bhs::select_backend(10, 1000) == GaussBackend::fast);
  CHECK(bhs::select_backend(50, 50) == GaussBackend::fast);
  CHECK(bhs::select_backend(10, 1000, BackendPolicy::force_rue) == GaussBackend::rue);
  CHECK(bhs::select_backend(1000, 10, BackendPolicy::force_fast) == GaussBackend::fast);
}

TEST_CASE("ridge limit: vanishing prior precision recovers least squares") {
  const int p = 5;
  GaussCondSpec spec;
  spec.design = Eigen::MatrixXd::Identity(p, p);
  spec.weighted_response = Eigen::VectorXd::LinSpaced(p, -2.0, 2.0);
  spec.prior_precision_diag = Eigen::VectorXd::Constant(p, 1e-12);
  spec.noise_variance = 1.0;

  DenseOracle oracle = dense_moments(spec);
  CHECK((oracle.mean - spec.weighted_response).cwiseAbs().maxCoeff() < 1e-6);

  RandomStream rng(5);
  const int ndraw = 100000;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(p);
  for (int k = 0; k < ndraw; ++k) acc += bhs::sample_beta_rue(spec, rng);
  acc /= ndraw;
  double se = std::sqrt(1.0 / ndraw);  // unit posterior variance per coordinate
  CHECK((acc - spec.weighted_response).cwiseAbs().maxCoeff() < 4.0 * se);
}

TEST_CASE("infinite-shrinkage limit concentrates draws at zero") {
  GaussCondSpec spec;
  spec.design = Eigen::MatrixXd::Identity(3, 3);
  spec.weighted_response = Eigen::VectorXd::Constant(3, 5.0);
  spec.prior_precision_diag = Eigen::VectorXd::Constant(3, 1e12);
  spec.noise_variance = 2.0;

  RandomStream rng(6);
  std::vector<double> first(20000);
  for (auto& x : first) x = bhs::sample_beta_rue(spec, rng)(0);
  CHECK(std::fabs(oracle::mean(first)) < 1e-4);
  CHECK(oracle::variance(first) == doctest::Approx(2.0 / 1e12).epsilon(0.1));
}

TEST_CASE("Rue draws match dense-oracle moments at p=2") {
  RandomStream setup(7);
  GaussCondSpec spec = random_spec(6, 2, setup);
  DenseOracle expect = dense_moments(spec);

  RandomStream rng(8);
  const int ndraw = 200000;
  std::vector<std::vector<double>> draws(2, std::vector<double>(ndraw));
  for (int k = 0; k < ndraw; ++k) {
    Eigen::VectorXd b = bhs::sample_beta_rue(spec, rng);
    draws[0][k] = b(0);
    draws[1][k] = b(1);
  }
  for (int j = 0; j < 2; ++j) {
    double se = std::sqrt(expect.cov(j, j) / ndraw);
    CHECK(std::fabs(oracle::mean(draws[j]) - expect.mean(j)) < 3.0 * se);
    CHECK(oracle::variance(draws[j]) == doctest::Approx(expect.cov(j, j)).epsilon(0.03));
  }
  // cross-covariance
  double m0 = oracle::mean(draws[0]), m1 = oracle::mean(draws[1]);
  double c01 = 0.0;
  for (int k = 0; k < ndraw; ++k) c01 += (draws[0][k] - m0) * (draws[1][k] - m1);
  c01 /= ndraw - 1;
  double se01 = std::sqrt((expect.cov(0, 0) * expect.cov(1, 1) +
                           expect.cov(0, 1) * expect.cov(0, 1)) / ndraw);
  CHECK(std::fabs(c01 - expect.cov(0, 1)) < 4.0 * se01);
}

TEST_CASE("fast sampler matches Rue at p=2 and the dense oracle at p >> n") {
  RandomStream setup(9);
  GaussCondSpec spec = random_spec(6, 2, setup);
  DenseOracle expect = dense_moments(spec);

  RandomStream rng(10);
  const int ndraw = 200000;
  for (int j = 0; j < 2; ++j) {
    std::vector<double> fast(ndraw);
    RandomStream r2 = rng.split(j);
    for (int k = 0; k < ndraw; ++k) fast[k] = bhs::sample_beta_fast(spec, r2)(j);
    double se = std::sqrt(expect.cov(j, j) / ndraw);
    CHECK(std::fabs(oracle::mean(fast) - expect.mean(j)) < 3.0 * se);
    CHECK(oracle::variance(fast) == doctest::Approx(expect.cov(j, j)).epsilon(0.03));
  }

  // n=5, p=200: per-coordinate mean against the dense oracle
  RandomStream setup2(11);
  GaussCondSpec wide = random_spec(5, 200, setup2, 0.5, 2.0);
  DenseOracle expect2 = dense_moments(wide);
  const int ndraw2 = 30000;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(200);
  RandomStream r3(12);
  for (int k = 0; k < ndraw2; ++k) acc += bhs::sample_beta_fast(wide, r3);
  acc /= ndraw2;
  for (int j = 0; j < 200; ++j) {
    double se = std::sqrt(expect2.cov(j, j) / ndraw2);
    CHECK(std::fabs(acc(j) - expect2.mean(j)) < 4.0 * se);
  }
}

TEST_CASE("fast sampler with zero weighted response is centred at zero") {
  RandomStream setup(13);
  GaussCondSpec spec = random_spec(4, 30, setup);
  spec.weighted_response.setZero();
  RandomStream rng(14);
  const int ndraw = 50000;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(30);
  for (int k = 0; k < ndraw; ++k) acc += bhs::sample_beta_fast(spec, rng);
  acc /= ndraw;
  for (int j = 0; j < 30; ++j) {
    double sd = std::sqrt(1.0 / spec.prior_precision_diag(j));
    CHECK(std::fabs(acc(j)) < 4.0 * sd / std::sqrt(static_cast<double>(ndraw)));
  }
}

TEST_CASE("draws reproduce exactly under identical stream state") {
  RandomStream setup(15);
  GaussCondSpec spec = random_spec(8, 4, setup);
  RandomStream a(16), b(16);
  CHECK(bhs::sample_beta_rue(spec, a) == bhs::sample_beta_rue(spec, b));
  CHECK(bhs::sample_beta_fast(spec, a) == bhs::sample_beta_fast(spec, b));
}

TEST_CASE("invalid specs are rejected") {
  GaussCondSpec spec;
  spec.design = Eigen::MatrixXd::Identity(2, 2);
  spec.weighted_response = Eigen::VectorXd::Zero(2);
  spec.prior_precision_diag = Eigen::VectorXd::Zero(2);  // not positive
  RandomStream rng(17);
  CHECK_THROWS_AS(bhs::sample_beta_rue(spec, rng), std::invalid_argument);
  spec.prior_precision_diag = Eigen::VectorXd::Ones(3);  // wrong length
  CHECK_THROWS_AS(bhs::sample_beta_fast(spec, rng), std::invalid_argument);
}

TEST_CASE("fast sampler cost grows roughly linearly in p") {
  const int n = 10;
  std::vector<int> ps = {100, 200, 400, 800};
  std::vector<double> secs;
  RandomStream setup(18);
  for (int p : ps) {
    GaussCondSpec spec = random_spec(n, p, setup, 0.5, 2.0);
    RandomStream rng(19);
    // warm-up
    for (int k = 0; k < 20; ++k) bhs::sample_beta_fast(spec, rng);
    std::vector<double> reps;
    for (int r = 0; r < 5; ++r) {
      auto t0 = std::chrono::steady_clock::now();
      for (int k = 0; k < 250; ++k) bhs::sample_beta_fast(spec, rng);
      reps.push_back(std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0).count());
    }
    secs.push_back(*std::min_element(reps.begin(), reps.end()));
  }
  for (std::size_t i = 1; i < secs.size(); ++i) {
    CHECK(secs[i] / secs[i - 1] < 2.5);  // doubling p at most ~doubles cost
  }
}
