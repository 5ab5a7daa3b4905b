#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "bhs/chib.hpp"
#include "bhs/diagnostics.hpp"
#include "oracle.hpp"

using bhs::RandomStream;
using bhs::SamplerConfig;

TEST_CASE("ESS of iid draws is close to the sample size") {
  auto xs = oracle::ar1_chain(100000, 0.0, 51);
  double prop = bhs::effective_sample_size(xs) / 100000.0;
  CHECK(prop > 0.97);
  CHECK(prop < 1.03);
}

TEST_CASE("ESS calibration on AR(1) chains: ESS/N -> (1-rho)/(1+rho)") {
  // rho = 0.5: truth 1/3
  auto a = oracle::ar1_chain(1000000, 0.5, 52);
  CHECK(bhs::effective_sample_size(a) / 1000000.0 ==
        doctest::Approx(1.0 / 3.0).epsilon(0.06));

  // rho = 0.9: truth 1/19
  auto b = oracle::ar1_chain(1000000, 0.9, 53);
  CHECK(bhs::effective_sample_size(b) / 1000000.0 ==
        doctest::Approx(1.0 / 19.0).epsilon(0.15));
}

TEST_CASE("ESS input validation") {
  std::vector<double> constant(500, 2.0);
  CHECK_THROWS_AS(bhs::effective_sample_size(constant), bhs::DegenerateInputError);
  std::vector<double> short_seq(50, 0.0);
  CHECK_THROWS_AS(bhs::effective_sample_size(short_seq), std::invalid_argument);
}

TEST_CASE("ESS proportion vs thinning follows AR(1) theory") {
  // thinning an AR(1) chain with rho leaves AR(1) with rho^t
  const int n = 400000;
  Eigen::MatrixXd draws(n, 1);
  auto xs = oracle::ar1_chain(n, 0.5, 54);
  for (int i = 0; i < n; ++i) draws(i, 0) = xs[static_cast<std::size_t>(i)];

  bhs::EssReport t1 = bhs::ess_report_for(draws, 1);
  bhs::EssReport t4 = bhs::ess_report_for(draws, 4);
  CHECK(t1.ess_proportion(0) == doctest::Approx(1.0 / 3.0).epsilon(0.08));
  // rho^4 = 0.0625, truth (1 - rho^4)/(1 + rho^4) ~ 0.882
  CHECK(t4.ess_proportion(0) == doctest::Approx(0.882).epsilon(0.08));
  CHECK(t4.ess_proportion(0) > t1.ess_proportion(0));

  CHECK_THROWS_AS(bhs::ess_report_for(draws, 0), std::invalid_argument);
  Eigen::MatrixXd tiny(150, 1);
  tiny.col(0) = draws.col(0).head(150);
  CHECK_THROWS_AS(bhs::ess_report_for(tiny, 2), std::invalid_argument);
}

TEST_CASE("ess_vs_thinning reports every requested level over a real chain") {
  std::mt19937_64 gen(55);
  std::normal_distribution<double> norm(0.0, 1.0);
  Eigen::MatrixXd X(60, 3);
  Eigen::VectorXd y(60);
  for (int i = 0; i < 60; ++i) {
    for (int j = 0; j < 3; ++j) X(i, j) = norm(gen);
    y(i) = 2.0 * X(i, 0) + norm(gen);
  }
  bhs::RegressionData data = bhs::standardize(X, y);
  SamplerConfig cfg;
  cfg.n_burn = 200;
  cfg.n_keep = 2000;
  cfg.seed = 56;
  bhs::ChainOutput chain = bhs::run_chain(data, cfg);

  std::vector<int> levels = {1, 2, 4};
  auto reports = bhs::ess_vs_thinning(chain, levels);
  REQUIRE(reports.size() == levels.size());
  for (std::size_t k = 0; k < reports.size(); ++k) {
    CHECK(reports[k].thin_level == levels[k]);
    CHECK(reports[k].per_coefficient_ess.size() == 3);
    for (int j = 0; j < 3; ++j) {
      CHECK(reports[k].ess_proportion(j) > 0.0);
      CHECK(reports[k].ess_proportion(j) < 1.3);
    }
  }
}

namespace {

bhs::RegressionData small_linear_data() {
  std::mt19937_64 gen(61);
  std::normal_distribution<double> norm(0.0, 1.0);
  Eigen::MatrixXd X(20, 3);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 3; ++j) X(i, j) = norm(gen);
    y(i) = 1.5 * X(i, 0) + 0.5 * norm(gen);
  }
  return bhs::standardize(X, y);
}

}  // namespace

TEST_CASE("Chib breakdown sums exactly to the reported log marginal") {
  bhs::RegressionData data = small_linear_data();
  SamplerConfig cfg;
  cfg.n_burn = 300;
  cfg.n_keep = 600;
  cfg.seed = 62;
  bhs::MarginalLikelihoodEstimate est = bhs::chib_marginal_likelihood(data, cfg);
  CHECK(est.n_reduced_runs == 3);
  CHECK(est.log_posterior_ordinate ==
        est.log_post_beta + est.log_post_sigma2 + est.log_post_lambda2 +
            est.log_post_tau2 + est.log_post_aux);
  CHECK(est.log_marginal == est.log_likelihood_ordinate + est.log_prior_ordinate -
                                est.log_posterior_ordinate);
  CHECK(std::isfinite(est.log_marginal));
  CHECK(est.mc_standard_error > 0.0);
}

TEST_CASE("Chib estimate is invariant to the ordinate point") {
  bhs::RegressionData data = small_linear_data();
  SamplerConfig cfg;
  cfg.n_burn = 500;
  cfg.n_keep = 4000;
  cfg.seed = 63;

  bhs::HsState at_mean = bhs::default_ordinate(data, cfg);
  bhs::MarginalLikelihoodEstimate a = bhs::chib_marginal_likelihood(data, cfg, at_mean);

  // a deliberately off-mean but plausible point
  bhs::HsState shifted = at_mean;
  shifted.beta *= 0.8;
  shifted.sigma2 *= 1.3;
  shifted.lambda2 *= 1.5;
  shifted.tau2 *= 0.7;
  bhs::MarginalLikelihoodEstimate b = bhs::chib_marginal_likelihood(data, cfg, shifted);

  double tol = 4.0 * std::hypot(a.mc_standard_error, b.mc_standard_error) + 0.05;
  CHECK(std::fabs(a.log_marginal - b.log_marginal) < tol);
}

TEST_CASE("Chib estimates from independent seeds agree within MC error") {
  bhs::RegressionData data = small_linear_data();
  SamplerConfig cfg;
  cfg.n_burn = 500;
  cfg.n_keep = 4000;
  cfg.seed = 64;
  bhs::MarginalLikelihoodEstimate a = bhs::chib_marginal_likelihood(data, cfg);
  cfg.seed = 65;
  bhs::MarginalLikelihoodEstimate b = bhs::chib_marginal_likelihood(data, cfg);
  double tol = 4.0 * std::hypot(a.mc_standard_error, b.mc_standard_error) + 0.05;
  CHECK(std::fabs(a.log_marginal - b.log_marginal) < tol);
}

TEST_CASE("Chib rejects unsupported prior configurations") {
  bhs::RegressionData data = small_linear_data();
  SamplerConfig cfg;
  cfg.n_burn = 10;
  cfg.n_keep = 10;
  cfg.prior_variant = bhs::PriorVariant::horseshoe_plus;
  CHECK_THROWS_AS(bhs::chib_marginal_likelihood(data, cfg), std::invalid_argument);
  cfg.prior_variant = bhs::PriorVariant::horseshoe;
  cfg.sigma_prior = bhs::SigmaPrior::half_cauchy;
  CHECK_THROWS_AS(bhs::chib_marginal_likelihood(data, cfg), std::invalid_argument);
}
