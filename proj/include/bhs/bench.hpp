// Timing harness over an (n, p) grid: standard-normal synthetic data, a
// fixed number of posterior samples per cell (no burn-in discount), median
// wall clock over repetitions.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <fstream>
#include <limits>
#include <vector>

#include "bhs/linear.hpp"
#include "bhs/rng.hpp"

namespace bhs {

struct BenchGrid {
  std::vector<int> n_values;
  std::vector<int> p_values;
  int n_iterations = 1000;
  int repetitions = 1;
  std::uint64_t seed = 1;
};

struct BenchResult {
  BenchGrid grid;
  // seconds, n_values.size() x p_values.size(); NaN marks a failed cell
  Eigen::MatrixXd seconds;
};

inline RegressionData synthetic_normal_data(int n, int p, RandomStream& rng) {
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
    y(i) = rng.normal();
  }
  return standardize(std::move(x), std::move(y));
}

inline BenchResult run_bench(const BenchGrid& grid) {
  if (grid.n_values.empty() || grid.p_values.empty() || grid.n_iterations < 1 ||
      grid.repetitions < 1) {
    throw std::invalid_argument("invalid benchmark grid");
  }
  BenchResult res;
  res.grid = grid;
  res.seconds.resize(static_cast<Eigen::Index>(grid.n_values.size()),
                     static_cast<Eigen::Index>(grid.p_values.size()));
  RandomStream root(grid.seed);
  for (std::size_t i = 0; i < grid.n_values.size(); ++i) {
    for (std::size_t j = 0; j < grid.p_values.size(); ++j) {
      std::vector<double> times;
      try {
        RandomStream rng = root.split(i * 1000 + j);
        RegressionData data =
            synthetic_normal_data(grid.n_values[i], grid.p_values[j], rng);
        for (int r = 0; r < grid.repetitions; ++r) {
          SamplerConfig cfg;
          cfg.n_burn = 0;
          cfg.n_keep = grid.n_iterations;
          cfg.seed = grid.seed + r;
          times.push_back(run_chain(data, cfg).wall_clock_seconds);
        }
      } catch (const std::bad_alloc&) {
        res.seconds(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      std::sort(times.begin(), times.end());
      res.seconds(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          times[times.size() / 2];
    }
  }
  return res;
}

// Wide CSV mirroring the timing-table layout: one row per n, one column per p.
inline void write_bench_csv(const std::string& path, const BenchResult& res) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "n";
  for (int p : res.grid.p_values) out << ",p" << p;
  out << '\n';
  for (std::size_t i = 0; i < res.grid.n_values.size(); ++i) {
    out << res.grid.n_values[i];
    for (std::size_t j = 0; j < res.grid.p_values.size(); ++j) {
      double s = res.seconds(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (std::isnan(s)) {
        out << ",failed";
      } else {
        out << ',' << s;
      }
    }
    out << '\n';
  }
}

}  // namespace bhs
