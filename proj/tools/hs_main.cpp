// Batch front end: `hs run`, `hs bench`, `hs ess`, `hs evidence`.
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bhs/bench.hpp"
#include "bhs/chib.hpp"
#include "bhs/diagnostics.hpp"
#include "bhs/glm.hpp"
#include "bhs/io.hpp"
#include "bhs/linear.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

void emit_error(const std::string& kind, const std::string& message) {
  json err{{"error", kind}, {"message", message}};
  std::cerr << err.dump() << "\n";
}

// FNV-1a over the raw input bytes; recorded in run metadata.
std::string content_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

struct ChainFlags {
  std::string input;
  std::string family = "linear";
  double h = 1.0;
  std::string prior = "horseshoe";
  std::string sigma_prior = "jeffreys";
  std::string backend = "auto";
  int burn = 1000;
  int keep = 1000;
  int thin = 1;
  std::uint64_t seed = 1;
  std::string config_path;
};

void add_chain_flags(CLI::App* cmd, ChainFlags& f) {
  // long-form help only; the default -h short flag would collide with --h
  cmd->set_help_flag("--help", "print help and exit");
  cmd->add_option("--input", f.input, "input CSV (header row, response last)")
      ->required();
  cmd->add_option("--family", f.family, "linear|logistic|negbin");
  cmd->add_option("--h", f.h, "negative-binomial dispersion (fixed)");
  cmd->add_option("--prior", f.prior, "horseshoe|horseshoe_plus");
  cmd->add_option("--sigma-prior", f.sigma_prior, "jeffreys|half-cauchy");
  cmd->add_option("--backend", f.backend, "auto|rue|fast");
  cmd->add_option("--burn", f.burn, "burn-in sweeps");
  cmd->add_option("--keep", f.keep, "retained draws");
  cmd->add_option("--thin", f.thin, "thinning interval");
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--config", f.config_path, "JSON config file (flags win)");
}

// Precedence: explicit flags > JSON config > built-in defaults.
void apply_config_file(const CLI::App* cmd, ChainFlags& f) {
  if (f.config_path.empty()) return;
  std::ifstream in(f.config_path);
  if (!in) throw std::invalid_argument("cannot open config '" + f.config_path + "'");
  json cfg = json::parse(in);
  auto maybe = [&](const char* flag, const char* key, auto& field) {
    if (cmd->count(flag) == 0 && cfg.contains(key)) {
      field = cfg.at(key).template get<std::decay_t<decltype(field)>>();
    }
  };
  maybe("--family", "family", f.family);
  maybe("--h", "h", f.h);
  maybe("--prior", "prior", f.prior);
  maybe("--sigma-prior", "sigma_prior", f.sigma_prior);
  maybe("--backend", "backend", f.backend);
  maybe("--burn", "burn", f.burn);
  maybe("--keep", "keep", f.keep);
  maybe("--thin", "thin", f.thin);
  maybe("--seed", "seed", f.seed);
}

bhs::SamplerConfig to_sampler_config(const ChainFlags& f) {
  bhs::SamplerConfig cfg;
  cfg.n_burn = f.burn;
  cfg.n_keep = f.keep;
  cfg.thin = f.thin;
  cfg.seed = f.seed;
  if (f.prior == "horseshoe") {
    cfg.prior_variant = bhs::PriorVariant::horseshoe;
  } else if (f.prior == "horseshoe_plus") {
    cfg.prior_variant = bhs::PriorVariant::horseshoe_plus;
  } else {
    throw CLI::ValidationError("--prior", "unknown prior '" + f.prior + "'");
  }
  if (f.sigma_prior == "jeffreys") {
    cfg.sigma_prior = bhs::SigmaPrior::jeffreys;
  } else if (f.sigma_prior == "half-cauchy") {
    cfg.sigma_prior = bhs::SigmaPrior::half_cauchy;
  } else {
    throw CLI::ValidationError("--sigma-prior",
                               "unknown sigma prior '" + f.sigma_prior + "'");
  }
  if (f.backend == "auto") {
    cfg.backend_policy = bhs::BackendPolicy::automatic;
  } else if (f.backend == "rue") {
    cfg.backend_policy = bhs::BackendPolicy::force_rue;
  } else if (f.backend == "fast") {
    cfg.backend_policy = bhs::BackendPolicy::force_fast;
  } else {
    throw CLI::ValidationError("--backend", "unknown backend '" + f.backend + "'");
  }
  return cfg;
}

json config_to_json(const ChainFlags& f) {
  return json{{"family", f.family},       {"h", f.h},
              {"prior", f.prior},         {"sigma_prior", f.sigma_prior},
              {"backend", f.backend},     {"burn", f.burn},
              {"keep", f.keep},           {"thin", f.thin},
              {"seed", f.seed}};
}

int cmd_run(const CLI::App* cmd, ChainFlags& f, const std::string& out_dir) {
  apply_config_file(cmd, f);
  if (f.family != "linear" && f.family != "logistic" && f.family != "negbin") {
    emit_error("usage", "unknown family '" + f.family + "'");
    return kExitUsage;
  }
  bhs::SamplerConfig cfg = to_sampler_config(f);

  fs::create_directories(out_dir);
  std::vector<std::string> names = bhs::csv_predictor_names(f.input);

  bhs::ChainOutput chain;
  if (f.family == "linear") {
    chain = bhs::run_chain(bhs::load_csv_linear(f.input), cfg);
  } else {
    bhs::GlmFamily family = (f.family == "logistic") ? bhs::GlmFamily::logistic
                                                     : bhs::GlmFamily::negbin;
    chain = bhs::run_chain_glm(bhs::load_csv_glm(f.input, family, f.h), cfg, family);
    names.insert(names.begin(), "intercept");
  }

  // draws file: coefficient columns then sigma2, tau2
  Eigen::MatrixXd draws(chain.beta_draws.rows(), chain.beta_draws.cols() + 2);
  draws.leftCols(chain.beta_draws.cols()) = chain.beta_draws;
  draws.col(draws.cols() - 2) = chain.sigma2_draws;
  draws.col(draws.cols() - 1) = chain.tau2_draws;
  std::vector<std::string> cols = names;
  cols.push_back("sigma2");
  cols.push_back("tau2");
  bhs::write_draws_csv(out_dir + "/draws.csv", draws, cols);

  json diag;
  diag["wall_clock_seconds"] = chain.wall_clock_seconds;
  bhs::EssReport ess = bhs::ess_report_for(chain.beta_draws, 1);
  for (Eigen::Index j = 0; j < ess.per_coefficient_ess.size(); ++j) {
    diag["ess"][names[static_cast<std::size_t>(j)]] = ess.per_coefficient_ess(j);
    diag["ess_proportion"][names[static_cast<std::size_t>(j)]] = ess.ess_proportion(j);
  }
  std::ofstream(out_dir + "/diagnostics.json") << diag.dump(2) << "\n";

  json meta;
  meta["config"] = config_to_json(f);
  meta["input"] = f.input;
  meta["input_hash"] = content_hash(f.input);
  std::ofstream(out_dir + "/run_meta.json") << meta.dump(2) << "\n";
  return kExitOk;
}

int cmd_bench(const std::string& n_list, const std::string& p_list, int iters,
              int reps, std::uint64_t seed, const std::string& out_csv) {
  bhs::BenchGrid grid;
  grid.n_values = parse_int_list(n_list);
  grid.p_values = parse_int_list(p_list);
  grid.n_iterations = iters;
  grid.repetitions = reps;
  grid.seed = seed;
  bhs::BenchResult res = bhs::run_bench(grid);
  bhs::write_bench_csv(out_csv, res);
  return kExitOk;
}

int cmd_ess(const std::string& draws_path, const std::string& thin_list,
            const std::string& out_csv) {
  Eigen::MatrixXd draws;
  std::vector<std::string> names;
  if (draws_path.size() > 4 && draws_path.substr(draws_path.size() - 4) == ".bin") {
    draws = bhs::read_draws_binary(draws_path);
    for (Eigen::Index j = 0; j < draws.cols(); ++j) names.push_back("c" + std::to_string(j));
  } else {
    bhs::CsvTable t = bhs::read_csv(draws_path);
    draws = t.values;
    names = t.header;
  }
  std::vector<int> levels = parse_int_list(thin_list);

  std::ofstream out(out_csv);
  if (!out) throw std::runtime_error("cannot write '" + out_csv + "'");
  out << "coefficient,thin,ess,ess_proportion\n";
  for (int t : levels) {
    bhs::EssReport rep = bhs::ess_report_for(draws, t);
    for (Eigen::Index j = 0; j < draws.cols(); ++j) {
      out << names[static_cast<std::size_t>(j)] << ',' << t << ','
          << rep.per_coefficient_ess(j) << ',' << rep.ess_proportion(j) << '\n';
    }
  }
  return kExitOk;
}

int cmd_evidence(const CLI::App* cmd, ChainFlags& f, const std::string& out_json) {
  apply_config_file(cmd, f);
  if (f.family != "linear") {
    emit_error("usage", "evidence supports the linear family");
    return kExitUsage;
  }
  bhs::SamplerConfig cfg = to_sampler_config(f);
  bhs::RegressionData data = bhs::load_csv_linear(f.input);
  bhs::MarginalLikelihoodEstimate est = bhs::chib_marginal_likelihood(data, cfg);
  json j;
  j["log_marginal"] = est.log_marginal;
  j["log_likelihood_ordinate"] = est.log_likelihood_ordinate;
  j["log_prior_ordinate"] = est.log_prior_ordinate;
  j["log_posterior_ordinate"] = est.log_posterior_ordinate;
  j["ordinate_breakdown"] = {{"beta", est.log_post_beta},
                             {"sigma2", est.log_post_sigma2},
                             {"lambda2", est.log_post_lambda2},
                             {"tau2", est.log_post_tau2},
                             {"nu_xi", est.log_post_aux}};
  j["mc_standard_error"] = est.mc_standard_error;
  j["n_reduced_runs"] = est.n_reduced_runs;
  std::ofstream(out_json) << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian horseshoe regression sampler"};
  app.require_subcommand(1);

  ChainFlags run_flags;
  std::string run_out;
  CLI::App* run = app.add_subcommand("run", "sample a posterior chain");
  add_chain_flags(run, run_flags);
  run->add_option("--out", run_out, "output directory")->required();

  std::string bench_n = "10,50,100,500,1000";
  std::string bench_p = "10,50,100,500,1000";
  int bench_iters = 1000, bench_reps = 1;
  std::uint64_t bench_seed = 1;
  std::string bench_out;
  CLI::App* bench = app.add_subcommand("bench", "timing grid over (n, p)");
  bench->add_option("--n", bench_n, "sample sizes, comma separated");
  bench->add_option("--p", bench_p, "predictor counts, comma separated");
  bench->add_option("--iters", bench_iters, "posterior samples per cell");
  bench->add_option("--reps", bench_reps, "repetitions (median reported)");
  bench->add_option("--seed", bench_seed, "RNG seed");
  bench->add_option("--out", bench_out, "output CSV")->required();

  std::string ess_draws, ess_thin = "1,2,4,8,16", ess_out;
  CLI::App* ess = app.add_subcommand("ess", "ESS vs thinning report");
  ess->add_option("--draws", ess_draws, "draws file (.csv or .bin)")->required();
  ess->add_option("--thin", ess_thin, "thin levels, comma separated");
  ess->add_option("--out", ess_out, "output CSV")->required();

  ChainFlags ev_flags;
  std::string ev_out;
  CLI::App* evidence = app.add_subcommand("evidence", "Chib marginal likelihood");
  add_chain_flags(evidence, ev_flags);
  evidence->add_option("--out", ev_out, "output JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    emit_error("usage", e.what());
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(run, run_flags, run_out);
    if (bench->parsed()) {
      return cmd_bench(bench_n, bench_p, bench_iters, bench_reps, bench_seed, bench_out);
    }
    if (ess->parsed()) return cmd_ess(ess_draws, ess_thin, ess_out);
    if (evidence->parsed()) return cmd_evidence(evidence, ev_flags, ev_out);
  } catch (const CLI::ValidationError& e) {
    emit_error("usage", e.what());
    return kExitUsage;
  } catch (const bhs::ParseError& e) {
    emit_error("data", e.what());
    return kExitData;
  } catch (const bhs::NumericalError& e) {
    emit_error("numerical", e.what());
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    emit_error("data", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return kExitNumerical;
  }
  return kExitUsage;
}
