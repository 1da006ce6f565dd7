#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tailblocks/estimators.hpp"
#include "tailblocks/oracle.hpp"
#include "tailblocks/simulate.hpp"

namespace tailblocks {

// Monte Carlo comparison of the sliding and disjoint estimators against the
// tail-process oracle: R independent replications with derived seeds, both
// estimators per functional, and the empirical law of sqrt(k) (nu_hat - nu).
struct ExperimentConfig {
  ProcessSpec process;  // length carries n; the seed field is ignored
  std::size_t block_len = 0;
  std::size_t k = 0;
  std::vector<FunctionalSpec> functionals;
  std::size_t replications = 0;
  std::uint64_t master_seed = 0;
  std::string out_path;              // empty = no file output
  std::string format = "json";      // json | csv
  std::size_t oracle_samples = 200000;
};

// flat key=value file; keys: process.kind, process.alpha, process.rho,
// process.b, n, r_n, k, functionals, replications, seed, out, format,
// oracle_samples
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig parse_experiment_config_file(const std::string& path);

struct ModeSummary {
  double mean = 0.0;
  double mean_se = 0.0;
  double variance = 0.0;
  double variance_se = 0.0;
};

struct ExperimentRow {
  FunctionalSpec functional;
  McValue oracle_nu;
  bool oracle_nu_analytic = false;
  McValue oracle_sigma2;
  ModeSummary sliding;
  ModeSummary disjoint;
  double variance_ratio = 0.0;  // sliding / disjoint
};

// for cluster-size functionals the conditional cluster-size probability is
// also tracked through the ratio nu_hat(H_m) / nu_hat(H_extremal)
struct ClusterSizeRatioRow {
  long m = 1;
  McValue oracle_pi;
  McValue clt_variance;  // pi (1 - 2 P(exc(Y)=m)) + pi^2 * Sigma
  ModeSummary sliding;
  ModeSummary disjoint;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::size_t replications_used = 0;
  std::size_t degenerate = 0;
  std::vector<ExperimentRow> rows;
  std::vector<ClusterSizeRatioRow> cluster_size_rows;
};

// workers = 0 resolves TAILBLOCKS_WORKERS, then hardware concurrency; the
// report bytes do not depend on the worker count
ExperimentReport run_experiment(const ExperimentConfig& config, unsigned workers = 0);

std::string report_to_json(const ExperimentReport& report);
std::string report_to_csv(const ExperimentReport& report);
void emit_report(const ExperimentReport& report, const std::string& format,
                 const std::string& path);

}  // namespace tailblocks
