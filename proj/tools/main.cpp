// tailblocks command line: simulate heavy-tailed series, estimate cluster
// indices with sliding/disjoint blocks, run condition diagnostics, query the
// tail-process oracle, and drive replication experiments.
//
// Built on the C API only.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tailblocks.h"

namespace {

struct StringGuard {
  char* s = nullptr;
  ~StringGuard() { tb_string_free(s); }
};

struct SeriesGuard {
  tb_series* s = nullptr;
  ~SeriesGuard() { tb_series_destroy(s); }
};

struct ModelGuard {
  tb_model* m = nullptr;
  ~ModelGuard() { tb_model_destroy(m); }
};

int die(tb_status status) {
  std::cerr << "error (" << tb_status_name(status) << "): " << tb_last_error() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sliding and disjoint blocks estimation of cluster indices for "
               "heavy-tailed time series"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a heavy-tailed series as CSV");
  std::string sim_process = "iid:alpha=1";
  std::size_t sim_n = 10000;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  sim->add_option("--process", sim_process, "iid:alpha=A | ar1:rho=R,alpha=A | ma1:b=B,alpha=A")
      ->required();
  sim->add_option("--n", sim_n, "series length")->required();
  sim->add_option("--seed", sim_seed, "generator seed");
  sim->add_option("--out", sim_out, "output CSV path (default stdout)");

  // estimate
  auto* est = app.add_subcommand("estimate", "blocks estimate of a cluster index");
  std::string est_input, est_functional, est_mode = "sliding", est_norm = "euclidean";
  std::size_t est_r = 0, est_k = 0;
  double est_c = 0.0, est_p = 0.0;
  est->add_option("--input", est_input, "input CSV")->required();
  est->add_option("--functional", est_functional,
                  "exc | extremal | cluster-size:m=M | stop-loss:eta=E | large-dev | ruin")
      ->required();
  est->add_option("--r", est_r, "block length r_n")->required();
  est->add_option("--k", est_k, "number of upper order statistics");
  est->add_option("--mode", est_mode, "sliding | disjoint | sliding-pseudo | sliding-quasi");
  est->add_option("--c", est_c, "known threshold (pseudo/quasi modes)");
  est->add_option("--p", est_p, "known tail probability (pseudo mode)");
  est->add_option("--norm", est_norm, "euclidean | sup | l1");

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "empirical condition diagnostics (CSV table)");
  std::string diag_input, diag_kind, diag_norm = "euclidean";
  double diag_c = 0.0, diag_x = 1.0, diag_y = 1.0, diag_s = 1.0, diag_t = 1.0, diag_eta = 1.0;
  std::size_t diag_r = 0;
  std::vector<std::size_t> diag_lags;
  std::vector<double> diag_eps;
  diag->add_option("--input", diag_input, "input CSV")->required();
  diag->add_option("--kind", diag_kind, "dh | s | ansjb")->required();
  diag->add_option("--c", diag_c, "base threshold")->required();
  diag->add_option("--r", diag_r, "block length r_n")->required();
  diag->add_option("--x", diag_x, "dh: exceedance scale");
  diag->add_option("--y", diag_y, "dh: anchor scale");
  diag->add_option("--s", diag_s, "s-condition: first scale");
  diag->add_option("--t", diag_t, "s-condition: second scale");
  diag->add_option("--eta", diag_eta, "ansjb: eta");
  diag->add_option("--grid", diag_lags, "integer grid (dh lags / s-condition m values)");
  diag->add_option("--eps-grid", diag_eps, "ansjb epsilon grid in (0,1]");
  diag->add_option("--norm", diag_norm, "euclidean | sup | l1");

  // oracle
  auto* orc = app.add_subcommand("oracle", "tail-process oracle report (JSON)");
  std::string orc_model;
  std::uint64_t orc_samples = 100000, orc_seed = 1;
  orc->add_option("--model", orc_model, "iid:alpha=A | ar1:rho=R,alpha=A | ma1:b=B,alpha=A")
      ->required();
  orc->add_option("--samples", orc_samples, "Monte Carlo samples");
  orc->add_option("--seed", orc_seed, "Monte Carlo seed");

  // experiment
  auto* exp = app.add_subcommand("experiment", "replication study from a config file");
  std::string exp_config;
  unsigned exp_workers = 0;
  bool exp_quiet = false;
  exp->add_option("--config", exp_config, "flat key=value config file")->required();
  exp->add_option("--workers", exp_workers,
                  "worker threads (default: TAILBLOCKS_WORKERS, then hardware)");
  exp->add_flag("--quiet", exp_quiet, "suppress the report on stdout");

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) {
    SeriesGuard series;
    if (auto st = tb_simulate(sim_process.c_str(), sim_n, sim_seed, &series.s)) return die(st);
    if (sim_out.empty()) {
      // stream through a temp-free path: write to stdout via the CSV writer
      std::string tmp = "/dev/stdout";
      if (auto st = tb_series_write_csv(series.s, tmp.c_str())) return die(st);
    } else {
      if (auto st = tb_series_write_csv(series.s, sim_out.c_str())) return die(st);
    }
    return 0;
  }

  if (est->parsed()) {
    SeriesGuard series;
    if (auto st = tb_series_read_csv(est_input.c_str(), est_norm.c_str(), &series.s))
      return die(st);
    StringGuard json;
    tb_status st = TB_OK;
    if (est_mode == "sliding" || est_mode == "disjoint") {
      if (est_k == 0) {
        std::cerr << "error: --k is required for order-statistic modes\n";
        return 1;
      }
      st = tb_estimate(series.s, est_functional.c_str(), est_r, est_k, est_mode.c_str(), &json.s);
    } else if (est_mode == "sliding-pseudo") {
      st = tb_estimate_pseudo(series.s, est_functional.c_str(), est_r, est_c, est_p, &json.s);
    } else if (est_mode == "sliding-quasi") {
      st = tb_estimate_quasi(series.s, est_functional.c_str(), est_r, est_c, &json.s);
    } else {
      std::cerr << "error: unknown mode " << est_mode << "\n";
      return 1;
    }
    if (st) return die(st);
    std::cout << json.s;
    return 0;
  }

  if (diag->parsed()) {
    SeriesGuard series;
    if (auto st = tb_series_read_csv(diag_input.c_str(), diag_norm.c_str(), &series.s))
      return die(st);
    StringGuard csv;
    tb_status st = TB_OK;
    if (diag_kind == "dh") {
      std::vector<std::size_t> grid = diag_lags;
      if (grid.empty())
        for (std::size_t k = 1; k <= diag_r; ++k) grid.push_back(k);
      st = tb_diagnose_dh(series.s, diag_c, diag_x, diag_y, diag_r, grid.data(), grid.size(),
                          &csv.s);
    } else if (diag_kind == "s") {
      std::vector<std::size_t> grid = diag_lags;
      if (grid.empty())
        for (std::size_t m = 1; m <= diag_r + 1; ++m) grid.push_back(m);
      st = tb_diagnose_s(series.s, diag_c, diag_s, diag_t, diag_r, grid.data(), grid.size(),
                         &csv.s);
    } else if (diag_kind == "ansjb") {
      std::vector<double> grid = diag_eps;
      if (grid.empty()) grid = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
      st = tb_diagnose_ansjb(series.s, diag_c, diag_eta, diag_r, grid.data(), grid.size(),
                             &csv.s);
    } else {
      std::cerr << "error: unknown diagnostic kind " << diag_kind << "\n";
      return 1;
    }
    if (st) return die(st);
    std::cout << csv.s;
    return 0;
  }

  if (orc->parsed()) {
    ModelGuard model;
    if (auto st = tb_model_create(orc_model.c_str(), &model.m)) return die(st);
    StringGuard json;
    if (auto st = tb_oracle_report(model.m, orc_samples, orc_seed, &json.s)) return die(st);
    std::cout << json.s;
    return 0;
  }

  if (exp->parsed()) {
    StringGuard json;
    if (auto st = tb_experiment_run(exp_config.c_str(), exp_workers, &json.s)) return die(st);
    if (!exp_quiet) std::cout << json.s;
    return 0;
  }

  return 0;
}
