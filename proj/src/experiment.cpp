#include "tailblocks/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "jsonfmt.hpp"
#include "tailblocks/error.hpp"

namespace tailblocks {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& val) {
  char* end = nullptr;
  unsigned long long v = std::strtoull(val.c_str(), &end, 10);
  if (end == val.c_str() || *end != '\0')
    fail(ErrorCode::ParseError, "bad integer for " + key + ": " + val);
  return v;
}

double parse_f64(const std::string& key, const std::string& val) {
  char* end = nullptr;
  double v = std::strtod(val.c_str(), &end);
  if (end == val.c_str() || *end != '\0')
    fail(ErrorCode::ParseError, "bad number for " + key + ": " + val);
  return v;
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TAILBLOCKS_WORKERS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 256) return unsigned(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

ModeSummary summarize(const std::vector<double>& z) {
  ModeSummary s;
  const std::size_t n = z.size();
  if (n < 2) fail(ErrorCode::InvalidArgument, "need at least 2 usable replications");
  double sum = 0.0;
  for (double v : z) sum += v;
  const double mean = sum / double(n);
  double ss = 0.0;
  for (double v : z) ss += (v - mean) * (v - mean);
  const double var = ss / double(n - 1);
  s.mean = mean;
  s.variance = var;
  s.mean_se = std::sqrt(var / double(n));
  s.variance_se = var * std::sqrt(2.0 / double(n - 1));
  return s;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig cfg;
  cfg.process.kind = ProcessKind::IidPareto;
  std::string line;
  bool have_kind = false, have_n = false, have_r = false, have_k = false, have_f = false,
       have_reps = false;
  double ma_b = 0.0;
  bool have_b = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::ParseError, "expected key = value at line " + std::to_string(line_no));
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key == "process.kind") {
      if (val == "iid")
        cfg.process.kind = ProcessKind::IidPareto;
      else if (val == "ar1")
        cfg.process.kind = ProcessKind::Ar1;
      else if (val == "ma1")
        cfg.process.kind = ProcessKind::Ma;
      else
        fail(ErrorCode::ParseError, "unknown process.kind: " + val);
      have_kind = true;
    } else if (key == "process.alpha") {
      cfg.process.alpha = parse_f64(key, val);
    } else if (key == "process.rho") {
      cfg.process.rho = parse_f64(key, val);
    } else if (key == "process.b") {
      ma_b = parse_f64(key, val);
      have_b = true;
    } else if (key == "n") {
      cfg.process.length = parse_u64(key, val);
      have_n = true;
    } else if (key == "r_n") {
      cfg.block_len = parse_u64(key, val);
      have_r = true;
    } else if (key == "k") {
      cfg.k = parse_u64(key, val);
      have_k = true;
    } else if (key == "functionals") {
      // comma-separated; each shipped grammar item carries at most one
      // parameter, so commas always separate functionals
      std::size_t start = 0;
      while (start <= val.size()) {
        auto comma = val.find(',', start);
        if (comma == std::string::npos) comma = val.size();
        std::string item = trim(val.substr(start, comma - start));
        if (!item.empty()) cfg.functionals.push_back(parse_functional(item));
        start = comma + 1;
      }
      have_f = true;
    } else if (key == "replications") {
      cfg.replications = parse_u64(key, val);
      have_reps = true;
    } else if (key == "seed") {
      cfg.master_seed = parse_u64(key, val);
    } else if (key == "out") {
      cfg.out_path = val;
    } else if (key == "format") {
      if (val != "json" && val != "csv") fail(ErrorCode::ParseError, "format must be json or csv");
      cfg.format = val;
    } else if (key == "oracle_samples") {
      cfg.oracle_samples = parse_u64(key, val);
    } else {
      fail(ErrorCode::ParseError, "unknown config key: " + key);
    }
  }
  if (!have_kind || !have_n || !have_r || !have_k || !have_f || !have_reps)
    fail(ErrorCode::ParseError,
         "config requires process.kind, n, r_n, k, functionals, replications");
  if (cfg.process.kind == ProcessKind::Ma) {
    if (!have_b) fail(ErrorCode::ParseError, "ma1 requires process.b");
    cfg.process.coeffs = {1.0, ma_b};
  }
  if (cfg.replications < 2) fail(ErrorCode::InvalidArgument, "replications must be >= 2");
  validate_scheme(cfg.process.length, cfg.block_len, cfg.k);
  return cfg;
}

ExperimentConfig parse_experiment_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  return parse_experiment_config(in);
}

ExperimentReport run_experiment(const ExperimentConfig& config, unsigned workers) {
  if (config.replications < 2) fail(ErrorCode::InvalidArgument, "replications must be >= 2");
  if (config.functionals.empty()) fail(ErrorCode::InvalidArgument, "no functionals requested");
  const BlockScheme scheme =
      validate_scheme(config.process.length, config.block_len, config.k);

  TailProcessModel model;
  switch (config.process.kind) {
    case ProcessKind::IidPareto: model = TailProcessModel::iid(config.process.alpha); break;
    case ProcessKind::Ar1:
      model = TailProcessModel::ar1(config.process.rho, config.process.alpha);
      break;
    case ProcessKind::Ma:
      if (config.process.coeffs.size() != 2)
        fail(ErrorCode::Unsupported,
             "the oracle covers first-order moving averages only (two coefficients)");
      model = TailProcessModel::ma1(config.process.coeffs[1], config.process.alpha);
      break;
  }

  // oracle values, all from streams derived off the master seed
  const std::uint64_t oracle_seed = derive_seed(config.master_seed, 0xFFFFFFFFULL);
  const auto theta = candidate_extremal_index(model, config.oracle_samples, derive_seed(oracle_seed, 1));
  const auto sum_exc = sum_exceedance_probabilities(model, config.oracle_samples, derive_seed(oracle_seed, 2));

  const bool any_cluster_size =
      std::any_of(config.functionals.begin(), config.functionals.end(),
                  [](const FunctionalSpec& f) { return f.kind == Functional::ClusterSize; });

  std::vector<ExperimentRow> rows(config.functionals.size());
  for (std::size_t i = 0; i < config.functionals.size(); ++i) {
    const auto& f = config.functionals[i];
    rows[i].functional = f;
    if (f.kind == Functional::Exc) {
      rows[i].oracle_nu = {1.0, 0.0};
      rows[i].oracle_nu_analytic = true;
    } else if (f.kind == Functional::ExtremalIndicator && theta.analytic) {
      rows[i].oracle_nu = {*theta.analytic, 0.0};
      rows[i].oracle_nu_analytic = true;
    } else {
      rows[i].oracle_nu =
          cluster_index_mc(model, f, config.oracle_samples, derive_seed(oracle_seed, 100 + i));
    }
    rows[i].oracle_sigma2 =
        limiting_variance(model, f, config.oracle_samples, derive_seed(oracle_seed, 200 + i));
  }

  ClusterSizeDistribution pi_dist;
  std::size_t max_m = 0;
  if (any_cluster_size) {
    for (const auto& f : config.functionals)
      if (f.kind == Functional::ClusterSize) max_m = std::max(max_m, std::size_t(f.cluster_size_m));
    pi_dist = cluster_size_distribution(model, max_m, config.oracle_samples,
                                        derive_seed(oracle_seed, 3));
  }

  // per-replication estimates
  const std::size_t R = config.replications;
  const std::size_t F = config.functionals.size();
  struct RepResult {
    std::vector<double> sliding, disjoint;  // per functional
    double extremal_sliding = 0.0, extremal_disjoint = 0.0;
    bool degenerate = false;
  };
  std::vector<RepResult> reps(R);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker_fn = [&]() {
    const FunctionalSpec extremal{Functional::ExtremalIndicator, 1, 1.0};
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= R) return;
      RepResult& out = reps[i];
      out.sliding.resize(F);
      out.disjoint.resize(F);
      try {
        ProcessSpec ps = config.process;
        ps.seed = derive_seed(config.master_seed, i);
        const Series series = generate(ps);
        for (std::size_t fi = 0; fi < F; ++fi) {
          out.sliding[fi] = estimate_sliding(series, config.functionals[fi], scheme).value;
          out.disjoint[fi] = estimate_disjoint(series, config.functionals[fi], scheme).value;
        }
        if (any_cluster_size) {
          out.extremal_sliding = estimate_sliding(series, extremal, scheme).value;
          out.extremal_disjoint = estimate_disjoint(series, extremal, scheme).value;
          if (out.extremal_sliding <= 0.0 || out.extremal_disjoint <= 0.0) out.degenerate = true;
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::DegenerateThreshold) {
          out.degenerate = true;
        } else {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const unsigned nworkers = unsigned(std::min<std::size_t>(resolve_workers(workers), R));
  if (nworkers <= 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (unsigned w = 0; w < nworkers; ++w) pool.emplace_back(worker_fn);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  ExperimentReport report;
  report.config = config;
  for (const auto& r : reps) report.degenerate += r.degenerate;
  report.replications_used = R - report.degenerate;
  if (double(report.degenerate) > 0.01 * double(R))
    fail(ErrorCode::DegenerateThreshold,
         std::to_string(report.degenerate) + " of " + std::to_string(R) +
             " replications degenerate (more than 1%)");

  const double sk = std::sqrt(double(config.k));
  for (std::size_t fi = 0; fi < F; ++fi) {
    std::vector<double> zs, zd;
    zs.reserve(R);
    zd.reserve(R);
    for (const auto& r : reps) {
      if (r.degenerate) continue;
      zs.push_back(sk * (r.sliding[fi] - rows[fi].oracle_nu.value));
      zd.push_back(sk * (r.disjoint[fi] - rows[fi].oracle_nu.value));
    }
    rows[fi].sliding = summarize(zs);
    rows[fi].disjoint = summarize(zd);
    rows[fi].variance_ratio =
        rows[fi].disjoint.variance > 0.0 ? rows[fi].sliding.variance / rows[fi].disjoint.variance
                                         : std::numeric_limits<double>::quiet_NaN();
  }
  report.rows = std::move(rows);

  if (any_cluster_size) {
    for (std::size_t fi = 0; fi < F; ++fi) {
      const auto& f = config.functionals[fi];
      if (f.kind != Functional::ClusterSize) continue;
      ClusterSizeRatioRow row;
      row.m = f.cluster_size_m;
      row.oracle_pi = pi_dist.pi.at(std::size_t(f.cluster_size_m) - 1);
      // Monte Carlo value of the cluster-size CLT variance formula
      const McValue p_m = mean_H_of_Y(model, f, config.oracle_samples,
                                      derive_seed(oracle_seed, 300 + fi));
      const double sig = sum_exc.value();
      const double sig_se = sum_exc.analytic ? 0.0 : sum_exc.mc.se;
      const double pi_v = row.oracle_pi.value, pi_se = row.oracle_pi.se;
      row.clt_variance.value = pi_v * (1.0 - 2.0 * p_m.value) + pi_v * pi_v * sig;
      const double dpi = 1.0 - 2.0 * p_m.value + 2.0 * pi_v * sig;
      row.clt_variance.se =
          std::sqrt(dpi * dpi * pi_se * pi_se + 4.0 * pi_v * pi_v * p_m.se * p_m.se +
                    std::pow(pi_v, 4.0) * sig_se * sig_se);
      std::vector<double> zs, zd;
      for (const auto& r : reps) {
        if (r.degenerate) continue;
        zs.push_back(sk * (r.sliding[fi] / r.extremal_sliding - pi_v));
        zd.push_back(sk * (r.disjoint[fi] / r.extremal_disjoint - pi_v));
      }
      row.sliding = summarize(zs);
      row.disjoint = summarize(zd);
      report.cluster_size_rows.push_back(row);
    }
  }

  if (!config.out_path.empty()) emit_report(report, config.format, config.out_path);
  return report;
}

namespace {

std::string mode_json(const ModeSummary& s) {
  namespace jf = jsonfmt;
  return "{\"mean\": " + jf::num(s.mean) + ", \"mean_se\": " + jf::num(s.mean_se) +
         ", \"variance\": " + jf::num(s.variance) + ", \"variance_se\": " + jf::num(s.variance_se) +
         "}";
}

}  // namespace

std::string report_to_json(const ExperimentReport& report) {
  namespace jf = jsonfmt;
  const auto& cfg = report.config;
  std::string out = "{\n";
  out += "  \"config\": {\"process\": " + jf::str(process_to_string(cfg.process)) +
         ", \"n\": " + jf::num(cfg.process.length) + ", \"r_n\": " + jf::num(cfg.block_len) +
         ", \"k\": " + jf::num(cfg.k) + ", \"functionals\": [";
  for (std::size_t i = 0; i < cfg.functionals.size(); ++i) {
    if (i) out += ", ";
    out += jf::str(to_string(cfg.functionals[i]));
  }
  out += "], \"replications\": " + jf::num(cfg.replications) +
         ", \"seed\": " + std::to_string(cfg.master_seed) +
         ", \"oracle_samples\": " + jf::num(cfg.oracle_samples) + "},\n";
  out += "  \"replications_used\": " + jf::num(report.replications_used) +
         ",\n  \"degenerate\": " + jf::num(report.degenerate) + ",\n";
  out += "  \"rows\": [\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    out += "    {\"functional\": " + jf::str(to_string(r.functional)) +
           ", \"oracle_nu\": " + jf::num(r.oracle_nu.value) +
           ", \"oracle_nu_se\": " + jf::num(r.oracle_nu.se) +
           ", \"oracle_nu_analytic\": " + (r.oracle_nu_analytic ? "true" : "false") +
           ", \"oracle_sigma2\": " + jf::num(r.oracle_sigma2.value) +
           ", \"oracle_sigma2_se\": " + jf::num(r.oracle_sigma2.se) + ",\n";
    out += "     \"sliding\": " + mode_json(r.sliding) + ",\n";
    out += "     \"disjoint\": " + mode_json(r.disjoint) + ",\n";
    out += "     \"variance_ratio_sliding_over_disjoint\": " + jf::num(r.variance_ratio) + "}";
    out += i + 1 < report.rows.size() ? ",\n" : "\n";
  }
  out += "  ],\n";
  out += "  \"cluster_size_ratio_rows\": [\n";
  for (std::size_t i = 0; i < report.cluster_size_rows.size(); ++i) {
    const auto& r = report.cluster_size_rows[i];
    out += "    {\"m\": " + std::to_string(r.m) + ", \"oracle_pi\": " + jf::num(r.oracle_pi.value) +
           ", \"oracle_pi_se\": " + jf::num(r.oracle_pi.se) +
           ", \"clt_variance\": " + jf::num(r.clt_variance.value) +
           ", \"clt_variance_se\": " + jf::num(r.clt_variance.se) + ",\n";
    out += "     \"sliding\": " + mode_json(r.sliding) + ",\n";
    out += "     \"disjoint\": " + mode_json(r.disjoint) + "}";
    out += i + 1 < report.cluster_size_rows.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string report_to_csv(const ExperimentReport& report) {
  namespace jf = jsonfmt;
  std::string out =
      "functional,mode,oracle_nu,oracle_nu_se,oracle_sigma2,oracle_sigma2_se,mean,mean_se,"
      "variance,variance_se,variance_ratio_sliding_over_disjoint\n";
  for (const auto& r : report.rows) {
    for (int mode = 0; mode < 2; ++mode) {
      const ModeSummary& s = mode == 0 ? r.sliding : r.disjoint;
      out += to_string(r.functional);
      out += mode == 0 ? ",sliding," : ",disjoint,";
      out += jf::num(r.oracle_nu.value) + "," + jf::num(r.oracle_nu.se) + "," +
             jf::num(r.oracle_sigma2.value) + "," + jf::num(r.oracle_sigma2.se) + "," +
             jf::num(s.mean) + "," + jf::num(s.mean_se) + "," + jf::num(s.variance) + "," +
             jf::num(s.variance_se) + "," + jf::num(r.variance_ratio) + "\n";
    }
  }
  return out;
}

void emit_report(const ExperimentReport& report, const std::string& format,
                 const std::string& path) {
  std::string body;
  if (format == "json")
    body = report_to_json(report);
  else if (format == "csv")
    body = report_to_csv(report);
  else
    fail(ErrorCode::InvalidArgument, "format must be json or csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << body;
  if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace tailblocks
