#include "tailblocks.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "jsonfmt.hpp"
#include "tailblocks/csv.hpp"
#include "tailblocks/error.hpp"
#include "tailblocks/estimators.hpp"
#include "tailblocks/experiment.hpp"
#include "tailblocks/functionals.hpp"
#include "tailblocks/oracle.hpp"
#include "tailblocks/series.hpp"
#include "tailblocks/simulate.hpp"

#define TB_API __attribute__((visibility("default")))

using namespace tailblocks;

struct tb_series {
  Series impl;
};

struct tb_model {
  TailProcessModel impl;
};

namespace {

thread_local std::string g_last_error;

tb_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return TB_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidScheme: return TB_ERR_INVALID_SCHEME;
    case ErrorCode::DimensionMismatch: return TB_ERR_DIMENSION;
    case ErrorCode::DegenerateThreshold: return TB_ERR_DEGENERATE_THRESHOLD;
    case ErrorCode::InsufficientSample: return TB_ERR_INSUFFICIENT_SAMPLE;
    case ErrorCode::Unsupported: return TB_ERR_UNSUPPORTED;
    case ErrorCode::ParseError: return TB_ERR_PARSE;
    case ErrorCode::IoError: return TB_ERR_IO;
  }
  return TB_ERR_INTERNAL;
}

template <typename Fn>
tb_status guarded(Fn&& fn) {
  try {
    fn();
    return TB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TB_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tb_status require(bool cond, const char* message) {
  if (cond) return TB_OK;
  g_last_error = message;
  return TB_ERR_INVALID_ARGUMENT;
}

NormKind norm_of(const char* norm_kind) {
  return norm_kind ? parse_norm_kind(norm_kind) : NormKind::Euclidean;
}

std::string estimate_json(const EstimateResult& r) {
  namespace jf = jsonfmt;
  std::string out = "{";
  out += "\"value\": " + jf::num(r.value);
  out += ", \"functional\": " + jf::str(to_string(r.functional));
  out += ", \"mode\": " + jf::str(to_string(r.mode));
  out += ", \"n\": " + jf::num(r.scheme.n);
  out += ", \"r_n\": " + jf::num(r.scheme.block_len);
  out += ", \"k\": " + jf::num(r.scheme.k);
  out += ", \"m_n\": " + jf::num(r.scheme.num_blocks);
  out += ", \"q_n\": " + jf::num(r.scheme.num_windows);
  out += ", \"threshold\": " + jf::num(r.threshold.value);
  out += std::string(", \"threshold_origin\": ") +
         (r.threshold.origin == Threshold::Origin::OrderStatistic ? "\"order-statistic\""
                                                                  : "\"user-supplied\"");
  out += ", \"exceedance_count_observed\": " + jf::num(r.exceedance_count_observed);
  // large-dev and ruin additionally need the small-jump diagnostic for valid inference
  out += std::string(", \"requires_ansjb\": ") + (r.functional.is_class_b() ? "true" : "false");
  out += "}\n";
  return out;
}

}  // namespace

extern "C" {

TB_API const char* tb_version(void) { return "0.1.0"; }

TB_API const char* tb_status_name(tb_status status) {
  switch (status) {
    case TB_OK: return "ok";
    case TB_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case TB_ERR_INVALID_SCHEME: return "invalid-scheme";
    case TB_ERR_DIMENSION: return "dimension-mismatch";
    case TB_ERR_DEGENERATE_THRESHOLD: return "degenerate-threshold";
    case TB_ERR_INSUFFICIENT_SAMPLE: return "insufficient-sample";
    case TB_ERR_UNSUPPORTED: return "unsupported";
    case TB_ERR_PARSE: return "parse-error";
    case TB_ERR_IO: return "io-error";
    case TB_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

TB_API const char* tb_last_error(void) { return g_last_error.c_str(); }

TB_API void tb_string_free(char* s) { std::free(s); }

TB_API tb_status tb_series_create(const double* data, size_t n, size_t dim,
                                  const char* norm_kind, tb_series** out) {
  if (auto s = require(data && out && n > 0 && dim > 0, "data, out, n, dim required")) return s;
  return guarded([&] {
    std::vector<double> copy(data, data + n * dim);
    *out = new tb_series{Series(std::move(copy), dim, norm_of(norm_kind))};
  });
}

TB_API tb_status tb_series_read_csv(const char* path, const char* norm_kind, tb_series** out) {
  if (auto s = require(path && out, "path and out required")) return s;
  return guarded([&] { *out = new tb_series{read_csv_file(path, norm_of(norm_kind))}; });
}

TB_API tb_status tb_series_write_csv(const tb_series* series, const char* path) {
  if (auto s = require(series && path, "series and path required")) return s;
  return guarded([&] { write_csv_file(series->impl, path); });
}

TB_API void tb_series_destroy(tb_series* series) { delete series; }

TB_API size_t tb_series_length(const tb_series* series) {
  return series ? series->impl.size() : 0;
}

TB_API size_t tb_series_dim(const tb_series* series) { return series ? series->impl.dim() : 0; }

TB_API tb_status tb_series_norms(const tb_series* series, double* out) {
  if (auto s = require(series && out, "series and out required")) return s;
  auto norms = series->impl.norms();
  std::memcpy(out, norms.data(), norms.size() * sizeof(double));
  return TB_OK;
}

TB_API tb_status tb_series_order_statistic(const tb_series* series, size_t k, double* out) {
  if (auto s = require(series && out, "series and out required")) return s;
  return guarded([&] { *out = order_statistic(series->impl.norms(), k).value; });
}

TB_API tb_status tb_simulate(const char* process, size_t n, uint64_t seed, tb_series** out) {
  if (auto s = require(process && out, "process and out required")) return s;
  return guarded([&] {
    ProcessSpec spec = parse_process(process);
    spec.length = n;
    spec.seed = seed;
    *out = new tb_series{generate(spec)};
  });
}

TB_API tb_status tb_estimate(const tb_series* series, const char* functional, size_t r_n,
                             size_t k, const char* mode, char** json_out) {
  if (auto s = require(series && functional && mode && json_out,
                       "series, functional, mode, json_out required"))
    return s;
  return guarded([&] {
    const FunctionalSpec spec = parse_functional(functional);
    const BlockScheme scheme = validate_scheme(series->impl.size(), r_n, k);
    const EstimatorMode m = parse_estimator_mode(mode);
    EstimateResult res;
    if (m == EstimatorMode::Sliding)
      res = estimate_sliding(series->impl, spec, scheme);
    else if (m == EstimatorMode::Disjoint)
      res = estimate_disjoint(series->impl, spec, scheme);
    else
      fail(ErrorCode::InvalidArgument,
           "mode must be sliding or disjoint here; use the pseudo/quasi entry points");
    *json_out = dup_string(estimate_json(res));
  });
}

TB_API tb_status tb_estimate_pseudo(const tb_series* series, const char* functional, size_t r_n,
                                    double c, double p, char** json_out) {
  if (auto s = require(series && functional && json_out, "series, functional, json_out required"))
    return s;
  return guarded([&] {
    const EstimateResult res =
        estimate_sliding_pseudo(series->impl, parse_functional(functional), r_n, c, p);
    *json_out = dup_string(estimate_json(res));
  });
}

TB_API tb_status tb_estimate_quasi(const tb_series* series, const char* functional, size_t r_n,
                                   double c, char** json_out) {
  if (auto s = require(series && functional && json_out, "series, functional, json_out required"))
    return s;
  return guarded([&] {
    const EstimateResult res =
        estimate_sliding_quasi(series->impl, parse_functional(functional), r_n, c);
    *json_out = dup_string(estimate_json(res));
  });
}

TB_API tb_status tb_tail_empirical_process(const tb_series* series, size_t r_n, size_t k,
                                           const double* s_grid, size_t n_s, double* t_out) {
  if (auto s = require(series && s_grid && t_out && n_s > 0, "series and a nonempty grid required"))
    return s;
  return guarded([&] {
    const BlockScheme scheme = validate_scheme(series->impl.size(), r_n, k);
    auto rows = tail_empirical_process(series->impl, scheme, {s_grid, n_s});
    for (size_t i = 0; i < rows.size(); ++i) t_out[i] = rows[i].second;
  });
}

TB_API tb_status tb_diagnose_dh(const tb_series* series, double c, double x, double y, size_t r_n,
                                const size_t* k_grid, size_t n_k, char** csv_out) {
  if (auto s = require(series && k_grid && csv_out && n_k > 0,
                       "series and a nonempty lag grid required"))
    return s;
  return guarded([&] {
    auto rows = dh_diagnostic(series->impl, c, x, y, {k_grid, n_k}, r_n);
    std::string out = "k,p_hat,anchors\n";
    for (const auto& r : rows)
      out += std::to_string(r.k) + "," + jsonfmt::num(r.p_hat) + "," + std::to_string(r.anchors) +
             "\n";
    *csv_out = dup_string(out);
  });
}

TB_API tb_status tb_diagnose_s(const tb_series* series, double c, double s, double t, size_t r_n,
                               const size_t* m_grid, size_t n_m, char** csv_out) {
  if (auto st = require(series && m_grid && csv_out && n_m > 0,
                        "series and a nonempty m grid required"))
    return st;
  return guarded([&] {
    auto rows = s_condition_diagnostic(series->impl, c, s, t, {m_grid, n_m}, r_n);
    std::string out = "m,s_hat\n";
    for (const auto& r : rows) out += std::to_string(r.m) + "," + jsonfmt::num(r.s_hat) + "\n";
    *csv_out = dup_string(out);
  });
}

TB_API tb_status tb_diagnose_ansjb(const tb_series* series, double c, double eta, size_t r_n,
                                   const double* epsilon_grid, size_t n_eps, char** csv_out) {
  if (auto s = require(series && epsilon_grid && csv_out && n_eps > 0,
                       "series and a nonempty epsilon grid required"))
    return s;
  return guarded([&] {
    auto rows = ansjb_diagnostic(series->impl, c, eta, {epsilon_grid, n_eps}, r_n);
    std::string out = "epsilon,a_hat\n";
    for (const auto& r : rows)
      out += jsonfmt::num(r.epsilon) + "," + jsonfmt::num(r.a_hat) + "\n";
    *csv_out = dup_string(out);
  });
}

TB_API tb_status tb_model_create(const char* grammar, tb_model** out) {
  if (auto s = require(grammar && out, "grammar and out required")) return s;
  return guarded([&] { *out = new tb_model{parse_model(grammar)}; });
}

TB_API void tb_model_destroy(tb_model* model) { delete model; }

TB_API tb_status tb_oracle_report(const tb_model* model, uint64_t samples, uint64_t seed,
                                  char** json_out) {
  if (auto s = require(model && json_out, "model and json_out required")) return s;
  return guarded([&] {
    const std::vector<FunctionalSpec> functionals = {
        parse_functional("exc"),           parse_functional("extremal"),
        parse_functional("cluster-size:m=1"), parse_functional("cluster-size:m=2"),
        parse_functional("stop-loss:eta=1"),  parse_functional("large-dev"),
        parse_functional("ruin"),
    };
    auto report = oracle_report(model->impl, functionals, 8, samples, seed);
    *json_out = dup_string(to_json(report));
  });
}

TB_API tb_status tb_experiment_run(const char* config_path, unsigned workers, char** json_out) {
  if (auto s = require(config_path && json_out, "config_path and json_out required")) return s;
  return guarded([&] {
    const ExperimentConfig cfg = parse_experiment_config_file(config_path);
    const ExperimentReport report = run_experiment(cfg, workers);
    *json_out = dup_string(report_to_json(report));
  });
}

}  // extern "C"
