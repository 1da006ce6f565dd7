#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "tailblocks.h"

namespace {

struct Str {
  char* s = nullptr;
  ~Str() { tb_string_free(s); }
};

struct Ser {
  tb_series* s = nullptr;
  ~Ser() { tb_series_destroy(s); }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(tb_version()) == "0.1.0");
  CHECK(std::string(tb_status_name(TB_OK)) == "ok");
  CHECK(std::string(tb_status_name(TB_ERR_PARSE)) == "parse-error");
}

TEST_CASE("series lifecycle and norms") {
  const double data[] = {3.0, 4.0, 1.0, 0.0};
  Ser series;
  REQUIRE(tb_series_create(data, 2, 2, nullptr, &series.s) == TB_OK);
  CHECK(tb_series_length(series.s) == 2);
  CHECK(tb_series_dim(series.s) == 2);
  double norms[2];
  REQUIRE(tb_series_norms(series.s, norms) == TB_OK);
  CHECK(norms[0] == doctest::Approx(5.0));
  CHECK(norms[1] == doctest::Approx(1.0));
  double thr = 0.0;
  REQUIRE(tb_series_order_statistic(series.s, 1, &thr) == TB_OK);
  CHECK(thr == doctest::Approx(1.0));
  // sup norm variant
  Ser sup;
  REQUIRE(tb_series_create(data, 2, 2, "sup", &sup.s) == TB_OK);
  double sn[2];
  REQUIRE(tb_series_norms(sup.s, sn) == TB_OK);
  CHECK(sn[0] == 4.0);
}

TEST_CASE("null arguments are rejected") {
  CHECK(tb_series_create(nullptr, 2, 2, nullptr, nullptr) == TB_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(tb_last_error()) > 0);
  Str out;
  CHECK(tb_estimate(nullptr, "exc", 5, 5, "sliding", &out.s) == TB_ERR_INVALID_ARGUMENT);
}

TEST_CASE("simulate, write, read back") {
  Ser series;
  REQUIRE(tb_simulate("ar1:rho=0.5,alpha=1", 500, 7, &series.s) == TB_OK);
  CHECK(tb_series_length(series.s) == 500);
  const char* path = "/tmp/tb_capi_roundtrip.csv";
  REQUIRE(tb_series_write_csv(series.s, path) == TB_OK);
  Ser back;
  REQUIRE(tb_series_read_csv(path, nullptr, &back.s) == TB_OK);
  REQUIRE(tb_series_length(back.s) == 500);
  std::vector<double> a(500), b(500);
  tb_series_norms(series.s, a.data());
  tb_series_norms(back.s, b.data());
  for (std::size_t i = 0; i < 500; ++i) CHECK(a[i] == b[i]);
  std::remove(path);
  CHECK(tb_series_read_csv("/nonexistent/file.csv", nullptr, &back.s) == TB_ERR_IO);
}

TEST_CASE("estimate returns parseable json") {
  Ser series;
  REQUIRE(tb_simulate("iid:alpha=1", 5000, 21, &series.s) == TB_OK);
  Str json;
  REQUIRE(tb_estimate(series.s, "extremal", 25, 60, "sliding", &json.s) == TB_OK);
  const auto doc = nlohmann::json::parse(json.s);
  CHECK(doc["functional"] == "extremal");
  CHECK(doc["mode"] == "sliding");
  CHECK(doc["n"] == 5000);
  CHECK(doc["q_n"] == 4976);
  CHECK(doc["threshold_origin"] == "order-statistic");
  CHECK(doc["value"].get<double>() > 0.0);

  Str dj;
  REQUIRE(tb_estimate(series.s, "cluster-size:m=1", 25, 60, "disjoint", &dj.s) == TB_OK);
  const auto doc2 = nlohmann::json::parse(dj.s);
  CHECK(doc2["mode"] == "disjoint");

  Str bad;
  CHECK(tb_estimate(series.s, "nope", 25, 60, "sliding", &bad.s) == TB_ERR_PARSE);
  CHECK(tb_estimate(series.s, "extremal", 25, 9999, "sliding", &bad.s) == TB_ERR_INVALID_SCHEME);
  CHECK(tb_estimate(series.s, "extremal", 25, 60, "warped", &bad.s) == TB_ERR_PARSE);
}

TEST_CASE("pseudo and quasi endpoints") {
  Ser series;
  REQUIRE(tb_simulate("iid:alpha=1", 20000, 22, &series.s) == TB_OK);
  Str json;
  REQUIRE(tb_estimate_pseudo(series.s, "exc", 50, 200.0, 0.005, &json.s) == TB_OK);
  const auto doc = nlohmann::json::parse(json.s);
  CHECK(doc["mode"] == "sliding-pseudo");
  Str q;
  REQUIRE(tb_estimate_quasi(series.s, "extremal", 50, 200.0, &q.s) == TB_OK);
  Str fail_out;
  CHECK(tb_estimate_quasi(series.s, "extremal", 50, 1e15, &fail_out.s) ==
        TB_ERR_DEGENERATE_THRESHOLD);
  // univariate-only functional on multivariate data
  const double data[] = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
  Ser mv;
  REQUIRE(tb_series_create(data, 4, 2, nullptr, &mv.s) == TB_OK);
  Str dim_out;
  CHECK(tb_estimate(mv.s, "ruin", 2, 2, "sliding", &dim_out.s) == TB_ERR_DIMENSION);
}

TEST_CASE("tail empirical process buffer") {
  Ser series;
  REQUIRE(tb_simulate("iid:alpha=1", 50000, 23, &series.s) == TB_OK);
  const double grid[] = {0.5, 1.0, 2.0};
  double out[3];
  REQUIRE(tb_tail_empirical_process(series.s, 50, 500, grid, 3, out) == TB_OK);
  CHECK(out[0] >= out[1]);
  CHECK(out[1] >= out[2]);
  CHECK(out[2] == doctest::Approx(0.5).epsilon(0.15));
}

TEST_CASE("diagnostic tables come back as csv") {
  Ser series;
  REQUIRE(tb_simulate("ar1:rho=0.5,alpha=1", 100000, 24, &series.s) == TB_OK);
  const size_t kgrid[] = {1, 2, 5};
  Str dh;
  REQUIRE(tb_diagnose_dh(series.s, 50.0, 1.0, 1.0, 5, kgrid, 3, &dh.s) == TB_OK);
  CHECK(std::string(dh.s).rfind("k,p_hat,anchors\n", 0) == 0);
  const size_t mgrid[] = {1, 3, 6};
  Str sc;
  REQUIRE(tb_diagnose_s(series.s, 50.0, 1.0, 1.0, 5, mgrid, 3, &sc.s) == TB_OK);
  CHECK(std::string(sc.s).rfind("m,s_hat\n", 0) == 0);
  const double egrid[] = {0.1, 0.5, 1.0};
  Str an;
  REQUIRE(tb_diagnose_ansjb(series.s, 50.0, 1.0, 20, egrid, 3, &an.s) == TB_OK);
  CHECK(std::string(an.s).rfind("epsilon,a_hat\n", 0) == 0);
  // short series cannot host two-sided anchors
  Ser tiny;
  REQUIRE(tb_simulate("iid:alpha=1", 8, 25, &tiny.s) == TB_OK);
  Str bad;
  CHECK(tb_diagnose_dh(tiny.s, 1.0, 1.0, 1.0, 5, kgrid, 3, &bad.s) ==
        TB_ERR_INSUFFICIENT_SAMPLE);
}

TEST_CASE("oracle report through the C surface") {
  tb_model* model = nullptr;
  REQUIRE(tb_model_create("ar1:rho=0.5,alpha=1", &model) == TB_OK);
  Str json;
  REQUIRE(tb_oracle_report(model, 20000, 5, &json.s) == TB_OK);
  const auto doc = nlohmann::json::parse(json.s);
  CHECK(doc["model"] == "ar1:rho=0.5,alpha=1");
  CHECK(doc["theta"]["analytic"].get<double>() == 0.5);
  CHECK(doc["functionals"].size() == 7);
  for (const auto& row : doc["identities"]) CHECK(row["pass"].get<bool>());
  tb_model_destroy(model);
  tb_model* bad = nullptr;
  CHECK(tb_model_create("weibull:alpha=1", &bad) == TB_ERR_PARSE);
}

TEST_CASE("experiment through the C surface") {
  const char* cfg_path = "/tmp/tb_capi_experiment.cfg";
  {
    std::ofstream cfg(cfg_path);
    cfg << "process.kind = iid\nprocess.alpha = 1\nn = 4000\nr_n = 20\nk = 60\n"
           "functionals = extremal\nreplications = 6\nseed = 5\noracle_samples = 10000\n";
  }
  Str a, b;
  REQUIRE(tb_experiment_run(cfg_path, 1, &a.s) == TB_OK);
  REQUIRE(tb_experiment_run(cfg_path, 8, &b.s) == TB_OK);
  CHECK(std::string(a.s) == std::string(b.s));
  const auto doc = nlohmann::json::parse(a.s);
  CHECK(doc["replications_used"] == 6);
  std::remove(cfg_path);
  Str nope;
  CHECK(tb_experiment_run("/nonexistent.cfg", 1, &nope.s) == TB_ERR_IO);
}
