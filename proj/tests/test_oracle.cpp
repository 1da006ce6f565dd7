#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "tailblocks/error.hpp"
#include "tailblocks/oracle.hpp"

using namespace tailblocks;

namespace {

double freq(const std::vector<std::vector<double>>& paths, int lag,
            bool (*event)(const std::vector<double>&, int)) {
  std::size_t c = 0;
  for (const auto& p : paths) c += event(p, lag);
  return double(c) / double(paths.size());
}

double binom_se(double p, std::size_t n) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / double(n));
}

}  // namespace

TEST_CASE("model grammar and truncation") {
  const auto iid = parse_model("iid:alpha=1");
  CHECK(iid.kind == ModelKind::Iid);
  const auto ar = parse_model("ar1:rho=0.5,alpha=1");
  CHECK(ar.rho == 0.5);
  // both truncation rules hold
  CHECK(std::pow(ar.rho, ar.lag) < 1e-9);
  const double ra = std::pow(ar.rho, ar.alpha);
  CHECK(2.0 * std::pow(ra, ar.lag + 1) / (1.0 - ra) < 1e-9);
  const auto ma = parse_model("ma1:b=0.7,alpha=1.5");
  CHECK(ma.b == 0.7);
  CHECK(to_string(ma) == "ma1:b=0.7,alpha=1.5");
  CHECK_THROWS_AS((void)parse_model("markov:alpha=1"), Error);
  CHECK_THROWS_AS((void)parse_model("ar1:rho=1.5,alpha=1"), Error);
}

TEST_CASE("iid paths are a single Pareto point") {
  const auto model = parse_model("iid:alpha=1");
  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    const auto path = sample_tail_path(model, rng);
    CHECK(path.at(0) >= 1.0);
    for (int j = -path.lag; j <= path.lag; ++j)
      if (j != 0) CHECK(path.at(j) == 0.0);
  }
}

TEST_CASE("ar1 forward recursion is deterministic given the radius") {
  const auto model = parse_model("ar1:rho=0.5,alpha=1");
  Rng rng(43);
  for (int i = 0; i < 200; ++i) {
    const auto path = sample_tail_path(model, rng);
    CHECK(path.at(0) >= 1.0);
    CHECK(path.at(1) == doctest::Approx(path.at(0) / 2.0));
    CHECK(path.at(2) == doctest::Approx(path.at(0) / 4.0));
  }
}

TEST_CASE("ar1 backward survival frequency is rho^alpha") {
  const auto model = parse_model("ar1:rho=0.5,alpha=1");
  Rng rng(44);
  const std::size_t n = 40000;
  std::size_t alive = 0;
  for (std::size_t i = 0; i < n; ++i) alive += sample_tail_path(model, rng).at(-1) != 0.0;
  const double p = double(alive) / double(n);
  CHECK(std::fabs(p - 0.5) <= 3.0 * binom_se(0.5, n));
}

TEST_CASE("every path has radius at least 1 and unit spectral origin") {
  for (const char* g : {"iid:alpha=1", "ar1:rho=0.7,alpha=1.3", "ma1:b=1.4,alpha=0.9"}) {
    const auto model = parse_model(g);
    Rng rng(45);
    for (int i = 0; i < 500; ++i) {
      const auto path = sample_tail_path(model, rng);
      CHECK(std::fabs(path.at(0)) >= 1.0);
    }
  }
}

TEST_CASE("infargmax picks the first global argmax") {
  CHECK(infargmax(std::vector<double>{0.5, 2.0, 2.0}) == 1);
  CHECK(infargmax(std::vector<double>{3.0, 1.0, 2.0}) == 0);
  std::vector<double> single(9, 0.0);
  single[8] = 0.25;
  CHECK(infargmax(single) == 8);
  CHECK_THROWS_AS((void)infargmax(std::vector<double>{0.0, 0.0}), Error);
  // TailPath overload returns the lag-relative index
  TailPath p;
  p.lag = 1;
  p.values = {3.0, 1.0, 2.0};
  CHECK(infargmax(p) == -1);
}

TEST_CASE("candidate extremal index") {
  const auto iid = candidate_extremal_index(parse_model("iid:alpha=1"), 1000, 7);
  CHECK(iid.mc.value == 1.0);
  CHECK(iid.mc.se == 0.0);
  REQUIRE(iid.analytic.has_value());
  CHECK(*iid.analytic == 1.0);

  const auto ar = candidate_extremal_index(parse_model("ar1:rho=0.5,alpha=1"), 100000, 7);
  REQUIRE(ar.analytic.has_value());
  CHECK(*ar.analytic == 0.5);
  CHECK(std::fabs(ar.mc.value - 0.5) <= 3.0 * ar.mc.se);

  const auto ar2 = candidate_extremal_index(parse_model("ar1:rho=0.5,alpha=2"), 100000, 7);
  REQUIRE(ar2.analytic.has_value());
  CHECK(*ar2.analytic == 0.75);
  CHECK(std::fabs(ar2.mc.value - 0.75) <= 3.0 * ar2.mc.se);
}

TEST_CASE("Q samples anchor at zero with unit maximum") {
  const auto iid = parse_model("iid:alpha=1");
  Rng rng(46);
  const auto q = sample_Q(iid, rng);
  CHECK(q.path.at(0) == 1.0);
  for (int j = -q.path.lag; j <= q.path.lag; ++j)
    if (j != 0) CHECK(q.path.at(j) == 0.0);

  const auto ar = parse_model("ar1:rho=0.5,alpha=1");
  Rng rng2(47);
  std::size_t draws = 2000, attempts = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto qs = sample_Q(ar, rng2);
    attempts += qs.attempts;
    double mx = 0.0;
    for (double v : qs.path.values) mx = std::max(mx, std::fabs(v));
    CHECK(mx == std::fabs(qs.path.at(0)));
    CHECK(std::fabs(qs.path.at(0)) == 1.0);
  }
  // acceptance rate estimates theta = 0.5
  const double rate = double(draws) / double(attempts);
  CHECK(std::fabs(rate - 0.5) <= 3.0 * binom_se(0.5, attempts));
}

TEST_CASE("cluster indices") {
  const std::size_t samples = 100000;
  // iid: the extremal indicator index is theta = 1, with zero spread
  const auto iid_ext =
      cluster_index_mc(parse_model("iid:alpha=1"), parse_functional("extremal"), samples, 11);
  CHECK(iid_ext.value == 1.0);
  CHECK(iid_ext.se == 0.0);

  // exc is handled analytically
  const auto exc = cluster_index_mc(parse_model("ar1:rho=0.5,alpha=1"),
                                    parse_functional("exc"), samples, 11);
  CHECK(exc.value == 1.0);
  CHECK(exc.se == 0.0);

  // ar1: nu*(extremal) = theta; agree with the anchored acceptance within 3 se
  const auto model = parse_model("ar1:rho=0.5,alpha=1");
  const auto ar_ext = cluster_index_mc(model, parse_functional("extremal"), samples, 11);
  CHECK(std::fabs(ar_ext.value - 0.5) <= 3.0 * ar_ext.se);
  const auto theta = candidate_extremal_index(model, samples, 99);
  CHECK(std::fabs(ar_ext.value - theta.mc.value) <=
        3.0 * std::sqrt(ar_ext.se * ar_ext.se + theta.mc.se * theta.mc.se));

  // iid large deviations: E[Theta_0^alpha] = 1 for a positive single-point path
  const auto iid_ld =
      cluster_index_mc(parse_model("iid:alpha=1"), parse_functional("large-dev"), samples, 11);
  CHECK(iid_ld.value == doctest::Approx(1.0));
  // ar1 with rho = 1/2, alpha = 1: the spectral forward sums are deterministic,
  // K(Theta_{0..}) = 2 and K(Theta_{1..}) = 1 for both large-dev and ruin
  for (const char* name : {"large-dev", "ruin"}) {
    const auto v = cluster_index_mc(model, parse_functional(name), samples, 11);
    CHECK(v.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(v.se <= 1e-9);
  }
}

TEST_CASE("cluster size law") {
  const auto iid = cluster_size_distribution(parse_model("iid:alpha=1"), 4, 20000, 12);
  CHECK(iid.pi[0].value == 1.0);
  for (std::size_t m = 2; m <= 4; ++m) CHECK(iid.pi[m - 1].value == 0.0);
  CHECK(iid.accepted == iid.attempts);

  const auto model = parse_model("ar1:rho=0.5,alpha=1");
  const auto ar = cluster_size_distribution(model, 6, 200000, 12);
  // geometric law with success probability theta = 1/2 from the forward path count
  for (std::size_t m = 1; m <= 6; ++m) {
    const double expect = std::pow(0.5, double(m));
    CHECK(std::fabs(ar.pi[m - 1].value - expect) <= 3.0 * ar.pi[m - 1].se + 1e-12);
  }
  // moments against theta and the exceedance sum
  CHECK(std::fabs(ar.mean_m.value - 2.0) <= 3.0 * ar.mean_m.se);
  CHECK(std::fabs(ar.mean_m2.value - 6.0) <= 3.0 * ar.mean_m2.se);
}

TEST_CASE("exceedance-probability sums") {
  const auto iid = sum_exceedance_probabilities(parse_model("iid:alpha=1"), 10000, 13);
  REQUIRE(iid.analytic.has_value());
  CHECK(*iid.analytic == 1.0);
  CHECK(iid.mc.value == 1.0);

  const auto ar = sum_exceedance_probabilities(parse_model("ar1:rho=0.5,alpha=1"), 200000, 13);
  REQUIRE(ar.analytic.has_value());
  CHECK(*ar.analytic == doctest::Approx(3.0));
  CHECK(std::fabs(ar.mc.value - 3.0) <= 3.0 * ar.mc.se);

  const auto ar2 = sum_exceedance_probabilities(parse_model("ar1:rho=0.5,alpha=2"), 200000, 13);
  CHECK(*ar2.analytic == doctest::Approx(5.0 / 3.0));
  CHECK(std::fabs(ar2.mc.value - 5.0 / 3.0) <= 3.0 * ar2.mc.se);
}

TEST_CASE("limiting variances") {
  const std::size_t samples = 200000;
  const auto iid_ext =
      limiting_variance(parse_model("iid:alpha=1"), parse_functional("extremal"), samples, 14);
  CHECK(iid_ext.value == 0.0);
  CHECK(iid_ext.se == 0.0);

  const auto iid_cs1 = limiting_variance(parse_model("iid:alpha=1"),
                                         parse_functional("cluster-size:m=1"), samples, 14);
  CHECK(iid_cs1.value == 0.0);

  const auto ar_ext = limiting_variance(parse_model("ar1:rho=0.5,alpha=1"),
                                        parse_functional("extremal"), samples, 14);
  CHECK(std::fabs(ar_ext.value - 0.25) <= 3.0 * ar_ext.se);
  CHECK(ar_ext.se < 0.01);

  // exc has limiting variance zero (the estimator is self-normalized)
  const auto ar_exc =
      limiting_variance(parse_model("ar1:rho=0.5,alpha=1"), parse_functional("exc"), samples, 14);
  CHECK(std::fabs(ar_exc.value) <= 3.0 * ar_exc.se);
}

TEST_CASE("block maxima comparison constants") {
  const auto a = block_maxima_comparison(1.0, 1.0);
  CHECK(a.sigma1_sq == doctest::Approx(0.0));
  CHECK(a.sigma3_sq == doctest::Approx(0.49678527717495721));
  const auto b = block_maxima_comparison(0.5, 3.0);
  CHECK(b.sigma1_sq == doctest::Approx(0.25));
  CHECK(b.sigma3_sq == doctest::Approx(0.38212055882855768));
  const auto f = frechet_indicator_constants();
  CHECK(f.var_f == doctest::Approx(0.23254415793482963));
  CHECK(f.c_f == doctest::Approx(0.19441774939643385));
  CHECK(f.var_f > f.c_f);
  CHECK_THROWS_AS((void)block_maxima_comparison(0.0, 1.0), Error);
  CHECK_THROWS_AS((void)block_maxima_comparison(0.5, 0.5), Error);
}

TEST_CASE("identity suite passes for the shipped models") {
  for (const char* g : {"iid:alpha=1", "ar1:rho=0.5,alpha=1"}) {
    const auto checks = identity_suite(parse_model(g), 100000, 15);
    REQUIRE(checks.size() == 6);
    for (const auto& c : checks) {
      CAPTURE(g);
      CAPTURE(c.name);
      CAPTURE(c.lhs);
      CAPTURE(c.rhs);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("Monte Carlo determinism") {
  const auto model = parse_model("ar1:rho=0.5,alpha=1");
  const auto f = parse_functional("extremal");
  const auto a = cluster_index_mc(model, f, 50000, 123);
  const auto b = cluster_index_mc(model, f, 50000, 123);
  CHECK(a.value == b.value);
  CHECK(a.se == b.se);
  const auto c = cluster_index_mc(model, f, 50000, 124);
  CHECK(a.value != c.value);
}

TEST_CASE("conditional simulation agrees with the sampled tail process") {
  // iid: the neighbour of a large value stays small
  {
    ProcessSpec p = parse_process("iid:alpha=1");
    p.length = 1000000;
    p.seed = 161;
    const auto law = conditional_simulation_oracle(p, 100.0, 2);
    REQUIRE(law.paths.size() >= 200);
    const double p1 = freq(law.paths, law.lag, [](const std::vector<double>& path, int lag) {
      return std::fabs(path[std::size_t(lag + 1)]) > 1.0;
    });
    CHECK(p1 < 0.02);
  }
  // ar1 forward ratio: E[Y_1 / Y_0] near rho
  {
    ProcessSpec p = parse_process("ar1:rho=0.5,alpha=1");
    p.length = 400000;
    p.seed = 162;
    const auto law = conditional_simulation_oracle(p, 500.0, 2);
    REQUIRE(law.paths.size() >= 200);
    double sum = 0.0;
    for (const auto& path : law.paths)
      sum += path[std::size_t(law.lag + 1)] / path[std::size_t(law.lag)];
    CHECK(sum / double(law.paths.size()) == doctest::Approx(0.5).epsilon(0.05));
    // backward exceedance frequency against the sampled tail process
    const double emp = freq(law.paths, law.lag, [](const std::vector<double>& path, int lag) {
      return std::fabs(path[std::size_t(lag - 1)]) > 1.0;
    });
    const auto model = parse_model("ar1:rho=0.5,alpha=1");
    Rng rng(163);
    const std::size_t n_mc = 40000;
    std::size_t hit = 0;
    for (std::size_t i = 0; i < n_mc; ++i) hit += sample_tail_path(model, rng).at(-1) > 1.0;
    const double mc = double(hit) / double(n_mc);
    const double se =
        std::sqrt(binom_se(emp, law.paths.size()) * binom_se(emp, law.paths.size()) +
                  binom_se(mc, n_mc) * binom_se(mc, n_mc));
    CHECK(std::fabs(emp - mc) <= 3.0 * se + 0.02);
  }
  // ma1: two-sided agreement on a grid of events
  {
    ProcessSpec p = parse_process("ma1:b=0.7,alpha=1.5");
    p.length = 2000000;
    p.seed = 164;
    const auto law = conditional_simulation_oracle(p, 50.0, 2);
    REQUIRE(law.paths.size() >= 200);
    const auto model = parse_model("ma1:b=0.7,alpha=1.5");
    using Event = bool (*)(const std::vector<double>&, int);
    const Event events[] = {
        [](const std::vector<double>& path, int lag) {
          return path[std::size_t(lag + 1)] > 0.35;
        },
        [](const std::vector<double>& path, int lag) {
          return path[std::size_t(lag - 1)] > 0.35;
        },
        [](const std::vector<double>& path, int lag) { return path[std::size_t(lag + 1)] > 1.0; },
        [](const std::vector<double>& path, int lag) { return path[std::size_t(lag - 1)] > 1.0; },
    };
    Rng rng(165);
    const std::size_t n_mc = 60000;
    std::vector<std::vector<double>> mc_paths;
    mc_paths.reserve(n_mc);
    for (std::size_t i = 0; i < n_mc; ++i) {
      const auto path = sample_tail_path(model, rng);
      std::vector<double> row(5, 0.0);
      for (int j = -2; j <= 2; ++j) row[std::size_t(j + 2)] = path.at(j);
      mc_paths.push_back(std::move(row));
    }
    for (const auto& ev : events) {
      const double emp = freq(law.paths, law.lag, ev);
      const double mc = freq(mc_paths, 2, ev);
      const double se =
          std::sqrt(binom_se(emp, law.paths.size()) * binom_se(emp, law.paths.size()) +
                    binom_se(mc, n_mc) * binom_se(mc, n_mc));
      CAPTURE(emp);
      CAPTURE(mc);
      CHECK(std::fabs(emp - mc) <= 3.0 * se + 0.02);
    }
  }
  // too few exceedances
  {
    ProcessSpec p = parse_process("iid:alpha=1");
    p.length = 5000;
    p.seed = 166;
    CHECK_THROWS_AS((void)conditional_simulation_oracle(p, 1e9, 2), Error);
  }
}

TEST_CASE("oracle report is well formed") {
  const std::vector<FunctionalSpec> fs = {parse_functional("exc"), parse_functional("extremal")};
  const auto report = oracle_report(parse_model("ar1:rho=0.5,alpha=1"), fs, 4, 20000, 17);
  CHECK(report.rows.size() == 2);
  CHECK(report.pi.pi.size() == 4);
  CHECK(report.identities.size() == 6);
  const std::string json = to_json(report);
  CHECK(json.find("\"model\": \"ar1:rho=0.5,alpha=1\"") != std::string::npos);
  CHECK(json.find("\"identities\"") != std::string::npos);
}
