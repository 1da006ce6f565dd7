#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "tailblocks/error.hpp"
#include "tailblocks/functionals.hpp"
#include "test_util.hpp"

using namespace tailblocks;

TEST_CASE("grammar round trip and failures") {
  for (const char* text : {"exc", "extremal", "cluster-size:m=3", "stop-loss:eta=1.5",
                           "large-dev", "ruin"}) {
    CHECK(to_string(parse_functional(text)) == text);
  }
  CHECK(parse_functional("cluster-size:m=3").cluster_size_m == 3);
  CHECK(parse_functional("stop-loss:eta=1.5").stop_loss_eta == 1.5);
  CHECK_THROWS_AS((void)parse_functional("nope"), Error);
  CHECK_THROWS_AS((void)parse_functional("cluster-size"), Error);
  CHECK_THROWS_AS((void)parse_functional("cluster-size:m=0"), Error);
  CHECK_THROWS_AS((void)parse_functional("stop-loss:eta=-1"), Error);
  CHECK_THROWS_AS((void)parse_functional("extremal:m=2"), Error);
}

TEST_CASE("class flags") {
  CHECK(parse_functional("large-dev").is_class_b());
  CHECK(parse_functional("ruin").is_class_b());
  CHECK(!parse_functional("stop-loss:eta=1").is_class_b());
  CHECK(parse_functional("ruin").requires_univariate());
  CHECK(!parse_functional("extremal").requires_univariate());
  CHECK(!parse_functional("exc").indicator_valued());
  CHECK(parse_functional("cluster-size:m=1").indicator_valued());
}

TEST_CASE("eval block examples") {
  Series s({0.5, 2.0, 3.0}, 1);
  CHECK(eval(parse_functional("exc"), s, 0, 3, 1.0) == 2.0);
  CHECK(eval(parse_functional("cluster-size:m=2"), s, 0, 3, 1.0) == 1.0);
  CHECK(eval(parse_functional("extremal"), s, 0, 3, 1.0) == 1.0);

  Series sl({2.0, 0.5, 3.0}, 1);
  CHECK(eval(parse_functional("stop-loss:eta=1.5"), sl, 0, 3, 1.0) == 1.0);  // (2-1)+(3-1)=3
  CHECK(eval(parse_functional("stop-loss:eta=3.5"), sl, 0, 3, 1.0) == 0.0);

  Series ruin({1.0, -0.5, 2.0}, 1);
  CHECK(eval(parse_functional("ruin"), ruin, 0, 3, 1.0) == 1.0);  // prefixes 1.0, 0.5, 2.5

  Series ld({0.6, 0.6}, 1);
  CHECK(eval(parse_functional("large-dev"), ld, 0, 2, 1.0) == 1.0);  // 1.2 > 1
  Series ld2({0.6, -0.8}, 1);
  CHECK(eval(parse_functional("large-dev"), ld2, 0, 2, 1.0) == 0.0);
}

TEST_CASE("dimension and scale errors") {
  Series s2({1.0, 2.0, 3.0, 4.0}, 2);
  CHECK_THROWS_AS((void)eval(parse_functional("ruin"), s2, 0, 2, 1.0), Error);
  CHECK_THROWS_AS((void)sliding_sum(parse_functional("stop-loss:eta=1"), s2, 2, 1.0), Error);
  Series s1({1.0, 2.0}, 1);
  CHECK_THROWS_AS((void)eval(parse_functional("exc"), s1, 0, 2, 0.0), Error);
  CHECK_THROWS_AS((void)eval(parse_functional("exc"), s1, 0, 2, -1.0), Error);
  CHECK(eval(parse_functional("exc"), s2, 0, 2, 1.0) >= 0.0);  // norm functionals allow d > 1
}

TEST_CASE("sliding sum hand example") {
  Series s({5.0, 0.1, 0.2, 6.0, 0.3}, 1);
  CHECK(sliding_sum(parse_functional("extremal"), s, 2, 0.3) == 3.0);
  CHECK(disjoint_sum(parse_functional("extremal"), s, 2, 0.3) == 2.0);
  // scale above every norm
  CHECK(sliding_sum(parse_functional("exc"), s, 2, 10.0) == 0.0);
  CHECK(disjoint_sum(parse_functional("exc"), s, 2, 10.0) == 0.0);
}

TEST_CASE("sliding and disjoint sums equal the brute-force loops exactly") {
  std::mt19937 gen(12345);
  const auto functionals = tbtest::all_functionals();
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + gen() % 400;
    const std::size_t r = 1 + gen() % std::min<std::size_t>(n, 25);
    auto data = tbtest::random_series(gen, n, true);
    Series s(std::move(data), 1);
    for (double scale : {0.5, 1.0, 3.0, 17.0}) {
      for (const auto& f : functionals) {
        CAPTURE(to_string(f));
        CAPTURE(n);
        CAPTURE(r);
        CAPTURE(scale);
        const double slid = sliding_sum(f, s, r, scale);
        const double brute = tbtest::brute_sliding(f, s, r, scale);
        if (f.kind == Functional::StopLoss) {
          CHECK(slid == doctest::Approx(brute).epsilon(1e-12));
        } else {
          CHECK(slid == brute);
        }
        CHECK(disjoint_sum(f, s, r, scale) == tbtest::brute_disjoint(f, s, r, scale));
      }
    }
  }
}

TEST_CASE("random series n=500 r=17: every functional matches the double loop") {
  std::mt19937 gen(500170);
  Series s(tbtest::random_series(gen, 500, true), 1);
  for (const auto& f : tbtest::all_functionals()) {
    CAPTURE(to_string(f));
    CHECK(sliding_sum(f, s, 17, 1.0) == tbtest::brute_sliding(f, s, 17, 1.0));
  }
}

TEST_CASE("exceedance weight identity") {
  std::mt19937 gen(777);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + gen() % 300;
    const std::size_t r = 1 + gen() % std::min<std::size_t>(n, 30);
    const std::size_t q = n - r + 1;
    Series s(tbtest::random_series(gen, n, false), 1);
    const double scale = 1.5;
    double weighted = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {  // 1-based positions
      const double w =
          double(std::min(j, q)) - double(std::max<std::size_t>(1, j >= r ? j - r + 1 : 1)) + 1.0;
      weighted += w * (s.norm(j - 1) > scale);
    }
    CHECK(sliding_sum(parse_functional("exc"), s, r, scale) == weighted);
  }
}

TEST_CASE("appending zeros never changes eval") {
  std::mt19937 gen(4242);
  auto data = tbtest::random_series(gen, 40, true);
  Series base(std::vector<double>(data), 1);
  auto padded_data = data;
  padded_data.insert(padded_data.end(), 7, 0.0);
  Series padded(std::move(padded_data), 1);
  for (const auto& f : tbtest::all_functionals())
    for (double scale : {0.7, 1.0, 2.5})
      CHECK(eval(f, base, 0, 40, scale) == eval(f, padded, 0, 47, scale));
}

TEST_CASE("monotonicity in the scale") {
  std::mt19937 gen(9001);
  Series s(tbtest::random_series(gen, 200, false), 1);
  const std::vector<double> grid{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  for (const char* name : {"exc", "extremal"}) {
    const auto f = parse_functional(name);
    double prev = std::numeric_limits<double>::infinity();
    for (double scale : grid) {
      const double v = sliding_sum(f, s, 16, scale);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("eval is scale-homogeneous: H_s(x) = H(x/s)") {
  std::mt19937 gen(31337);
  auto data = tbtest::random_series(gen, 64, true);
  for (double scale : {0.3, 1.7, 42.0}) {
    std::vector<double> scaled(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) scaled[i] = data[i] / scale;
    Series s(std::vector<double>(data), 1), ss(std::move(scaled), 1);
    for (const auto& f : tbtest::all_functionals())
      CHECK(eval(f, s, 0, 64, scale) == eval(f, ss, 0, 64, 1.0));
  }
}
