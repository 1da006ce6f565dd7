#include "tailblocks/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "tailblocks/error.hpp"

namespace tailblocks {

namespace {

std::size_t count_exceedances(std::span<const double> norms, double threshold, std::size_t upto) {
  std::size_t c = 0;
  for (std::size_t j = 0; j < upto; ++j) c += norms[j] > threshold;
  return c;
}

Threshold data_threshold(const Series& series, const BlockScheme& scheme) {
  Threshold thr = order_statistic(series.norms(), scheme.k);
  if (!(thr.value > 0.0))
    fail(ErrorCode::DegenerateThreshold,
         "order-statistic threshold is not positive; too many zero norms");
  return thr;
}

}  // namespace

std::string to_string(EstimatorMode mode) {
  switch (mode) {
    case EstimatorMode::Disjoint: return "disjoint";
    case EstimatorMode::Sliding: return "sliding";
    case EstimatorMode::SlidingPseudo: return "sliding-pseudo";
    case EstimatorMode::SlidingQuasi: return "sliding-quasi";
  }
  return "?";
}

EstimatorMode parse_estimator_mode(const std::string& name) {
  if (name == "disjoint") return EstimatorMode::Disjoint;
  if (name == "sliding") return EstimatorMode::Sliding;
  if (name == "sliding-pseudo") return EstimatorMode::SlidingPseudo;
  if (name == "sliding-quasi") return EstimatorMode::SlidingQuasi;
  fail(ErrorCode::ParseError, "unknown estimator mode: " + name);
}

EstimateResult estimate_disjoint(const Series& series, const FunctionalSpec& functional,
                                 const BlockScheme& scheme) {
  if (scheme.n != series.size()) fail(ErrorCode::InvalidScheme, "scheme does not match series");
  EstimateResult res;
  res.functional = functional;
  res.scheme = scheme;
  res.mode = EstimatorMode::Disjoint;
  res.threshold = data_threshold(series, scheme);
  res.exceedance_count_observed =
      count_exceedances(series.norms(), res.threshold.value, series.size());
  res.value = disjoint_sum(functional, series, scheme.block_len, res.threshold.value) /
              double(scheme.k);
  return res;
}

EstimateResult estimate_sliding(const Series& series, const FunctionalSpec& functional,
                                const BlockScheme& scheme) {
  if (scheme.n != series.size()) fail(ErrorCode::InvalidScheme, "scheme does not match series");
  EstimateResult res;
  res.functional = functional;
  res.scheme = scheme;
  res.mode = EstimatorMode::Sliding;
  res.threshold = data_threshold(series, scheme);
  res.exceedance_count_observed =
      count_exceedances(series.norms(), res.threshold.value, series.size());
  res.value = sliding_sum(functional, series, scheme.block_len, res.threshold.value) /
              (double(scheme.block_len) * double(scheme.k));
  return res;
}

EstimateResult estimate_sliding_pseudo(const Series& series, const FunctionalSpec& functional,
                                       std::size_t block_len, double c, double p) {
  if (!(c > 0.0)) fail(ErrorCode::InvalidArgument, "threshold c must be positive");
  if (!(p > 0.0) || !(p < 1.0))
    fail(ErrorCode::InvalidArgument, "tail probability p must lie in (0, 1)");
  const std::size_t n = series.size();
  if (block_len < 1 || block_len > n) fail(ErrorCode::InvalidScheme, "bad block length");
  EstimateResult res;
  res.functional = functional;
  res.scheme = BlockScheme{n, block_len, 0, n / block_len, n - block_len + 1};
  res.mode = EstimatorMode::SlidingPseudo;
  res.threshold = Threshold{c, Threshold::Origin::UserSupplied, 0};
  res.exceedance_count_observed = count_exceedances(series.norms(), c, n);
  res.value = sliding_sum(functional, series, block_len, c) /
              (double(res.scheme.num_windows) * double(block_len) * p);
  return res;
}

EstimateResult estimate_sliding_quasi(const Series& series, const FunctionalSpec& functional,
                                      std::size_t block_len, double c) {
  if (!(c > 0.0)) fail(ErrorCode::InvalidArgument, "threshold c must be positive");
  const std::size_t n = series.size();
  if (block_len < 1 || block_len > n) fail(ErrorCode::InvalidScheme, "bad block length");
  const std::size_t q = n - block_len + 1;
  const std::size_t observed = count_exceedances(series.norms(), c, q);
  if (observed == 0)
    fail(ErrorCode::DegenerateThreshold,
         "no exceedances of c among the first q_n points; estimator undefined");
  EstimateResult res;
  res.functional = functional;
  res.scheme = BlockScheme{n, block_len, 0, n / block_len, q};
  res.mode = EstimatorMode::SlidingQuasi;
  res.threshold = Threshold{c, Threshold::Origin::UserSupplied, 0};
  res.exceedance_count_observed = observed;
  res.value =
      sliding_sum(functional, series, block_len, c) / (double(block_len) * double(observed));
  return res;
}

std::vector<std::pair<double, double>> tail_empirical_process(const Series& series,
                                                              const BlockScheme& scheme,
                                                              std::span<const double> s_grid) {
  if (scheme.n != series.size()) fail(ErrorCode::InvalidScheme, "scheme does not match series");
  if (s_grid.empty()) fail(ErrorCode::InvalidArgument, "empty scale grid");
  for (double s : s_grid)
    if (!(s > 0.0)) fail(ErrorCode::InvalidArgument, "scale grid entries must be positive");
  const Threshold thr = data_threshold(series, scheme);
  const auto norms = series.norms();
  std::vector<std::pair<double, double>> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    std::size_t count = 0;
    const double level = thr.value * s;
    for (std::size_t j = 0; j < scheme.num_windows; ++j) count += norms[j] > level;
    out.emplace_back(s, double(count) / double(scheme.k));
  }
  return out;
}

std::vector<DhRow> dh_diagnostic(const Series& series, double c, double x, double y,
                                 std::span<const std::size_t> k_grid, std::size_t block_len) {
  if (!(c > 0.0) || !(x > 0.0) || !(y > 0.0))
    fail(ErrorCode::InvalidArgument, "c, x, y must be positive");
  const std::size_t n = series.size();
  const std::size_t r = block_len;
  if (r < 1) fail(ErrorCode::InvalidScheme, "bad block length");
  if (k_grid.empty()) fail(ErrorCode::InvalidArgument, "empty lag grid");
  for (auto k : k_grid)
    if (k < 1 || k > r) fail(ErrorCode::InvalidArgument, "lag cutoffs must lie in [1, r_n]");
  if (n < 2 * r + 1)
    fail(ErrorCode::InsufficientSample, "need n >= 2 r_n + 1 for two-sided anchors");
  const auto norms = series.norms();
  const double anchor_level = c * y;
  const double exc_level = c * x;

  // anchors t (1-based) in [r+1, n-r]; both sides of the window fit
  std::vector<std::size_t> anchors;
  for (std::size_t t = r; t + r < n; ++t)
    if (norms[t] > anchor_level) anchors.push_back(t);
  if (anchors.empty())
    fail(ErrorCode::DegenerateThreshold, "no anchor exceedances of c*y in the interior");

  std::vector<std::size_t> hits(r + 2, 0);
  std::vector<double> back(r + 2), fwd(r + 2);
  for (std::size_t t : anchors) {
    back[r + 1] = 0.0;
    fwd[r + 1] = 0.0;
    for (std::size_t j = r; j >= 1; --j) {
      back[j] = std::max(back[j + 1], norms[t - j]);
      fwd[j] = std::max(fwd[j + 1], norms[t + j]);
    }
    for (std::size_t j = 1; j <= r; ++j)
      hits[j] += std::max(back[j], fwd[j]) > exc_level;
  }
  std::vector<DhRow> out;
  out.reserve(k_grid.size());
  for (auto k : k_grid)
    out.push_back(DhRow{k, double(hits[k]) / double(anchors.size()), anchors.size()});
  return out;
}

std::vector<SConditionRow> s_condition_diagnostic(const Series& series, double c, double s,
                                                  double t, std::span<const std::size_t> m_grid,
                                                  std::size_t block_len) {
  if (!(c > 0.0) || !(s > 0.0) || !(t > 0.0))
    fail(ErrorCode::InvalidArgument, "c, s, t must be positive");
  const std::size_t n = series.size();
  const std::size_t r = block_len;
  if (r < 1 || r > n) fail(ErrorCode::InvalidScheme, "bad block length");
  if (m_grid.empty()) fail(ErrorCode::InvalidArgument, "empty m grid");
  for (auto m : m_grid)
    if (m < 1 || m > r + 1)
      fail(ErrorCode::InvalidArgument, "m grid entries must lie in [1, r_n + 1]");
  const auto norms = series.norms();
  const std::size_t base_count = count_exceedances(norms, c, n);
  if (base_count == 0) fail(ErrorCode::DegenerateThreshold, "no exceedances of c");
  const double p_base = double(base_count) / double(n);

  std::vector<std::size_t> lead;  // positions above c*s
  for (std::size_t j = 0; j < n; ++j)
    if (norms[j] > c * s) lead.push_back(j);

  // pair_rate[j] estimates P(||X_0|| > c s, ||X_j|| > c t)
  std::vector<double> pair_rate(r + 2, 0.0);
  for (std::size_t j = 1; j <= r && j < n; ++j) {
    std::size_t cnt = 0;
    for (std::size_t i : lead) {
      if (i + j >= n) break;
      cnt += norms[i + j] > c * t;
    }
    pair_rate[j] = double(cnt) / double(n - j);
  }
  // suffix sums over j = m..r
  std::vector<double> suffix(r + 3, 0.0);
  for (std::size_t j = r; j >= 1; --j) suffix[j] = suffix[j + 1] + pair_rate[j];

  std::vector<SConditionRow> out;
  out.reserve(m_grid.size());
  for (auto m : m_grid) out.push_back(SConditionRow{m, suffix[m] / p_base});
  return out;
}

std::vector<AnsjbRow> ansjb_diagnostic(const Series& series, double c, double eta,
                                       std::span<const double> epsilon_grid,
                                       std::size_t block_len) {
  if (!(c > 0.0)) fail(ErrorCode::InvalidArgument, "c must be positive");
  if (!(eta > 0.0)) fail(ErrorCode::InvalidArgument, "eta must be positive");
  const std::size_t n = series.size();
  const std::size_t r = block_len;
  if (r < 1 || r > n) fail(ErrorCode::InvalidScheme, "bad block length");
  if (epsilon_grid.empty()) fail(ErrorCode::InvalidArgument, "empty epsilon grid");
  for (double e : epsilon_grid)
    if (!(e > 0.0) || e > 1.0)
      fail(ErrorCode::InvalidArgument, "epsilon grid entries must lie in (0, 1]");
  const auto norms = series.norms();
  const std::size_t base_count = count_exceedances(norms, c, n);
  if (base_count == 0) fail(ErrorCode::DegenerateThreshold, "no exceedances of c");
  const double p_base = double(base_count) / double(n);
  const std::size_t m = n / r;

  std::vector<AnsjbRow> out;
  out.reserve(epsilon_grid.size());
  for (double eps : epsilon_grid) {
    const double cut = eps * c;
    std::size_t over = 0;
    for (std::size_t i = 0; i < m; ++i) {
      double sum = 0.0;
      for (std::size_t j = i * r; j < (i + 1) * r; ++j)
        if (norms[j] <= cut) sum += norms[j];
      over += sum > eta * c;
    }
    out.push_back(AnsjbRow{eps, double(over) / double(m) / (double(r) * p_base)});
  }
  return out;
}

}  // namespace tailblocks
