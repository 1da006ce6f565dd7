#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tailblocks/functionals.hpp"
#include "tailblocks/series.hpp"

namespace tailblocks {

enum class EstimatorMode { Disjoint, Sliding, SlidingPseudo, SlidingQuasi };

std::string to_string(EstimatorMode mode);
EstimatorMode parse_estimator_mode(const std::string& name);

struct EstimateResult {
  double value = 0.0;
  FunctionalSpec functional;
  BlockScheme scheme;
  Threshold threshold;
  EstimatorMode mode = EstimatorMode::Sliding;
  std::size_t exceedance_count_observed = 0;
};

// disjoint blocks estimator with the k-th upper order statistic as threshold:
// (1/k) * sum over blocks of H(block / threshold)
EstimateResult estimate_disjoint(const Series& series, const FunctionalSpec& functional,
                                 const BlockScheme& scheme);

// sliding blocks estimator: (1/(r_n k)) * sum over windows of H(window / threshold)
EstimateResult estimate_sliding(const Series& series, const FunctionalSpec& functional,
                                const BlockScheme& scheme);

// sliding blocks with known threshold c and known tail probability p:
// normalizes by q_n * r_n * p
EstimateResult estimate_sliding_pseudo(const Series& series, const FunctionalSpec& functional,
                                       std::size_t block_len, double c, double p);

// sliding blocks with known threshold c; q_n * p is replaced by the observed
// exceedance count among the first q_n points
EstimateResult estimate_sliding_quasi(const Series& series, const FunctionalSpec& functional,
                                      std::size_t block_len, double c);

// T(s) = (1/k) * #{ j <= q_n : ||X_j|| > threshold * s }, nonincreasing in s
std::vector<std::pair<double, double>> tail_empirical_process(const Series& series,
                                                              const BlockScheme& scheme,
                                                              std::span<const double> s_grid);

// empirical anticlustering diagnostic: for each lag cutoff k, the fraction of
// anchors ||X_t|| > c*y whose neighbourhood max over k <= |j| <= r exceeds c*x
struct DhRow {
  std::size_t k = 0;
  double p_hat = 0.0;
  std::size_t anchors = 0;
};
std::vector<DhRow> dh_diagnostic(const Series& series, double c, double x, double y,
                                 std::span<const std::size_t> k_grid, std::size_t block_len);

// empirical pairwise-exceedance sums: S_m = sum_{j=m}^{r} P(||X_0||>c s, ||X_j||>c t) / P(||X_0||>c)
struct SConditionRow {
  std::size_t m = 0;
  double s_hat = 0.0;
};
std::vector<SConditionRow> s_condition_diagnostic(const Series& series, double c, double s,
                                                  double t, std::span<const std::size_t> m_grid,
                                                  std::size_t block_len);

// small-jump negligibility diagnostic over disjoint blocks
struct AnsjbRow {
  double epsilon = 0.0;
  double a_hat = 0.0;
};
std::vector<AnsjbRow> ansjb_diagnostic(const Series& series, double c, double eta,
                                       std::span<const double> epsilon_grid,
                                       std::size_t block_len);

}  // namespace tailblocks
