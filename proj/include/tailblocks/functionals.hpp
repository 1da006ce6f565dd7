#pragma once

#include <span>
#include <string>

#include "tailblocks/series.hpp"

namespace tailblocks {

// Block functionals applied to scaled blocks x/s. The first three act on
// norms and work in any dimension; the last three use the signed values of a
// univariate series.
//
//   Exc                number of coordinates with norm above the scale
//   ExtremalIndicator  1 iff the block maximum norm is above the scale
//   ClusterSize(m)     1 iff exactly m coordinates are above the scale
//   StopLoss(eta)      1 iff sum of (x_j/s - 1)+ exceeds eta
//   LargeDeviation     1 iff the positive part of the block sum of x_j/s exceeds 1
//   Ruin               1 iff some prefix sum of x_j/s exceeds 1
enum class Functional { Exc, ExtremalIndicator, ClusterSize, StopLoss, LargeDeviation, Ruin };

struct FunctionalSpec {
  Functional kind = Functional::ExtremalIndicator;
  long cluster_size_m = 1;    // ClusterSize only
  double stop_loss_eta = 1.0; // StopLoss only

  bool requires_univariate() const {
    return kind == Functional::StopLoss || kind == Functional::LargeDeviation ||
           kind == Functional::Ruin;
  }
  // class B functionals have support not separated from zero; their cluster
  // indices additionally need the small-jump negligibility diagnostic
  bool is_class_b() const {
    return kind == Functional::LargeDeviation || kind == Functional::Ruin;
  }
  bool indicator_valued() const { return kind != Functional::Exc; }
};

// grammar: exc | extremal | cluster-size:m=3 | stop-loss:eta=1.5 | large-dev | ruin
FunctionalSpec parse_functional(const std::string& text);
std::string to_string(const FunctionalSpec& spec);

// single block [start, start+len), brute force in O(len)
double eval(const FunctionalSpec& spec, const Series& series, std::size_t start, std::size_t len,
            double scale);

// same functional on a free-standing univariate block (norm = |x|)
double eval_univariate(const FunctionalSpec& spec, std::span<const double> values, double scale);

// sum of eval over all n - r + 1 sliding windows of length r, O(n) total
double sliding_sum(const FunctionalSpec& spec, const Series& series, std::size_t block_len,
                   double scale);

// sum of eval over the floor(n/r) disjoint blocks; the trailing partial block
// is discarded
double disjoint_sum(const FunctionalSpec& spec, const Series& series, std::size_t block_len,
                    double scale);

}  // namespace tailblocks
