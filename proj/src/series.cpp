#include "tailblocks/series.hpp"

#include <algorithm>
#include <cmath>

#include "tailblocks/error.hpp"

namespace tailblocks {

NormKind parse_norm_kind(const std::string& name) {
  if (name == "euclidean" || name == "l2") return NormKind::Euclidean;
  if (name == "sup" || name == "max") return NormKind::Sup;
  if (name == "l1") return NormKind::L1;
  fail(ErrorCode::ParseError, "unknown norm kind: " + name);
}

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::Euclidean: return "euclidean";
    case NormKind::Sup: return "sup";
    case NormKind::L1: return "l1";
  }
  return "euclidean";
}

std::vector<double> compute_norms(std::span<const double> data, std::size_t dim, NormKind kind) {
  if (dim == 0) fail(ErrorCode::InvalidArgument, "dimension must be positive");
  if (data.size() % dim != 0)
    fail(ErrorCode::InvalidArgument, "data length is not a multiple of the dimension");
  const std::size_t n = data.size() / dim;
  std::vector<double> norms(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double* p = data.data() + t * dim;
    double v = 0.0;
    switch (kind) {
      case NormKind::Euclidean: {
        double s = 0.0;
        for (std::size_t c = 0; c < dim; ++c) s += p[c] * p[c];
        v = std::sqrt(s);
        break;
      }
      case NormKind::Sup: {
        for (std::size_t c = 0; c < dim; ++c) v = std::max(v, std::fabs(p[c]));
        break;
      }
      case NormKind::L1: {
        for (std::size_t c = 0; c < dim; ++c) v += std::fabs(p[c]);
        break;
      }
    }
    norms[t] = v;
  }
  // d = 1: all three kinds coincide with |x|, cheaper and exact
  if (dim == 1)
    for (std::size_t t = 0; t < n; ++t) norms[t] = std::fabs(data[t]);
  return norms;
}

Series::Series(std::vector<double> data, std::size_t dim, NormKind norm)
    : data_(std::move(data)), dim_(dim), norm_(norm) {
  if (dim_ == 0) fail(ErrorCode::InvalidArgument, "dimension must be positive");
  if (data_.empty() || data_.size() % dim_ != 0)
    fail(ErrorCode::InvalidArgument, "data length must be a positive multiple of the dimension");
  n_ = data_.size() / dim_;
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!std::isfinite(data_[i]))
      fail(ErrorCode::InvalidArgument,
           "non-finite coordinate at point " + std::to_string(i / dim_));
  norms_ = compute_norms(data_, dim_, norm_);
}

Threshold order_statistic(std::span<const double> norms, std::size_t k) {
  const std::size_t n = norms.size();
  if (k < 1 || k >= n)
    fail(ErrorCode::InvalidScheme, "order statistic requires 1 <= k < n, got k=" + std::to_string(k) +
                                       " n=" + std::to_string(n));
  std::vector<double> scratch(norms.begin(), norms.end());
  auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(n - k - 1);
  std::nth_element(scratch.begin(), nth, scratch.end());
  return Threshold{*nth, Threshold::Origin::OrderStatistic, k};
}

BlockScheme validate_scheme(std::size_t n, std::size_t block_len, std::size_t k,
                            std::vector<std::string>* warnings) {
  if (n < 1) fail(ErrorCode::InvalidScheme, "empty sample");
  if (block_len < 1) fail(ErrorCode::InvalidScheme, "block length must be >= 1");
  if (block_len > n)
    fail(ErrorCode::InvalidScheme, "block length " + std::to_string(block_len) +
                                       " exceeds sample size " + std::to_string(n));
  if (k < 1 || k >= n)
    fail(ErrorCode::InvalidScheme, "exceedance count must satisfy 1 <= k < n");
  BlockScheme s;
  s.n = n;
  s.block_len = block_len;
  s.k = k;
  s.num_blocks = n / block_len;
  s.num_windows = n - block_len + 1;
  if (warnings) {
    const double r = double(block_len), nn = double(n), kk = double(k);
    if (r / nn > 0.1)
      warnings->push_back("r_n/n = " + std::to_string(r / nn) + " > 0.1; blocks are large relative to the sample");
    if (k < 20) warnings->push_back("k < 20; the empirical threshold is noisy");
    if (r * kk / nn > 5.0)
      warnings->push_back("r_n*k/n = " + std::to_string(r * kk / nn) +
                          " > 5; expected exceedances per block are high");
  }
  return s;
}

}  // namespace tailblocks
