#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tailblocks {

enum class NormKind { Euclidean, Sup, L1 };

NormKind parse_norm_kind(const std::string& name);
std::string to_string(NormKind kind);

/// Immutable multivariate sample with cached norms.
class Series {
 public:
  // data is row-major, n rows of dim coordinates
  Series(std::vector<double> data, std::size_t dim, NormKind norm = NormKind::Euclidean);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  NormKind norm_kind() const { return norm_; }

  std::span<const double> point(std::size_t t) const { return {data_.data() + t * dim_, dim_}; }
  double value(std::size_t t) const { return data_[t * dim_]; }  // univariate access
  std::span<const double> norms() const { return norms_; }
  double norm(std::size_t t) const { return norms_[t]; }
  std::span<const double> data() const { return data_; }

 private:
  std::vector<double> data_;
  std::size_t n_;
  std::size_t dim_;
  NormKind norm_;
  std::vector<double> norms_;
};

std::vector<double> compute_norms(std::span<const double> data, std::size_t dim, NormKind kind);

struct Threshold {
  enum class Origin { OrderStatistic, UserSupplied };
  double value = 0.0;
  Origin origin = Origin::UserSupplied;
  std::size_t k = 0;  // meaningful for OrderStatistic
};

// the (n-k)-th smallest norm, so that at most k values lie strictly above;
// expected O(n) selection
Threshold order_statistic(std::span<const double> norms, std::size_t k);

struct BlockScheme {
  std::size_t n = 0;
  std::size_t block_len = 0;      // r_n
  std::size_t k = 0;              // intermediate exceedance count
  std::size_t num_blocks = 0;     // m_n = floor(n / r_n)
  std::size_t num_windows = 0;    // q_n = n - r_n + 1
};

// checks hard constraints, returns the scheme, and appends soft warnings
// (weak finite-sample proxies for the asymptotic block/threshold regime)
BlockScheme validate_scheme(std::size_t n, std::size_t block_len, std::size_t k,
                            std::vector<std::string>* warnings = nullptr);

}  // namespace tailblocks
