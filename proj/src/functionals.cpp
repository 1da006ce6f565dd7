#include "tailblocks/functionals.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <vector>

#include "tailblocks/error.hpp"

namespace tailblocks {

namespace {

// Neumaier-compensated accumulator; supports removal so a window sum can be
// slid without O(r) recomputation
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  void remove(double v) { add(-v); }
  double value() const { return sum + comp; }
};

void check_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    fail(ErrorCode::InvalidArgument, "scale must be a positive finite real");
}

void check_univariate(const FunctionalSpec& spec, std::size_t dim) {
  if (spec.requires_univariate() && dim != 1)
    fail(ErrorCode::DimensionMismatch,
         to_string(spec) + " is defined for univariate series only (dim = " +
             std::to_string(dim) + ")");
}

double eval_block(const FunctionalSpec& spec, const double* values, const double* norms,
                  std::size_t len, double scale) {
  switch (spec.kind) {
    case Functional::Exc: {
      std::size_t count = 0;
      for (std::size_t j = 0; j < len; ++j) count += norms[j] > scale;
      return double(count);
    }
    case Functional::ExtremalIndicator: {
      double mx = 0.0;
      for (std::size_t j = 0; j < len; ++j) mx = std::max(mx, norms[j]);
      return mx > scale ? 1.0 : 0.0;
    }
    case Functional::ClusterSize: {
      std::size_t count = 0;
      for (std::size_t j = 0; j < len; ++j) count += norms[j] > scale;
      return count == std::size_t(spec.cluster_size_m) ? 1.0 : 0.0;
    }
    case Functional::StopLoss: {
      double acc = 0.0;
      for (std::size_t j = 0; j < len; ++j) acc += std::max(values[j] / scale - 1.0, 0.0);
      return acc > spec.stop_loss_eta ? 1.0 : 0.0;
    }
    case Functional::LargeDeviation: {
      double acc = 0.0;
      for (std::size_t j = 0; j < len; ++j) acc += values[j] / scale;
      return acc > 1.0 ? 1.0 : 0.0;
    }
    case Functional::Ruin: {
      double acc = 0.0, best = 0.0;
      for (std::size_t j = 0; j < len; ++j) {
        acc += values[j] / scale;
        best = std::max(best, acc);
      }
      return best > 1.0 ? 1.0 : 0.0;
    }
  }
  fail(ErrorCode::Unsupported, "unknown functional");
}

}  // namespace

FunctionalSpec parse_functional(const std::string& text) {
  std::string head = text, params;
  if (auto pos = text.find(':'); pos != std::string::npos) {
    head = text.substr(0, pos);
    params = text.substr(pos + 1);
  }
  FunctionalSpec spec;
  if (head == "exc")
    spec.kind = Functional::Exc;
  else if (head == "extremal")
    spec.kind = Functional::ExtremalIndicator;
  else if (head == "cluster-size")
    spec.kind = Functional::ClusterSize;
  else if (head == "stop-loss")
    spec.kind = Functional::StopLoss;
  else if (head == "large-dev")
    spec.kind = Functional::LargeDeviation;
  else if (head == "ruin")
    spec.kind = Functional::Ruin;
  else
    fail(ErrorCode::ParseError, "unknown functional: " + text);

  bool have_m = false, have_eta = false;
  std::size_t start = 0;
  while (start < params.size()) {
    auto end = params.find(',', start);
    if (end == std::string::npos) end = params.size();
    std::string kv = params.substr(start, end - start);
    start = end + 1;
    auto eq = kv.find('=');
    if (eq == std::string::npos) fail(ErrorCode::ParseError, "expected key=value in " + text);
    std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    char* endp = nullptr;
    double v = std::strtod(val.c_str(), &endp);
    if (endp == val.c_str() || *endp != '\0')
      fail(ErrorCode::ParseError, "bad numeric value for " + key + " in " + text);
    if (key == "m") {
      if (v < 1 || v != std::floor(v)) fail(ErrorCode::ParseError, "m must be a positive integer");
      spec.cluster_size_m = long(v);
      have_m = true;
    } else if (key == "eta") {
      if (!(v > 0)) fail(ErrorCode::ParseError, "eta must be positive");
      spec.stop_loss_eta = v;
      have_eta = true;
    } else {
      fail(ErrorCode::ParseError, "unknown parameter " + key + " in " + text);
    }
  }
  if (spec.kind == Functional::ClusterSize && !have_m)
    fail(ErrorCode::ParseError, "cluster-size requires m=<integer>");
  if (spec.kind == Functional::StopLoss && !have_eta)
    fail(ErrorCode::ParseError, "stop-loss requires eta=<real>");
  if (have_m && spec.kind != Functional::ClusterSize)
    fail(ErrorCode::ParseError, "parameter m is only valid for cluster-size");
  if (have_eta && spec.kind != Functional::StopLoss)
    fail(ErrorCode::ParseError, "parameter eta is only valid for stop-loss");
  return spec;
}

std::string to_string(const FunctionalSpec& spec) {
  switch (spec.kind) {
    case Functional::Exc: return "exc";
    case Functional::ExtremalIndicator: return "extremal";
    case Functional::ClusterSize: return "cluster-size:m=" + std::to_string(spec.cluster_size_m);
    case Functional::StopLoss: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "stop-loss:eta=%g", spec.stop_loss_eta);
      return buf;
    }
    case Functional::LargeDeviation: return "large-dev";
    case Functional::Ruin: return "ruin";
  }
  return "?";
}

double eval(const FunctionalSpec& spec, const Series& series, std::size_t start, std::size_t len,
            double scale) {
  check_scale(scale);
  check_univariate(spec, series.dim());
  if (len < 1 || start + len > series.size())
    fail(ErrorCode::InvalidArgument, "block out of range");
  return eval_block(spec, series.data().data() + start * series.dim(),
                    series.norms().data() + start, len, scale);
}

double eval_univariate(const FunctionalSpec& spec, std::span<const double> values, double scale) {
  check_scale(scale);
  if (values.empty()) fail(ErrorCode::InvalidArgument, "empty block");
  std::vector<double> norms(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) norms[j] = std::fabs(values[j]);
  return eval_block(spec, values.data(), norms.data(), values.size(), scale);
}

double sliding_sum(const FunctionalSpec& spec, const Series& series, std::size_t block_len,
                   double scale) {
  check_scale(scale);
  check_univariate(spec, series.dim());
  const std::size_t n = series.size();
  if (block_len < 1 || block_len > n) fail(ErrorCode::InvalidScheme, "bad block length");
  const std::size_t r = block_len;
  const auto norms = series.norms();

  switch (spec.kind) {
    case Functional::Exc: {
      // exceedance count telescopes across windows
      unsigned long long total = 0, in_window = 0;
      for (std::size_t j = 0; j < n; ++j) {
        in_window += norms[j] > scale;
        if (j >= r) in_window -= norms[j - r] > scale;
        if (j + 1 >= r) total += in_window;
      }
      return double(total);
    }
    case Functional::ClusterSize: {
      const auto m = std::size_t(spec.cluster_size_m);
      unsigned long long total = 0, in_window = 0;
      for (std::size_t j = 0; j < n; ++j) {
        in_window += norms[j] > scale;
        if (j >= r) in_window -= norms[j - r] > scale;
        if (j + 1 >= r) total += in_window == m;
      }
      return double(total);
    }
    case Functional::ExtremalIndicator: {
      // monotonic deque sliding maximum
      std::deque<std::size_t> dq;
      unsigned long long total = 0;
      for (std::size_t j = 0; j < n; ++j) {
        while (!dq.empty() && norms[dq.back()] <= norms[j]) dq.pop_back();
        dq.push_back(j);
        if (dq.front() + r <= j) dq.pop_front();
        if (j + 1 >= r) total += norms[dq.front()] > scale;
      }
      return double(total);
    }
    case Functional::StopLoss: {
      CompensatedSum acc;
      unsigned long long total = 0;
      auto term = [&](std::size_t j) { return std::max(series.value(j) / scale - 1.0, 0.0); };
      for (std::size_t j = 0; j < n; ++j) {
        acc.add(term(j));
        if (j >= r) acc.remove(term(j - r));
        if (j + 1 >= r) total += acc.value() > spec.stop_loss_eta;
      }
      return double(total);
    }
    case Functional::LargeDeviation: {
      CompensatedSum acc;
      unsigned long long total = 0;
      for (std::size_t j = 0; j < n; ++j) {
        acc.add(series.value(j) / scale);
        if (j >= r) acc.remove(series.value(j - r) / scale);
        if (j + 1 >= r) total += acc.value() > 1.0;
      }
      return double(total);
    }
    case Functional::Ruin: {
      // window value = max over in-window prefix positions of P[t] - P[base],
      // with P the running prefix sums of x/scale; deque holds the max of P
      std::vector<double> prefix(n + 1);
      CompensatedSum acc;
      prefix[0] = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        acc.add(series.value(j) / scale);
        prefix[j + 1] = acc.value();
      }
      std::deque<std::size_t> dq;
      unsigned long long total = 0;
      for (std::size_t t = 1; t <= n; ++t) {
        while (!dq.empty() && prefix[dq.back()] <= prefix[t]) dq.pop_back();
        dq.push_back(t);
        if (t >= r) {
          const std::size_t base = t - r;  // window covers positions base..base+r-1
          while (dq.front() <= base) dq.pop_front();
          total += prefix[dq.front()] - prefix[base] > 1.0;
        }
      }
      return double(total);
    }
  }
  fail(ErrorCode::Unsupported, "unknown functional");
}

double disjoint_sum(const FunctionalSpec& spec, const Series& series, std::size_t block_len,
                    double scale) {
  check_scale(scale);
  check_univariate(spec, series.dim());
  const std::size_t n = series.size();
  if (block_len < 1 || block_len > n) fail(ErrorCode::InvalidScheme, "bad block length");
  const std::size_t m = n / block_len;
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    total += eval_block(spec, series.data().data() + i * block_len * series.dim(),
                        series.norms().data() + i * block_len, block_len, scale);
  return total;
}

}  // namespace tailblocks
