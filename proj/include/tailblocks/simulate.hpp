#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tailblocks/series.hpp"

namespace tailblocks {

enum class ProcessKind { IidPareto, Ar1, Ma };

// Heavy-tailed generators with standard Pareto innovations (support [1, inf)),
// so the series is positive and regularly varying with the innovation index.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::IidPareto;
  double alpha = 1.0;
  double rho = 0.5;                  // Ar1
  std::vector<double> coeffs;        // Ma, first coefficient must be 1
  std::size_t length = 0;
  std::size_t burn_in = kAutoBurnIn; // kAutoBurnIn picks the model default
  std::uint64_t seed = 0;

  static constexpr std::size_t kAutoBurnIn = std::size_t(-1);
};

// grammar: iid:alpha=1 | ar1:rho=0.5,alpha=1 | ma1:b=0.7,alpha=1.5
ProcessSpec parse_process(const std::string& text);
std::string process_to_string(const ProcessSpec& spec);

// smallest burn-in that damps initialization below 1e-12 (Ar1), the coefficient
// lookback (Ma), or 0 (iid)
std::size_t default_burn_in(const ProcessSpec& spec);

Series generate(const ProcessSpec& spec);

}  // namespace tailblocks
