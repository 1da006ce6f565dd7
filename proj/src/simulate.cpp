#include "tailblocks/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "tailblocks/error.hpp"
#include "tailblocks/rng.hpp"

namespace tailblocks {

namespace {

void validate(const ProcessSpec& spec) {
  if (!(spec.alpha > 0.0)) fail(ErrorCode::InvalidArgument, "alpha must be positive");
  if (spec.kind == ProcessKind::Ar1 && !(spec.rho > 0.0 && spec.rho < 1.0))
    fail(ErrorCode::InvalidArgument, "rho must lie in (0, 1)");
  if (spec.kind == ProcessKind::Ma) {
    if (spec.coeffs.empty() || spec.coeffs.front() != 1.0)
      fail(ErrorCode::InvalidArgument, "moving-average coefficients must start with 1");
    for (double c : spec.coeffs)
      if (!(c >= 0.0)) fail(ErrorCode::InvalidArgument, "moving-average coefficients must be nonnegative");
  }
  if (spec.length < 1) fail(ErrorCode::InvalidArgument, "length must be positive");
}

double parse_num(const std::string& key, const std::string& val) {
  char* end = nullptr;
  double v = std::strtod(val.c_str(), &end);
  if (end == val.c_str() || *end != '\0')
    fail(ErrorCode::ParseError, "bad numeric value for " + key);
  return v;
}

}  // namespace

ProcessSpec parse_process(const std::string& text) {
  std::string head = text, params;
  if (auto pos = text.find(':'); pos != std::string::npos) {
    head = text.substr(0, pos);
    params = text.substr(pos + 1);
  }
  ProcessSpec spec;
  if (head == "iid")
    spec.kind = ProcessKind::IidPareto;
  else if (head == "ar1")
    spec.kind = ProcessKind::Ar1;
  else if (head == "ma1")
    spec.kind = ProcessKind::Ma;
  else
    fail(ErrorCode::ParseError, "unknown process kind: " + text);

  double b = 0.0;
  bool have_b = false, have_rho = false, have_alpha = false;
  std::size_t start = 0;
  while (start < params.size()) {
    auto end = params.find(',', start);
    if (end == std::string::npos) end = params.size();
    std::string kv = params.substr(start, end - start);
    start = end + 1;
    auto eq = kv.find('=');
    if (eq == std::string::npos) fail(ErrorCode::ParseError, "expected key=value in " + text);
    std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    double v = parse_num(key, val);
    if (key == "alpha") {
      spec.alpha = v;
      have_alpha = true;
    } else if (key == "rho") {
      spec.rho = v;
      have_rho = true;
    } else if (key == "b") {
      b = v;
      have_b = true;
    } else {
      fail(ErrorCode::ParseError, "unknown parameter " + key + " in " + text);
    }
  }
  if (!have_alpha) fail(ErrorCode::ParseError, "process grammar requires alpha=<real>");
  if (spec.kind == ProcessKind::Ar1 && !have_rho)
    fail(ErrorCode::ParseError, "ar1 requires rho=<real>");
  if (spec.kind == ProcessKind::Ma) {
    if (!have_b) fail(ErrorCode::ParseError, "ma1 requires b=<real>");
    if (!(b > 0.0)) fail(ErrorCode::ParseError, "b must be positive");
    spec.coeffs = {1.0, b};
  }
  if (have_b && spec.kind != ProcessKind::Ma)
    fail(ErrorCode::ParseError, "parameter b is only valid for ma1");
  if (have_rho && spec.kind != ProcessKind::Ar1)
    fail(ErrorCode::ParseError, "parameter rho is only valid for ar1");
  return spec;
}

std::string process_to_string(const ProcessSpec& spec) {
  char buf[96];
  switch (spec.kind) {
    case ProcessKind::IidPareto:
      std::snprintf(buf, sizeof buf, "iid:alpha=%g", spec.alpha);
      break;
    case ProcessKind::Ar1:
      std::snprintf(buf, sizeof buf, "ar1:rho=%g,alpha=%g", spec.rho, spec.alpha);
      break;
    case ProcessKind::Ma:
      std::snprintf(buf, sizeof buf, "ma1:b=%g,alpha=%g",
                    spec.coeffs.size() > 1 ? spec.coeffs[1] : 0.0, spec.alpha);
      break;
  }
  return buf;
}

std::size_t default_burn_in(const ProcessSpec& spec) {
  switch (spec.kind) {
    case ProcessKind::IidPareto: return 0;
    case ProcessKind::Ar1:
      return std::size_t(std::ceil(std::log(1e-12) / std::log(spec.rho)));
    case ProcessKind::Ma: return spec.coeffs.size() - 1;
  }
  return 0;
}

Series generate(const ProcessSpec& spec) {
  validate(spec);
  std::size_t burn = spec.burn_in;
  const std::size_t min_burn = default_burn_in(spec);
  if (burn == ProcessSpec::kAutoBurnIn)
    burn = min_burn;
  else if (burn < min_burn)
    fail(ErrorCode::InvalidArgument,
         "burn-in " + std::to_string(burn) + " below the model minimum " +
             std::to_string(min_burn));
  const std::size_t n = spec.length;
  Rng rng(spec.seed);
  std::vector<double> out(n);

  switch (spec.kind) {
    case ProcessKind::IidPareto: {
      for (std::size_t i = 0; i < burn; ++i) (void)pareto_sample(spec.alpha, rng);
      for (std::size_t t = 0; t < n; ++t) out[t] = pareto_sample(spec.alpha, rng);
      break;
    }
    case ProcessKind::Ar1: {
      double x = pareto_sample(spec.alpha, rng);
      for (std::size_t i = 0; i < burn; ++i) x = spec.rho * x + pareto_sample(spec.alpha, rng);
      for (std::size_t t = 0; t < n; ++t) {
        x = spec.rho * x + pareto_sample(spec.alpha, rng);
        out[t] = x;
      }
      break;
    }
    case ProcessKind::Ma: {
      const std::size_t qlen = spec.coeffs.size();
      std::vector<double> ring(qlen, 0.0);  // ring[i] holds Z_{t-i} after the shift
      std::size_t head = 0;
      auto step = [&]() {
        head = (head + qlen - 1) % qlen;
        ring[head] = pareto_sample(spec.alpha, rng);
        double v = 0.0;
        for (std::size_t i = 0; i < qlen; ++i) v += spec.coeffs[i] * ring[(head + i) % qlen];
        return v;
      };
      for (std::size_t i = 0; i < burn; ++i) (void)step();
      for (std::size_t t = 0; t < n; ++t) out[t] = step();
      break;
    }
  }
  return Series(std::move(out), 1);
}

}  // namespace tailblocks
