#include "tailblocks/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "jsonfmt.hpp"
#include "tailblocks/error.hpp"
#include "tailblocks/series.hpp"

namespace tailblocks {

namespace {

struct MeanAcc {
  double sum = 0.0, sumsq = 0.0;
  std::size_t n = 0;
  void add(double v) {
    sum += v;
    sumsq += v * v;
    ++n;
  }
  McValue done() const {
    if (n == 0) return {0.0, 0.0};
    const double m = sum / double(n);
    double var = sumsq / double(n) - m * m;
    if (var < 0.0) var = 0.0;
    if (n > 1) var *= double(n) / double(n - 1);
    return {m, std::sqrt(var / double(n))};
  }
};

// chunked Monte Carlo mean with one derived stream per chunk, merged in chunk
// order; the result depends only on (samples, seed)
constexpr std::size_t kChunk = 8192;

template <typename PerDraw>
McValue mc_mean(std::size_t samples, std::uint64_t seed, PerDraw&& per_draw) {
  MeanAcc acc;
  std::size_t chunk_index = 0;
  for (std::size_t start = 0; start < samples; start += kChunk, ++chunk_index) {
    Rng rng(derive_seed(seed, chunk_index));
    const std::size_t count = std::min(kChunk, samples - start);
    for (std::size_t i = 0; i < count; ++i) acc.add(per_draw(rng));
  }
  return acc.done();
}

// precomputed spectral shapes so path draws stay O(lag) without pow calls
struct PathSampler {
  const TailProcessModel model;
  std::vector<double> fwd;  // rho^j, j = 0..lag (Ar1)
  std::vector<double> bwd;  // rho^-j, j = 0..lag (Ar1)
  double survival = 0.0;    // per-step backward survival probability rho^alpha
  double ma_forward_weight = 0.0;  // P(spectral atom with the companion at +1)

  explicit PathSampler(const TailProcessModel& m) : model(m) {
    if (model.kind == ModelKind::Ar1) {
      fwd.resize(std::size_t(model.lag) + 1);
      bwd.resize(std::size_t(model.lag) + 1);
      fwd[0] = bwd[0] = 1.0;
      for (int j = 1; j <= model.lag; ++j) {
        fwd[std::size_t(j)] = fwd[std::size_t(j - 1)] * model.rho;
        bwd[std::size_t(j)] = bwd[std::size_t(j - 1)] / model.rho;
      }
      survival = std::pow(model.rho, model.alpha);
    } else if (model.kind == ModelKind::Ma1) {
      const double ba = std::pow(model.b, model.alpha);
      ma_forward_weight = 1.0 / (1.0 + ba);
    }
  }

  void draw(Rng& rng, TailPath& out) const {
    const std::size_t len = 2 * std::size_t(model.lag) + 1;
    out.lag = model.lag;
    out.values.assign(len, 0.0);
    const double radius = pareto_sample(model.alpha, rng);
    out.slot(0) = radius;
    switch (model.kind) {
      case ModelKind::Iid:
        break;
      case ModelKind::Ar1: {
        for (int j = 1; j <= model.lag; ++j) out.slot(j) = radius * fwd[std::size_t(j)];
        for (int j = 1; j <= model.lag; ++j) {
          if (!(rng.uniform01() < survival)) break;
          out.slot(-j) = radius * bwd[std::size_t(j)];
        }
        break;
      }
      case ModelKind::Ma1: {
        if (rng.uniform01() < ma_forward_weight)
          out.slot(1) = radius * model.b;
        else
          out.slot(-1) = radius / model.b;
        break;
      }
    }
  }
};

double eval_path(const FunctionalSpec& functional, const TailPath& path) {
  return eval_univariate(functional, path.span(), 1.0);
}

double exc_count(const TailPath& path) {
  double c = 0;
  for (double v : path.values) c += std::fabs(v) > 1.0;
  return c;
}

double backward_max(const TailPath& path) {
  double mx = 0.0;
  for (int j = -path.lag; j <= -1; ++j) mx = std::max(mx, std::fabs(path.at(j)));
  return mx;
}

double forward_max(const TailPath& path) {
  double mx = 0.0;
  for (int j = 1; j <= path.lag; ++j) mx = std::max(mx, std::fabs(path.at(j)));
  return mx;
}

// K_+^alpha(Theta_{j0..}) for the two 1-homogeneous class-B functionals
double class_b_k_power(Functional kind, const TailPath& path, int j0, double radius,
                       double alpha) {
  double acc = 0.0, best = 0.0;
  for (int j = j0; j <= path.lag; ++j) {
    acc += path.at(j) / radius;
    best = std::max(best, acc);
  }
  const double k = kind == Functional::Ruin ? best : std::max(acc, 0.0);
  return k > 0.0 ? std::pow(k, alpha) : 0.0;
}

template <typename H>
McValue anchored_mean(const TailProcessModel& model, std::size_t samples, std::uint64_t seed,
                      H&& h) {
  PathSampler sampler(model);
  TailPath path;
  return mc_mean(samples, seed, [&](Rng& rng) {
    sampler.draw(rng, path);
    if (infargmax(path) != 0) return 0.0;
    return h(path);
  });
}

void check_samples(std::size_t samples) {
  if (samples < 2) fail(ErrorCode::InvalidArgument, "need at least 2 Monte Carlo samples");
}

}  // namespace

TailProcessModel TailProcessModel::iid(double alpha) {
  if (!(alpha > 0.0)) fail(ErrorCode::InvalidArgument, "alpha must be positive");
  TailProcessModel m;
  m.kind = ModelKind::Iid;
  m.alpha = alpha;
  m.lag = 1;
  return m;
}

TailProcessModel TailProcessModel::ar1(double rho, double alpha) {
  if (!(alpha > 0.0)) fail(ErrorCode::InvalidArgument, "alpha must be positive");
  if (!(rho > 0.0 && rho < 1.0)) fail(ErrorCode::InvalidArgument, "rho must lie in (0, 1)");
  TailProcessModel m;
  m.kind = ModelKind::Ar1;
  m.rho = rho;
  m.alpha = alpha;
  // truncation: rho^L < 1e-9 and discarded exceedance-probability mass
  // 2 rho^{(L+1) alpha} / (1 - rho^alpha) < 1e-9
  const double ra = std::pow(rho, alpha);
  int lag = std::max(1, int(std::ceil(std::log(1e-9) / std::log(rho))));
  int lag_mass = 1;
  while (2.0 * std::pow(ra, lag_mass + 1) / (1.0 - ra) >= 1e-9 && lag_mass < 4096) ++lag_mass;
  m.lag = std::max(lag, lag_mass);
  return m;
}

TailProcessModel TailProcessModel::ma1(double b, double alpha) {
  if (!(alpha > 0.0)) fail(ErrorCode::InvalidArgument, "alpha must be positive");
  if (!(b > 0.0)) fail(ErrorCode::InvalidArgument, "b must be positive");
  TailProcessModel m;
  m.kind = ModelKind::Ma1;
  m.b = b;
  m.alpha = alpha;
  m.lag = 1;
  return m;
}

TailProcessModel parse_model(const std::string& text) {
  ProcessSpec p;
  {
    // the model grammar mirrors the process grammar
    std::string head = text;
    if (auto pos = text.find(':'); pos != std::string::npos) head = text.substr(0, pos);
    if (head != "iid" && head != "ar1" && head != "ma1")
      fail(ErrorCode::ParseError, "unknown model kind: " + text);
  }
  ProcessSpec spec = parse_process(text);
  spec.length = 1;  // satisfies process validation; unused here
  switch (spec.kind) {
    case ProcessKind::IidPareto: return TailProcessModel::iid(spec.alpha);
    case ProcessKind::Ar1: return TailProcessModel::ar1(spec.rho, spec.alpha);
    case ProcessKind::Ma: return TailProcessModel::ma1(spec.coeffs.at(1), spec.alpha);
  }
  fail(ErrorCode::ParseError, "unknown model kind: " + text);
}

std::string to_string(const TailProcessModel& model) {
  char buf[96];
  switch (model.kind) {
    case ModelKind::Iid: std::snprintf(buf, sizeof buf, "iid:alpha=%g", model.alpha); break;
    case ModelKind::Ar1:
      std::snprintf(buf, sizeof buf, "ar1:rho=%g,alpha=%g", model.rho, model.alpha);
      break;
    case ModelKind::Ma1:
      std::snprintf(buf, sizeof buf, "ma1:b=%g,alpha=%g", model.b, model.alpha);
      break;
  }
  return buf;
}

TailPath sample_tail_path(const TailProcessModel& model, Rng& rng) {
  PathSampler sampler(model);
  TailPath path;
  sampler.draw(rng, path);
  return path;
}

int infargmax(std::span<const double> values) {
  double mx = 0.0;
  for (double v : values) mx = std::max(mx, std::fabs(v));
  if (mx == 0.0) fail(ErrorCode::InvalidArgument, "infargmax of an all-zero path is undefined");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (std::fabs(values[i]) == mx) return int(i);
  fail(ErrorCode::InvalidArgument, "unreachable");
}

int infargmax(const TailPath& path) { return infargmax(path.span()) - path.lag; }

ThetaEstimate candidate_extremal_index(const TailProcessModel& model, std::size_t samples,
                                       std::uint64_t seed) {
  ThetaEstimate est;
  if (model.kind == ModelKind::Iid) {
    est.mc = {1.0, 0.0};
    est.analytic = 1.0;
    return est;
  }
  check_samples(samples);
  PathSampler sampler(model);
  TailPath path;
  est.mc = mc_mean(samples, seed, [&](Rng& rng) {
    sampler.draw(rng, path);
    return forward_max(path) <= 1.0 ? 1.0 : 0.0;
  });
  if (model.kind == ModelKind::Ar1) est.analytic = 1.0 - std::pow(model.rho, model.alpha);
  return est;
}

QSample sample_Q(const TailProcessModel& model, Rng& rng, std::size_t max_attempts) {
  PathSampler sampler(model);
  QSample out;
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    sampler.draw(rng, out.path);
    if (infargmax(out.path) == 0) {
      out.attempts = attempt;
      const double radius = std::fabs(out.path.at(0));
      for (double& v : out.path.values) v /= radius;
      return out;
    }
  }
  fail(ErrorCode::InsufficientSample,
       "no anchored path accepted; the model's anchor probability is pathologically small");
}

McValue cluster_index_mc(const TailProcessModel& model, const FunctionalSpec& functional,
                         std::size_t samples, std::uint64_t seed) {
  if (functional.kind == Functional::Exc) return {1.0, 0.0};
  check_samples(samples);
  if (functional.is_class_b()) {
    PathSampler sampler(model);
    TailPath path;
    return mc_mean(samples, seed, [&](Rng& rng) {
      sampler.draw(rng, path);
      const double radius = std::fabs(path.at(0));
      return class_b_k_power(functional.kind, path, 0, radius, model.alpha) -
             class_b_k_power(functional.kind, path, 1, radius, model.alpha);
    });
  }
  return anchored_mean(model, samples, seed,
                       [&](const TailPath& p) { return eval_path(functional, p); });
}

ClusterSizeDistribution cluster_size_distribution(const TailProcessModel& model,
                                                  std::size_t m_max, std::size_t samples,
                                                  std::uint64_t seed) {
  check_samples(samples);
  if (m_max < 1) fail(ErrorCode::InvalidArgument, "m_max must be >= 1");
  PathSampler sampler(model);
  TailPath path;
  std::vector<std::size_t> counts(m_max + 1, 0);
  MeanAcc m_acc, m2_acc;
  std::size_t accepted = 0;
  std::size_t chunk_index = 0;
  for (std::size_t start = 0; start < samples; start += kChunk, ++chunk_index) {
    Rng rng(derive_seed(seed, chunk_index));
    const std::size_t count = std::min(kChunk, samples - start);
    for (std::size_t i = 0; i < count; ++i) {
      sampler.draw(rng, path);
      if (backward_max(path) > 1.0) continue;
      ++accepted;
      const double m = exc_count(path);
      m_acc.add(m);
      m2_acc.add(m * m);
      const auto mi = std::size_t(m);
      if (mi >= 1 && mi <= m_max) ++counts[mi];
    }
  }
  if (accepted == 0)
    fail(ErrorCode::InsufficientSample, "no path accepted by the backward-extinction rejection");
  ClusterSizeDistribution out;
  out.accepted = accepted;
  out.attempts = samples;
  out.pi.resize(m_max);
  for (std::size_t m = 1; m <= m_max; ++m) {
    const double p = double(counts[m]) / double(accepted);
    out.pi[m - 1] = {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / double(accepted))};
  }
  out.mean_m = m_acc.done();
  out.mean_m2 = m2_acc.done();
  return out;
}

SumExceedance sum_exceedance_probabilities(const TailProcessModel& model, std::size_t samples,
                                           std::uint64_t seed) {
  check_samples(samples);
  SumExceedance out;
  PathSampler sampler(model);
  TailPath path;
  out.mc = mc_mean(samples, seed, [&](Rng& rng) {
    sampler.draw(rng, path);
    return exc_count(path);
  });
  if (model.kind == ModelKind::Iid) out.analytic = 1.0;
  if (model.kind == ModelKind::Ar1) {
    const double ra = std::pow(model.rho, model.alpha);
    out.analytic = (1.0 + ra) / (1.0 - ra);
  }
  return out;
}

McValue mean_H_of_Y(const TailProcessModel& model, const FunctionalSpec& functional,
                    std::size_t samples, std::uint64_t seed) {
  check_samples(samples);
  PathSampler sampler(model);
  TailPath path;
  return mc_mean(samples, seed, [&](Rng& rng) {
    sampler.draw(rng, path);
    return eval_path(functional, path);
  });
}

McValue limiting_variance(const TailProcessModel& model, const FunctionalSpec& functional,
                          std::size_t samples, std::uint64_t seed) {
  check_samples(samples);
  if (!functional.indicator_valued() && functional.kind != Functional::Exc)
    fail(ErrorCode::Unsupported, "limiting variance requires an indicator functional or exc");
  const std::uint64_t seed_nu = derive_seed(seed, 101);
  const std::uint64_t seed_eh = derive_seed(seed, 202);
  const std::uint64_t seed_sum = derive_seed(seed, 303);
  const SumExceedance sum_exc = sum_exceedance_probabilities(model, samples, seed_sum);
  const double sig = sum_exc.value();
  const double sig_se = sum_exc.analytic ? 0.0 : sum_exc.mc.se;

  if (functional.kind == Functional::Exc) {
    // sigma^2 = nu*(exc^2) - 2 E[exc(Y)] + Sigma, with nu*(exc) = 1
    const McValue nu2 = anchored_mean(model, samples, seed_nu,
                                      [](const TailPath& p) { return exc_count(p) * exc_count(p); });
    const McValue eh = mean_H_of_Y(model, functional, samples, seed_eh);
    const double value = nu2.value - 2.0 * eh.value + sig;
    const double se = std::sqrt(nu2.se * nu2.se + 4.0 * eh.se * eh.se + sig_se * sig_se);
    return {value, se};
  }
  const McValue nu = cluster_index_mc(model, functional, samples, seed_nu);
  const McValue eh = mean_H_of_Y(model, functional, samples, seed_eh);
  const double value = nu.value * (1.0 - 2.0 * eh.value) + nu.value * nu.value * sig;
  const double dnu = 1.0 - 2.0 * eh.value + 2.0 * nu.value * sig;
  const double se = std::sqrt(dnu * dnu * nu.se * nu.se +
                              4.0 * nu.value * nu.value * eh.se * eh.se +
                              std::pow(nu.value, 4.0) * sig_se * sig_se);
  return {value, se};
}

BlockMaximaComparison block_maxima_comparison(double theta, double sum_exceed) {
  if (!(theta > 0.0 && theta <= 1.0))
    fail(ErrorCode::InvalidArgument, "theta must lie in (0, 1]");
  if (!(sum_exceed >= 1.0))
    fail(ErrorCode::InvalidArgument, "the exceedance-probability sum is at least 1");
  BlockMaximaComparison out;
  out.sigma1_sq = -theta + theta * theta * sum_exceed;
  const double e = std::exp(-theta);
  out.sigma3_sq = e * (1.0 - e) - 2.0 * theta * e + theta * theta * sum_exceed;
  if (out.sigma1_sq > out.sigma3_sq + 1e-12)
    fail(ErrorCode::InvalidArgument,
         "threshold-based variance exceeds the block-maxima one; inputs are inconsistent");
  return out;
}

FrechetConstants frechet_indicator_constants() {
  FrechetConstants c;
  c.var_f = std::exp(-1.0) - std::exp(-2.0);
  c.c_f = 2.0 * std::exp(-1.0) - 4.0 * std::exp(-2.0);
  return c;
}

std::vector<IdentityCheck> identity_suite(const TailProcessModel& model, std::size_t samples,
                                          std::uint64_t seed) {
  check_samples(samples);
  std::vector<IdentityCheck> checks;
  auto finish = [&](std::string name, McValue lhs, McValue rhs) {
    IdentityCheck c;
    c.name = std::move(name);
    c.lhs = lhs.value;
    c.lhs_se = lhs.se;
    c.rhs = rhs.value;
    c.rhs_se = rhs.se;
    const double tol = 3.0 * std::sqrt(lhs.se * lhs.se + rhs.se * rhs.se);
    c.pass = std::fabs(c.lhs - c.rhs) <= tol;
    checks.push_back(std::move(c));
  };

  // nu*(exc) = 1
  finish("nu(exc) = 1",
         anchored_mean(model, samples, derive_seed(seed, 1),
                       [](const TailPath& p) { return exc_count(p); }),
         {1.0, 0.0});

  // nu*(exc^2) = sum_j P(|Y_j| > 1)
  {
    McValue lhs = anchored_mean(model, samples, derive_seed(seed, 2),
                                [](const TailPath& p) { return exc_count(p) * exc_count(p); });
    PathSampler sampler(model);
    TailPath path;
    McValue rhs = mc_mean(samples, derive_seed(seed, 3), [&](Rng& rng) {
      sampler.draw(rng, path);
      return exc_count(path);
    });
    finish("nu(exc^2) = sum_j P(|Y_j|>1)", lhs, rhs);
  }

  // nu*(H exc) = E[H(Y)] for two bounded functionals
  for (const char* text : {"cluster-size:m=2", "stop-loss:eta=1"}) {
    const FunctionalSpec h = parse_functional(text);
    McValue lhs = anchored_mean(model, samples, derive_seed(seed, 4 + h.cluster_size_m),
                                [&](const TailPath& p) { return eval_path(h, p) * exc_count(p); });
    McValue rhs = mean_H_of_Y(model, h, samples, derive_seed(seed, 40 + h.cluster_size_m));
    finish(std::string("nu(H exc) = E[H(Y)], H = ") + text, lhs, rhs);
  }

  // cluster-size moments against theta and the exceedance sum
  {
    const auto pi = cluster_size_distribution(model, 8, samples, derive_seed(seed, 6));
    const auto theta = candidate_extremal_index(model, samples, derive_seed(seed, 7));
    const double th = theta.mc.value;
    const double th_se = theta.mc.se;
    finish("sum m pi(m) = 1/theta", pi.mean_m, {1.0 / th, th_se / (th * th)});

    const auto sum_exc = sum_exceedance_probabilities(model, samples, derive_seed(seed, 8));
    const double sg = sum_exc.mc.value;
    const double sg_se = sum_exc.mc.se;
    const double rhs = sg / th;
    const double rhs_se =
        std::sqrt((sg_se / th) * (sg_se / th) + (sg * th_se / (th * th)) * (sg * th_se / (th * th)));
    finish("sum m^2 pi(m) = Sigma/theta", pi.mean_m2, {rhs, rhs_se});
  }
  return checks;
}

ClusterOracleReport oracle_report(const TailProcessModel& model,
                                  std::span<const FunctionalSpec> functionals, std::size_t m_max,
                                  std::size_t samples, std::uint64_t seed) {
  check_samples(samples);
  ClusterOracleReport report;
  report.model = model;
  report.samples = samples;
  report.seed = seed;
  report.theta = candidate_extremal_index(model, samples, derive_seed(seed, 1));
  report.sum_exceed = sum_exceedance_probabilities(model, samples, derive_seed(seed, 2));
  report.pi = cluster_size_distribution(model, m_max, samples, derive_seed(seed, 3));
  std::uint64_t row_index = 0;
  for (const auto& f : functionals) {
    OracleFunctionalRow row;
    row.functional = f;
    row.nu_star = cluster_index_mc(model, f, samples, derive_seed(seed, 100 + row_index));
    row.nu_analytic = f.kind == Functional::Exc;
    if (f.kind == Functional::Exc || f.indicator_valued())
      row.sigma2 = limiting_variance(model, f, samples, derive_seed(seed, 200 + row_index));
    report.rows.push_back(row);
    ++row_index;
  }
  report.identities = identity_suite(model, samples, derive_seed(seed, 4));
  return report;
}

std::string to_json(const ClusterOracleReport& report) {
  namespace jf = jsonfmt;
  std::string out = "{\n";
  out += "  \"model\": " + jf::str(to_string(report.model)) + ",\n";
  out += "  \"samples\": " + jf::num(report.samples) + ",\n";
  out += "  \"seed\": " + std::to_string(report.seed) + ",\n";
  out += "  \"theta\": {\"mc\": " + jf::num(report.theta.mc.value) +
         ", \"mc_se\": " + jf::num(report.theta.mc.se) + ", \"analytic\": " +
         (report.theta.analytic ? jf::num(*report.theta.analytic) : "null") + "},\n";
  out += "  \"sum_exceedance\": {\"mc\": " + jf::num(report.sum_exceed.mc.value) +
         ", \"mc_se\": " + jf::num(report.sum_exceed.mc.se) + ", \"analytic\": " +
         (report.sum_exceed.analytic ? jf::num(*report.sum_exceed.analytic) : "null") + "},\n";
  out += "  \"cluster_size\": {\"attempts\": " + jf::num(report.pi.attempts) +
         ", \"accepted\": " + jf::num(report.pi.accepted) + ",\n    \"pi\": [";
  for (std::size_t m = 1; m <= report.pi.pi.size(); ++m) {
    if (m > 1) out += ", ";
    out += "{\"m\": " + std::to_string(m) + ", \"value\": " + jf::num(report.pi.pi[m - 1].value) +
           ", \"se\": " + jf::num(report.pi.pi[m - 1].se) + "}";
  }
  out += "],\n";
  out += "    \"mean_m\": {\"value\": " + jf::num(report.pi.mean_m.value) +
         ", \"se\": " + jf::num(report.pi.mean_m.se) + "},\n";
  out += "    \"mean_m2\": {\"value\": " + jf::num(report.pi.mean_m2.value) +
         ", \"se\": " + jf::num(report.pi.mean_m2.se) + "}},\n";
  out += "  \"functionals\": [\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    out += "    {\"functional\": " + jf::str(to_string(r.functional)) +
           ", \"nu_star\": " + jf::num(r.nu_star.value) +
           ", \"nu_star_se\": " + jf::num(r.nu_star.se) +
           ", \"nu_analytic\": " + (r.nu_analytic ? "true" : "false") +
           ", \"sigma2\": " + jf::num(r.sigma2.value) +
           ", \"sigma2_se\": " + jf::num(r.sigma2.se) + "}";
    out += i + 1 < report.rows.size() ? ",\n" : "\n";
  }
  out += "  ],\n";
  out += "  \"identities\": [\n";
  for (std::size_t i = 0; i < report.identities.size(); ++i) {
    const auto& c = report.identities[i];
    out += "    {\"name\": " + jf::str(c.name) + ", \"lhs\": " + jf::num(c.lhs) +
           ", \"lhs_se\": " + jf::num(c.lhs_se) + ", \"rhs\": " + jf::num(c.rhs) +
           ", \"rhs_se\": " + jf::num(c.rhs_se) +
           ", \"pass\": " + (c.pass ? "true" : "false") + "}";
    out += i + 1 < report.identities.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

EmpiricalTailLaw conditional_simulation_oracle(const ProcessSpec& process, double x_threshold,
                                               int lag) {
  if (!(x_threshold > 0.0)) fail(ErrorCode::InvalidArgument, "threshold must be positive");
  if (lag < 1) fail(ErrorCode::InvalidArgument, "lag must be >= 1");
  const Series series = generate(process);
  if (series.dim() != 1)
    fail(ErrorCode::DimensionMismatch, "conditional simulation oracle expects univariate data");
  const std::size_t n = series.size();
  EmpiricalTailLaw law;
  law.lag = lag;
  law.scanned = n;
  const auto l = std::size_t(lag);
  if (n < 2 * l + 1) fail(ErrorCode::InsufficientSample, "series shorter than the window");
  for (std::size_t t = l; t + l < n; ++t) {
    if (series.norm(t) > x_threshold) {
      std::vector<double> path(2 * l + 1);
      for (std::size_t j = 0; j < path.size(); ++j)
        path[j] = series.value(t - l + j) / x_threshold;
      law.paths.push_back(std::move(path));
    }
  }
  if (law.paths.size() < 200)
    fail(ErrorCode::InsufficientSample,
         "only " + std::to_string(law.paths.size()) +
             " exceedances of the conditioning threshold; need at least 200");
  return law;
}

}  // namespace tailblocks
