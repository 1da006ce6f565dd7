#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailblocks/functionals.hpp"
#include "tailblocks/rng.hpp"
#include "tailblocks/simulate.hpp"

namespace tailblocks {

// Tail-process models for which cluster indices, the candidate extremal
// index, the cluster-size law and the limiting variances can be computed by
// Monte Carlo on sampled paths (plus closed forms where available).
enum class ModelKind { Iid, Ar1, Ma1 };

struct TailProcessModel {
  ModelKind kind = ModelKind::Iid;
  double alpha = 1.0;
  double rho = 0.5;  // Ar1
  double b = 1.0;    // Ma1
  int lag = 1;       // paths live on [-lag, lag]

  static TailProcessModel iid(double alpha);
  static TailProcessModel ar1(double rho, double alpha);
  static TailProcessModel ma1(double b, double alpha);
};

// grammar: iid:alpha=1 | ar1:rho=0.5,alpha=1 | ma1:b=0.7,alpha=1.5
TailProcessModel parse_model(const std::string& text);
std::string to_string(const TailProcessModel& model);

// path of the (truncated) tail process, indices -lag..lag
struct TailPath {
  std::vector<double> values;
  int lag = 0;

  double at(int j) const {
    return (j < -lag || j > lag) ? 0.0 : values[std::size_t(j + lag)];
  }
  double& slot(int j) { return values[std::size_t(j + lag)]; }
  std::span<const double> span() const { return values; }
};

struct McValue {
  double value = 0.0;
  double se = 0.0;  // Monte Carlo standard error (0 for analytic values)
};

// one draw of the tail process: Pareto(alpha) radius at 0 times the spectral path
TailPath sample_tail_path(const TailProcessModel& model, Rng& rng);

// first index attaining the running-maximum == global-maximum condition
int infargmax(std::span<const double> values);
int infargmax(const TailPath& path);

struct ThetaEstimate {
  McValue mc;
  std::optional<double> analytic;
  double value() const { return analytic ? *analytic : mc.value; }
};

// theta = P(sup_{j>=1} |Y_j| <= 1); closed form for iid (1) and ar1 (1 - rho^alpha)
ThetaEstimate candidate_extremal_index(const TailProcessModel& model, std::size_t samples,
                                       std::uint64_t seed);

// rejection draw of the cluster profile Q = Y / Y* given infargmax(Y) = 0
struct QSample {
  TailPath path;
  std::size_t attempts = 0;
};
QSample sample_Q(const TailProcessModel& model, Rng& rng, std::size_t max_attempts = 1000000);

// cluster index nu*(H). Indicator functionals with support in {x* > 1} use the
// anchored representation E[H(Y) 1{infargmax(Y)=0}]; large-dev and ruin use the
// 1-homogeneous spectral formula E[K_+^alpha(Theta_{0..}) - K_+^alpha(Theta_{1..})];
// exc is the constant 1
McValue cluster_index_mc(const TailProcessModel& model, const FunctionalSpec& functional,
                         std::size_t samples, std::uint64_t seed);

struct ClusterSizeDistribution {
  std::vector<McValue> pi;  // pi[m-1], m = 1..m_max
  McValue mean_m;           // E[m]  under the conditional law
  McValue mean_m2;          // E[m^2]
  std::size_t accepted = 0;
  std::size_t attempts = 0;
};

// law of the exceedance count given no backward exceedance
ClusterSizeDistribution cluster_size_distribution(const TailProcessModel& model,
                                                  std::size_t m_max, std::size_t samples,
                                                  std::uint64_t seed);

struct SumExceedance {
  McValue mc;
  std::optional<double> analytic;  // iid: 1, ar1: (1+rho^a)/(1-rho^a)
  double value() const { return analytic ? *analytic : mc.value; }
};
SumExceedance sum_exceedance_probabilities(const TailProcessModel& model, std::size_t samples,
                                           std::uint64_t seed);

// P(H(Y) ...) building block: plain mean of H over unconditioned tail paths
McValue mean_H_of_Y(const TailProcessModel& model, const FunctionalSpec& functional,
                    std::size_t samples, std::uint64_t seed);

// limiting variance of the normalized blocks estimators:
//   nu*(H^2) - 2 nu*(H) E[H(Y)] + nu*(H)^2 sum_j P(|Y_j| > 1)
McValue limiting_variance(const TailProcessModel& model, const FunctionalSpec& functional,
                          std::size_t samples, std::uint64_t seed);

struct BlockMaximaComparison {
  double sigma1_sq = 0.0;  // -theta + theta^2 * Sigma
  double sigma3_sq = 0.0;  // e^-t (1 - e^-t) - 2 t e^-t + t^2 * Sigma
};
BlockMaximaComparison block_maxima_comparison(double theta, double sum_exceed);

struct FrechetConstants {
  double var_f = 0.0;  // exp(-1) - exp(-2)
  double c_f = 0.0;    // 2 exp(-1) - 4 exp(-2)
};
FrechetConstants frechet_indicator_constants();

struct IdentityCheck {
  std::string name;
  double lhs = 0.0, lhs_se = 0.0;
  double rhs = 0.0, rhs_se = 0.0;
  bool pass = false;
};

// evaluates both sides of the cluster-measure identities by independent Monte
// Carlo streams; pass = within 3 combined standard errors
std::vector<IdentityCheck> identity_suite(const TailProcessModel& model, std::size_t samples,
                                          std::uint64_t seed);

// empirical conditional path law of a simulated process above a high
// threshold; validation oracle for sample_tail_path
struct EmpiricalTailLaw {
  std::vector<std::vector<double>> paths;  // each of length 2*lag+1, scaled by the threshold
  int lag = 0;
  std::size_t scanned = 0;
};
EmpiricalTailLaw conditional_simulation_oracle(const ProcessSpec& process, double x_threshold,
                                               int lag);

struct OracleFunctionalRow {
  FunctionalSpec functional;
  McValue nu_star;
  bool nu_analytic = false;
  McValue sigma2;
};

struct ClusterOracleReport {
  TailProcessModel model;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  ThetaEstimate theta;
  SumExceedance sum_exceed;
  ClusterSizeDistribution pi;
  std::vector<OracleFunctionalRow> rows;
  std::vector<IdentityCheck> identities;
};

ClusterOracleReport oracle_report(const TailProcessModel& model,
                                  std::span<const FunctionalSpec> functionals, std::size_t m_max,
                                  std::size_t samples, std::uint64_t seed);
std::string to_json(const ClusterOracleReport& report);

}  // namespace tailblocks
