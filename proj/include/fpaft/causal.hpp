#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fpaft/estimation.hpp"
#include "fpaft/simulation.hpp"

namespace fpaft {

/// Gauss-Hermite rule for the weight exp(-x^2): sum_i w_i f(x_i) ~ int f(x) exp(-x^2) dx.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes from the eigenvalues of the Jacobi matrix; weights by the Christoffel formula
/// over orthonormal Hermite polynomials.
QuadratureRule gauss_hermite(int n);

/// Distribution of the confounder Z used in the marginal expectations.
class ZDistribution {
 public:
  /// Z ~ N(mean, sd^2), integrated by Gauss-Hermite with `nodes` points.
  static ZDistribution normal(double mean, double sd, int nodes = 64);
  /// Z | X = x for the threshold construction X = 1{W > 0}, (W, Z/sd) standard bivariate
  /// normal with correlation rho: density 2 phi_sd(z) Phi(+-rho z / (sd sqrt(1 - rho^2))).
  static ZDistribution normal_given_threshold(double sd, double rho, bool upper, int nodes = 64);
  /// Observed sample: plain averages, with Monte Carlo standard errors.
  static ZDistribution empirical(std::vector<double> sample);

  bool is_sample() const { return sample_; }
  /// Evaluation points and weights summing to 1.
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

  double mean() const;

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
  bool sample_ = false;
};

/// Proportional hazards model h(t|x,z) = h0(t) exp(beta_x x + beta_z z).
struct PhEffects {
  double beta_x = 0.0;
  double beta_z = 0.0;
  std::function<double(double)> baseline_cum_hazard;  ///< H0(t)

  double survival(double t, double x, double z) const;

  /// Exponential baseline H0(t) = exp(log_rate) t.
  static PhEffects exponential(double log_rate, double beta_x, double beta_z);
  /// From a fitted ExpPH model with covariates (x, z) in that order.
  static PhEffects from_fit(const FittedModel& fitted);
};

struct MarginalEffect {
  std::vector<double> times;
  std::vector<double> values;  ///< log hazard ratio contrast; NaN where undefined
  std::vector<double> mc_se;   ///< Monte Carlo SE; 0 for quadrature
};

/// T(t) = beta_x + log[E(e^{beta_z Z} S(t|1,Z)) / E(S(t|1,Z))]
///             - log[E(e^{beta_z Z} S(t|0,Z)) / E(S(t|0,Z))]
/// with the same Z distribution for both arms.
MarginalEffect marginal_causal_loghr(const PhEffects& model, const ZDistribution& z,
                                     std::span<const double> times);

/// The same contrast with Z | X = 1 in the first term and Z | X = 0 in the second.
MarginalEffect marginal_unadjusted_loghr(const PhEffects& model, const ZDistribution& z_given_x1,
                                         const ZDistribution& z_given_x0,
                                         std::span<const double> times);

/// marginal_causal_loghr - marginal_unadjusted_loghr, pointwise.
MarginalEffect confounding_bias(const PhEffects& model, const ZDistribution& z,
                                const ZDistribution& z_given_x1, const ZDistribution& z_given_x0,
                                std::span<const double> times);

/// Marginal mean log-time contrast of an AFT with rate-scale coefficients:
///   -beta_x - beta_z (E(Z|X=1) - E(Z|X=0)).
double aft_marginal_contrast(double beta_x, double beta_z, double mean_gap);

/// The same contrast from fitted AFT coefficients (log T = mu + x'beta convention), where
/// it reads beta_x + beta_z * mean_gap.
double aft_marginal_contrast(const FittedModel& fitted, const std::string& x_name,
                             const std::string& z_name, double mean_gap);

/// Time-varying log acceleration factor of covariate `name` in a fitted FPAFT model: log eta(e_k, t).
/// For time-fixed effects this is -beta_k at every t.
std::vector<double> aft_time_dependent_log_af(const FittedModel& fitted, const std::string& name,
                                              std::span<const double> times);

/// E(Z | X = 1) - E(Z | X = 0) for the threshold construction: 2 z_sd Corr(X, Z).
double threshold_mean_gap(const CausalScenarioParams& params);

struct Table1Config {
  CausalScenarioParams scenario;
  std::vector<double> correlations{0.0, 0.1, -0.1};
  std::size_t replicates = 50;
  std::uint64_t seed = 0;
  int fpaft_df = 3;
};

struct Table1Cell {
  double corr = 0.0;
  std::string model;       ///< "ExpPH" or "FPAFT-df=3"
  std::string covariates;  ///< "x+z" or "x"
  double mean_beta = 0.0;  ///< mean estimate of the x coefficient over converged fits
  double mean_se = 0.0;
  double sd_beta = 0.0;
  std::size_t converged = 0;
  std::size_t replicates = 0;
};

/// Simulates each correlation setting `replicates` times and fits ExpPH and FPAFT with
/// covariates x+z and x only. Replicate r of setting c uses substream c * replicates + r.
std::vector<Table1Cell> run_table1(const Table1Config& config);

}  // namespace fpaft
