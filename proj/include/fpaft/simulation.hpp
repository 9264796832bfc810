#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "fpaft/dataset.hpp"

namespace fpaft {

class Config;

/// Two-component mixture Weibull baseline with a binary treatment acting on the AFT scale:
///   S(t|x) = p exp(-l1 (t e^{-x beta})^g1) + (1 - p) exp(-l2 (t e^{-x beta})^g2).
struct MixtureWeibullParams {
  double p = 1.0;
  double lambda1 = 1.0;
  double gamma1 = 1.0;
  double lambda2 = 1.0;
  double gamma2 = 1.0;
  double beta = 0.0;

  /// Throws DataError unless p in [0, 1] and all rates and shapes are positive.
  void validate() const;
  /// Reads p, lambda1, gamma1, lambda2, gamma2, beta (lambda2/gamma2 optional when p = 1).
  static MixtureWeibullParams from_config(const Config& cfg);
};

double mixture_survival(double t, double x, const MixtureWeibullParams& params);
double mixture_cum_hazard(double t, double x, const MixtureWeibullParams& params);

/// Population survival with x ~ Bernoulli(0.5): (S(t|0) + S(t|1)) / 2.
double mixture_mean_survival(double t, const MixtureWeibullParams& params);

struct SimulatedData {
  SurvivalDataset data;  ///< covariate "x"
  /// |S(T|x) - U| for each subject whose event time was solved; NaN for subjects whose
  /// draw lies beyond the censoring time (T is never needed there).
  std::vector<double> inversion_residuals;
};

/// n subjects with x ~ Bernoulli(0.5) and T from S(T|x) = U by bracketed root finding on
/// log T, administratively censored at `admin_censor_at` (may be +inf).
SimulatedData sample_mixture_aft(const MixtureWeibullParams& params, std::size_t n,
                                 std::uint64_t seed,
                                 double admin_censor_at = std::numeric_limits<double>::infinity());

/// What a correlation target refers to: Corr(X, Z) itself, or the correlation of the
/// latent normal W that is thresholded to give X.
enum class CorrelationScale { point_biserial, latent };

/// The two-covariate exponential confounding setup: Z ~ N(0, z_sd^2),
/// X = 1{W > 0} with (W, Z / z_sd) standard bivariate normal, T exponential with rate
/// exp(beta0 + beta_x X + beta_z Z), C ~ U(0, censor_upper).
struct CausalScenarioParams {
  double beta0 = -5.0;
  double beta_x = 1.0;
  double beta_z = 1.0;
  double z_sd = 2.0;
  double censor_upper = 10.0;
  double corr = 0.0;  ///< target Corr(X, Z), or Corr(W, Z) on the latent scale
  CorrelationScale corr_scale = CorrelationScale::point_biserial;
  std::size_t n = 10000;

  /// Throws DataError when invalid or the correlation target is unreachable.
  void validate() const;
  /// Correlation rho of (W, Z); Corr(X, Z) = 2 phi(0) rho.
  double latent_correlation() const;
  /// The implied Corr(X, Z).
  double point_biserial_correlation() const;
};

/// Largest |Corr(X, Z)| the threshold construction can reach: 2 phi(0) = sqrt(2 / pi).
double max_point_biserial_correlation();

/// Dataset with covariates "x" and "z".
SurvivalDataset sample_causal(const CausalScenarioParams& params, std::uint64_t seed);

}  // namespace fpaft
