#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fpaft/dataset.hpp"
#include "fpaft/kernels.hpp"
#include "fpaft/spline.hpp"

namespace fpaft {

enum class Family { fpaft, weibull, gengamma, exponential_ph };

std::string to_string(Family family);
Family parse_family(std::string_view name);

/// A covariate whose acceleration factor varies with log time through its own spline.
struct TimeDependentTerm {
  std::string covariate;
  int df = 2;
};

/// What to fit: the family, its flexibility and which covariates enter.
struct ModelSpec {
  Family family = Family::fpaft;
  int df = 3;  ///< baseline spline df; FPAFT only
  std::vector<std::string> covariates;
  std::vector<TimeDependentTerm> tde;  ///< FPAFT only

  /// Throws DataError on df < 1, tde on a non-FPAFT family or a tde covariate not in `covariates`.
  void validate() const;

  /// Number of free parameters implied by the ModelSpec.
  std::size_t n_params() const;

  /// Short display name: "Weibull", "Gamma", "ExpPH", "FPAFT-df=3".
  std::string label() const;

  /// Parses "weibull", "gengamma", "expph", "fpaft" or "fpaft:<df>".
  static ModelSpec parse(std::string_view text, std::vector<std::string> covariates = {});
};

/// phi(x; beta) = exp(-x'beta). Positive beta stretches time, i.e. prolongs survival.
double acceleration_factor(std::span<const double> x, std::span<const double> beta);

/// Log-likelihood and cumulative-hazard contract shared by all families.
///
/// The parameter vector always starts with one coefficient per covariate, in the order
/// of `spec().covariates`; the family-specific block follows. Data passed to the
/// likelihood must carry exactly those covariates (see SurvivalDataset::select).
/// Per-row contributions use the delayed-entry form
///   l_i = d_i log h(y_i) + log S(y_i) - log S(t0_i).
class SurvivalModel {
 public:
  explicit SurvivalModel(ModelSpec spec);
  virtual ~SurvivalModel() = default;

  const ModelSpec& spec() const { return spec_; }
  std::size_t n_covariates() const { return spec_.covariates.size(); }
  virtual std::size_t n_params() const = 0;
  virtual std::vector<std::string> parameter_names() const = 0;

  virtual double log_cum_hazard(double t, std::span<const double> x,
                                const Eigen::VectorXd& theta) const = 0;
  virtual double hazard(double t, std::span<const double> x, const Eigen::VectorXd& theta) const = 0;
  double cum_hazard(double t, std::span<const double> x, const Eigen::VectorXd& theta) const;
  double survival(double t, std::span<const double> x, const Eigen::VectorXd& theta) const;

  /// Row contribution; -inf when the hazard is non-positive at an event time.
  virtual double row_loglik(const SurvivalDataset& data, std::size_t i,
                            const Eigen::VectorXd& theta) const = 0;
  /// Writes the row's gradient into `out` (zeroed by the caller). Returns false where the
  /// row log-likelihood is not finite.
  virtual bool row_score(const SurvivalDataset& data, std::size_t i, const Eigen::VectorXd& theta,
                         std::span<double> out) const = 0;

  /// Starting values for the optimiser.
  virtual Eigen::VectorXd initial_values(const SurvivalDataset& data) const = 0;

  double loglik(const SurvivalDataset& data, const Eigen::VectorXd& theta,
                Execution exec = Execution::parallel) const;
  /// Throws NumericalError where the log-likelihood is -inf.
  Eigen::VectorXd score(const SurvivalDataset& data, const Eigen::VectorXd& theta,
                        Execution exec = Execution::parallel) const;

  /// Throws DataError unless `data` carries exactly the ModelSpec's covariates.
  void check_data(const SurvivalDataset& data) const;

  std::span<const double> beta(const Eigen::VectorXd& theta) const {
    return {theta.data(), n_covariates()};
  }

 protected:
  void check_theta(const Eigen::VectorXd& theta) const;

 private:
  ModelSpec spec_;
};

/// Flexible parametric AFT: log H(t|x) = s(log(t phi(x,t)) | gamma, k0), where
///   log phi(x,t) = -x'beta - sum_p x_p s_p(log t | gamma_p, k_p)
/// and the time-dependent splines s_p carry no intercept.
///
/// Parameter layout: [beta (p) | gamma_0..gamma_df | gamma_p for each tde term (df_p)].
class FpaftModel final : public SurvivalModel {
 public:
  struct TimeDependentEffect {
    std::size_t covariate;  ///< index into spec().covariates
    KnotVector knots;
  };

  FpaftModel(ModelSpec spec, KnotVector baseline, std::vector<TimeDependentEffect> tde);

  /// Baseline and tde knots at quantiles of log event times (phi taken as 1).
  static FpaftModel from_data(const ModelSpec& spec, const SurvivalDataset& data);

  const KnotVector& baseline_knots() const { return baseline_; }
  const std::vector<TimeDependentEffect>& tde() const { return tde_; }
  std::size_t gamma_offset() const { return n_covariates(); }
  std::size_t n_gamma() const { return baseline_.df() + 1; }
  std::size_t tde_offset(std::size_t term) const { return tde_offsets_[term]; }

  std::size_t n_params() const override { return n_params_; }
  std::vector<std::string> parameter_names() const override;

  double log_cum_hazard(double t, std::span<const double> x,
                        const Eigen::VectorXd& theta) const override;
  double hazard(double t, std::span<const double> x, const Eigen::VectorXd& theta) const override;
  double row_loglik(const SurvivalDataset& data, std::size_t i,
                    const Eigen::VectorXd& theta) const override;
  bool row_score(const SurvivalDataset& data, std::size_t i, const Eigen::VectorXd& theta,
                 std::span<double> out) const override;
  Eigen::VectorXd initial_values(const SurvivalDataset& data) const override;

  /// Same model with baseline knots moved to quantiles of log(y phi(x)) over event rows at
  /// `theta`. `theta` is mapped onto the new basis by least squares on those points.
  std::pair<FpaftModel, Eigen::VectorXd> reknotted(const SurvivalDataset& data,
                                                   const Eigen::VectorXd& theta) const;

 private:
  KnotVector baseline_;
  std::vector<TimeDependentEffect> tde_;
  std::vector<std::size_t> tde_offsets_;
  std::size_t n_params_ = 0;
};

/// Weibull AFT: log H(t|x) = log(lambda) + gamma (log t - x'beta).
/// Parameter layout: [beta (p) | log lambda | log gamma].
class WeibullModel final : public SurvivalModel {
 public:
  explicit WeibullModel(ModelSpec spec);

  std::size_t n_params() const override { return n_covariates() + 2; }
  std::vector<std::string> parameter_names() const override;
  double log_cum_hazard(double t, std::span<const double> x,
                        const Eigen::VectorXd& theta) const override;
  double hazard(double t, std::span<const double> x, const Eigen::VectorXd& theta) const override;
  double row_loglik(const SurvivalDataset& data, std::size_t i,
                    const Eigen::VectorXd& theta) const override;
  bool row_score(const SurvivalDataset& data, std::size_t i, const Eigen::VectorXd& theta,
                 std::span<double> out) const override;
  Eigen::VectorXd initial_values(const SurvivalDataset& data) const override;
};

/// Generalized gamma AFT in the (mu, sigma, kappa) form
///   log T = mu + x'beta + sigma W,
/// where W has the log-generalized-gamma density with shape kappa. kappa = 1 is the
/// Weibull (gamma = 1/sigma, log lambda = -mu/sigma) and kappa -> 0 the lognormal.
/// Parameter layout: [beta (p) | mu | log sigma | kappa].
class GenGammaModel final : public SurvivalModel {
 public:
  explicit GenGammaModel(ModelSpec spec);

  std::size_t n_params() const override { return n_covariates() + 3; }
  std::vector<std::string> parameter_names() const override;
  double log_cum_hazard(double t, std::span<const double> x,
                        const Eigen::VectorXd& theta) const override;
  double hazard(double t, std::span<const double> x, const Eigen::VectorXd& theta) const override;
  double row_loglik(const SurvivalDataset& data, std::size_t i,
                    const Eigen::VectorXd& theta) const override;
  bool row_score(const SurvivalDataset& data, std::size_t i, const Eigen::VectorXd& theta,
                 std::span<double> out) const override;
  Eigen::VectorXd initial_values(const SurvivalDataset& data) const override;

  /// log S and log density of the standardised error W at w.
  static double log_survival_std(double w, double kappa);
  static double log_density_std(double w, double kappa);
};

/// Exponential proportional hazards: h(t|x) = exp(theta0 + x'beta). Here beta is a
/// log hazard ratio, so its sign is opposite to the AFT families.
/// Parameter layout: [beta (p) | theta0].
class ExponentialPhModel final : public SurvivalModel {
 public:
  explicit ExponentialPhModel(ModelSpec spec);

  std::size_t n_params() const override { return n_covariates() + 1; }
  std::vector<std::string> parameter_names() const override;
  double log_cum_hazard(double t, std::span<const double> x,
                        const Eigen::VectorXd& theta) const override;
  double hazard(double t, std::span<const double> x, const Eigen::VectorXd& theta) const override;
  double row_loglik(const SurvivalDataset& data, std::size_t i,
                    const Eigen::VectorXd& theta) const override;
  bool row_score(const SurvivalDataset& data, std::size_t i, const Eigen::VectorXd& theta,
                 std::span<double> out) const override;
  Eigen::VectorXd initial_values(const SurvivalDataset& data) const override;
};

/// Builds the model for `spec` against `data` (the data's covariates must match the ModelSpec).
/// Throws IdentifiabilityError when the data has fewer events than parameters.
std::shared_ptr<const SurvivalModel> make_model(const ModelSpec& spec, const SurvivalDataset& data);

/// Least-squares fit of log Nelson-Aalen against log time over event times:
/// returns (intercept, slope). Used as the Weibull-type starting point.
std::pair<double, double> weibull_start(const SurvivalDataset& data);

}  // namespace fpaft
