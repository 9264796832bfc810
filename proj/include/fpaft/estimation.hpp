#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fpaft/dataset.hpp"
#include "fpaft/kernels.hpp"
#include "fpaft/models.hpp"

namespace fpaft {

struct FitOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-6;  ///< on max |score|
  double step_tolerance = 1e-8;      ///< relative parameter change
  int max_step_halvings = 30;
  /// Start here instead of the family's own initial values.
  std::optional<Eigen::VectorXd> start;
  /// FPAFT: after convergence, move the baseline knots to quantiles of log(y phi) and refit.
  bool reknot = false;
  /// BIC penalty log(n_events) when true, log(n_rows) otherwise.
  bool bic_uses_events = true;
  Execution exec = Execution::parallel;
};

struct IterationRecord {
  int iteration = 0;
  double loglik = 0.0;
  double max_abs_score = 0.0;
  int halvings = 0;
};

struct FittedModel {
  ModelSpec spec;  ///< as fitted (df may be lower than requested after knot collapse)
  std::shared_ptr<const SurvivalModel> model;
  Eigen::VectorXd theta;
  std::optional<Eigen::MatrixXd> covariance;  ///< absent if not converged or singular
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  std::size_t n_obs = 0;
  std::size_t n_events = 0;
  bool converged = false;
  int iterations = 0;
  double max_abs_score = 0.0;
  std::vector<IterationRecord> trace;
  std::uint64_t data_checksum = 0;
  std::string message;  ///< why the fit stopped, if not converged

  std::size_t n_params() const { return static_cast<std::size_t>(theta.size()); }
  std::vector<std::string> parameter_names() const { return model->parameter_names(); }
  /// sqrt(diag(covariance)); NaN when the covariance is absent.
  Eigen::VectorXd standard_errors() const;
};

/// The family's starting values for `spec` on `data`. Throws IdentifiabilityError when
/// there are fewer events than parameters.
Eigen::VectorXd initialize(const ModelSpec& spec, const SurvivalDataset& data);

/// Maximum likelihood by Newton-Raphson with step halving. `data` may carry extra
/// covariates; those named in the ModelSpec are selected. Non-convergence is reported through
/// `converged` and `message`, never thrown.
FittedModel fit(const ModelSpec& spec, const SurvivalDataset& data, const FitOptions& options = {});

/// Same, for an already constructed model (e.g. fixed knots). `data` must match it.
FittedModel fit(std::shared_ptr<const SurvivalModel> model, const SurvivalDataset& data,
                const FitOptions& options = {});

/// Negative Hessian of the log-likelihood from central differences of the analytic
/// score, step 1e-5 (1 + |theta_j|), symmetrised. Throws NumericalError where the
/// score is undefined on both sides.
Eigen::MatrixXd observed_information(const SurvivalModel& model, const SurvivalDataset& data,
                                     const Eigen::VectorXd& theta,
                                     Execution exec = Execution::parallel);

/// Inverse of a positive definite information matrix, or nullopt.
std::optional<Eigen::MatrixXd> covariance_from_information(const Eigen::MatrixXd& info);

/// The fitted covariance; throws NumericalError when it is absent.
Eigen::MatrixXd covariance(const FittedModel& fitted);

struct SurvivalPrediction {
  std::vector<double> times;
  std::vector<double> survival;
  std::vector<double> se_log_log;  ///< SE of log(-log S)
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> defined;  ///< false where S is numerically 0 or 1
};

/// Survival at `times` for covariates `x` with delta-method CIs on the log(-log S) scale
/// back-transformed as S^exp(+-1.96 SE). Throws DataError on non-positive times.
SurvivalPrediction predict_survival(const FittedModel& fitted, std::span<const double> x,
                                    std::span<const double> times);

/// Ranks with ties sharing the average rank (1 = smallest).
std::vector<double> average_ranks(std::span<const double> values);

struct ComparisonRow {
  std::string label;
  std::size_t n_params = 0;
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double aic_rank = 0.0;
  double bic_rank = 0.0;
  bool converged = false;
};

/// AIC and BIC ranks across fits of the same data. Throws DataError if the fits were
/// made on different data.
std::vector<ComparisonRow> compare(std::span<const FittedModel> fits);

}  // namespace fpaft
