#pragma once

#include <span>

#include <Eigen/Core>

#include "fpaft/dataset.hpp"
#include "fpaft/models.hpp"

namespace fpaft {

/// The accelerated time scale of an FPAFT model at t for covariates x:
///   log_phi = -x'beta - sum_p x_p s_p(log t)
///   bracket = 1 - sum_p x_p s_p'(log t)  (= d log(t phi) / d log t)
struct TimeTransform {
  double log_phi = 0.0;
  double bracket = 1.0;
};

TimeTransform time_transform(const FpaftModel& model, double t, std::span<const double> x,
                             const Eigen::VectorXd& theta);

/// phi(x, t) = exp(log_phi).
double phi_t(const FpaftModel& model, std::span<const double> x, double t,
             const Eigen::VectorXd& theta);

/// d phi / dt = (phi / t) * (-sum_p x_p s_p'(log t)).
double dphi_dt(const FpaftModel& model, std::span<const double> x, double t,
               const Eigen::VectorXd& theta);

/// Instantaneous acceleration factor eta(x, t) = phi + t dphi/dt = d(t phi)/dt.
/// Not constrained to be positive.
double eta(const FpaftModel& model, std::span<const double> x, double t,
           const Eigen::VectorXd& theta);

/// h(t|x) = exp(s(u)) s'(u) (1/t) bracket with u = log(t phi(x, t)).
double tde_hazard(const FpaftModel& model, double t, std::span<const double> x,
                  const Eigen::VectorXd& theta);

/// S(t|x) = exp(-exp(s(log(t phi(x, t))))).
double tde_survival(const FpaftModel& model, double t, std::span<const double> x,
                    const Eigen::VectorXd& theta);

/// Delayed-entry log-likelihood with time-dependent acceleration factors; -inf when
/// s' or the bracket is non-positive at an event time.
double tde_loglik(const FpaftModel& model, const SurvivalDataset& data,
                  const Eigen::VectorXd& theta);

/// log eta(e_k, t): the log instantaneous acceleration factor for a unit of covariate k
/// against the reference x = 0 (where eta = 1). NaN where eta <= 0.
double log_instantaneous_af(const FpaftModel& model, std::size_t covariate, double t,
                            const Eigen::VectorXd& theta);

}  // namespace fpaft
