#include "fpaft/tde.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace fpaft {

TimeTransform time_transform(const FpaftModel& model, double t, std::span<const double> x,
                             const Eigen::VectorXd& theta) {
  TimeTransform tt;
  const auto beta = model.beta(theta);
  for (std::size_t k = 0; k < beta.size(); ++k) tt.log_phi -= x[k] * beta[k];
  if (model.tde().empty()) return tt;
  const double log_t = std::log(t);
  for (std::size_t q = 0; q < model.tde().size(); ++q) {
    const auto& term = model.tde()[q];
    const double xp = x[term.covariate];
    if (xp == 0.0) continue;
    const auto coeffs = std::span<const double>(theta.data() + model.tde_offset(q), term.knots.df());
    const auto s = term.knots.evaluate_no_intercept(log_t, coeffs);
    tt.log_phi -= xp * s.value;
    tt.bracket -= xp * s.d1;
  }
  return tt;
}

double phi_t(const FpaftModel& model, std::span<const double> x, double t,
             const Eigen::VectorXd& theta) {
  return std::exp(time_transform(model, t, x, theta).log_phi);
}

double dphi_dt(const FpaftModel& model, std::span<const double> x, double t,
               const Eigen::VectorXd& theta) {
  const auto tt = time_transform(model, t, x, theta);
  return std::exp(tt.log_phi) / t * (tt.bracket - 1.0);
}

double eta(const FpaftModel& model, std::span<const double> x, double t,
           const Eigen::VectorXd& theta) {
  const auto tt = time_transform(model, t, x, theta);
  return std::exp(tt.log_phi) * tt.bracket;
}

double tde_hazard(const FpaftModel& model, double t, std::span<const double> x,
                  const Eigen::VectorXd& theta) {
  return model.hazard(t, x, theta);
}

double tde_survival(const FpaftModel& model, double t, std::span<const double> x,
                    const Eigen::VectorXd& theta) {
  return model.survival(t, x, theta);
}

double tde_loglik(const FpaftModel& model, const SurvivalDataset& data,
                  const Eigen::VectorXd& theta) {
  return model.loglik(data, theta);
}

double log_instantaneous_af(const FpaftModel& model, std::size_t covariate, double t,
                            const Eigen::VectorXd& theta) {
  std::vector<double> x(model.n_covariates(), 0.0);
  x.at(covariate) = 1.0;
  const double e = eta(model, x, t, theta);
  return e > 0.0 ? std::log(e) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace fpaft
