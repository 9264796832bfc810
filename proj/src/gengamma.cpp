#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "fpaft/models.hpp"

namespace fpaft {

namespace {

namespace bm = boost::math;
using NoThrow = bm::policies::policy<bm::policies::domain_error<bm::policies::errno_on_error>,
                                     bm::policies::overflow_error<bm::policies::errno_on_error>,
                                     bm::policies::evaluation_error<bm::policies::errno_on_error>,
                                     bm::policies::pole_error<bm::policies::errno_on_error>>;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLognormalKappa = 1e-7;
const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// e^x - 1 - x without cancellation near 0.
double expm1mx(double x) {
  if (std::abs(x) > 0.5) return std::expm1(x) - x;
  double term = x * x / 2.0, sum = term;
  for (int k = 3; k < 30 && std::abs(term) > 1e-17 * std::abs(sum); ++k) {
    term *= x / k;
    sum += term;
  }
  return sum;
}

// lgamma(a) - Stirling's approximation.
double stirling_correction(double a) {
  if (a < 10.0)
    return std::lgamma(a) - (a - 0.5) * std::log(a) + a - kHalfLog2Pi;
  const double r = 1.0 / a, r2 = r * r;
  return r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 / 1680.0)));
}

double log_upper_gamma(double a, double z) {
  const double q = bm::gamma_q(a, z, NoThrow());
  if (q > 1e-300) return std::log(q);
  // far upper tail: leading terms of the asymptotic expansion
  double lq = (a - 1.0) * std::log(z) - z - std::lgamma(a);
  if (z > a) lq -= std::log1p(-(a - 1.0) / z);
  return lq;
}

double log_lower_gamma(double a, double z) {
  const double p = bm::gamma_p(a, z, NoThrow());
  if (p > 1e-300) return std::log(p);
  return a * std::log(z) - z - std::lgamma(a + 1.0);
}

double log_normal_sf(double w) {
  if (w < 30.0) return std::log(0.5 * std::erfc(w / std::numbers::sqrt2));
  return -0.5 * w * w - std::log(w) - kHalfLog2Pi;
}

// d log f / dw
double dlog_density_dw(double w, double kappa) {
  if (std::abs(kappa) < kLognormalKappa) return -w;
  return -std::expm1(kappa * w) / kappa;
}

struct Params {
  double mu, log_sigma, kappa;
};

Params unpack(const Eigen::VectorXd& theta, std::size_t p) {
  return {theta[static_cast<Eigen::Index>(p)], theta[static_cast<Eigen::Index>(p + 1)],
          theta[static_cast<Eigen::Index>(p + 2)]};
}

double row_loglik_at(const SurvivalDataset& data, std::size_t i, double xb, const Params& q) {
  const double sigma = std::exp(q.log_sigma);
  const double log_y = std::log(data.exit(i));
  const double w = (log_y - q.mu - xb) / sigma;
  double ll = GenGammaModel::log_survival_std(w, q.kappa);
  if (data.event(i))
    ll = GenGammaModel::log_density_std(w, q.kappa) - q.log_sigma - log_y;
  if (data.entry(i) > 0.0) {
    const double w0 = (std::log(data.entry(i)) - q.mu - xb) / sigma;
    ll -= GenGammaModel::log_survival_std(w0, q.kappa);
  }
  return std::isfinite(ll) ? ll : kNegInf;
}

}  // namespace

double GenGammaModel::log_survival_std(double w, double kappa) {
  if (std::abs(kappa) < kLognormalKappa) return log_normal_sf(w);
  const double a = 1.0 / (kappa * kappa);
  const double z = a * std::exp(kappa * w);
  if (z == 0.0) return kappa > 0.0 ? 0.0 : kNegInf;
  if (!std::isfinite(z)) return kappa > 0.0 ? kNegInf : 0.0;
  return kappa > 0.0 ? log_upper_gamma(a, z) : log_lower_gamma(a, z);
}

double GenGammaModel::log_density_std(double w, double kappa) {
  if (std::abs(kappa) < kLognormalKappa) return -kHalfLog2Pi - 0.5 * w * w;
  const double a = 1.0 / (kappa * kappa);
  return -kHalfLog2Pi - stirling_correction(a) - expm1mx(kappa * w) * a;
}

GenGammaModel::GenGammaModel(ModelSpec spec) : SurvivalModel(std::move(spec)) {}

std::vector<std::string> GenGammaModel::parameter_names() const {
  auto names = spec().covariates;
  names.emplace_back("mu");
  names.emplace_back("log_sigma");
  names.emplace_back("kappa");
  return names;
}

double GenGammaModel::log_cum_hazard(double t, std::span<const double> x,
                                     const Eigen::VectorXd& theta) const {
  check_theta(theta);
  const auto q = unpack(theta, n_covariates());
  const double w = (std::log(t) - q.mu - dot(x, beta(theta))) / std::exp(q.log_sigma);
  const double log_s = log_survival_std(w, q.kappa);
  return std::log(-log_s);
}

double GenGammaModel::hazard(double t, std::span<const double> x,
                             const Eigen::VectorXd& theta) const {
  check_theta(theta);
  const auto q = unpack(theta, n_covariates());
  const double w = (std::log(t) - q.mu - dot(x, beta(theta))) / std::exp(q.log_sigma);
  return std::exp(log_density_std(w, q.kappa) - log_survival_std(w, q.kappa) - q.log_sigma) / t;
}

double GenGammaModel::row_loglik(const SurvivalDataset& data, std::size_t i,
                                 const Eigen::VectorXd& theta) const {
  return row_loglik_at(data, i, dot(data.covariates(i), beta(theta)), unpack(theta, n_covariates()));
}

bool GenGammaModel::row_score(const SurvivalDataset& data, std::size_t i,
                              const Eigen::VectorXd& theta, std::span<double> out) const {
  const std::size_t p = n_covariates();
  const auto q = unpack(theta, p);
  const auto x = data.covariates(i);
  const double xb = dot(x, beta(theta));
  const double sigma = std::exp(q.log_sigma);

  // dl/dw at exit and entry; w moves with mu, beta and log sigma
  const double w = (std::log(data.exit(i)) - q.mu - xb) / sigma;
  double g_w, g_logsigma;
  if (data.event(i)) {
    g_w = dlog_density_dw(w, q.kappa);
    g_logsigma = -1.0;
  } else {
    g_w = -std::exp(log_density_std(w, q.kappa) - log_survival_std(w, q.kappa));
    g_logsigma = 0.0;
  }
  double sum_dw = g_w;         // coefficient of -1/sigma for mu and beta
  g_logsigma -= g_w * w;
  if (data.entry(i) > 0.0) {
    const double w0 = (std::log(data.entry(i)) - q.mu - xb) / sigma;
    const double g0 = std::exp(log_density_std(w0, q.kappa) - log_survival_std(w0, q.kappa));
    sum_dw += g0;
    g_logsigma -= g0 * w0;
  }

  // kappa enters through special functions; a 5-point stencil is accurate to O(h^4)
  const double h = 1e-3 * std::max(1.0, std::abs(q.kappa));
  auto at = [&](double k) { return row_loglik_at(data, i, xb, {q.mu, q.log_sigma, k}); };
  const double g_kappa =
      (at(q.kappa - 2 * h) - 8 * at(q.kappa - h) + 8 * at(q.kappa + h) - at(q.kappa + 2 * h)) /
      (12 * h);

  if (!std::isfinite(sum_dw) || !std::isfinite(g_logsigma) || !std::isfinite(g_kappa)) return false;
  for (std::size_t k = 0; k < p; ++k) out[k] = -x[k] * sum_dw / sigma;
  out[p] = -sum_dw / sigma;
  out[p + 1] = g_logsigma;
  out[p + 2] = g_kappa;
  return true;
}

Eigen::VectorXd GenGammaModel::initial_values(const SurvivalDataset& data) const {
  // Weibull start mapped onto kappa = 1: sigma = 1/gamma, mu = -log(lambda)/gamma
  const auto [intercept, slope] = weibull_start(data);
  const std::size_t p = n_covariates();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_params()));
  theta[static_cast<Eigen::Index>(p)] = -intercept / slope;
  theta[static_cast<Eigen::Index>(p + 1)] = -std::log(slope);
  theta[static_cast<Eigen::Index>(p + 2)] = 1.0;
  return theta;
}

}  // namespace fpaft
