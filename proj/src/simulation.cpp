#include "fpaft/simulation.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "fpaft/config.hpp"
#include "fpaft/error.hpp"
#include "fpaft/rng.hpp"

namespace fpaft {

namespace {

constexpr int kMaxBracketSteps = 200;
constexpr std::uintmax_t kMaxRootIterations = 200;

// S(e^s | x) - u, decreasing in s
struct InversionTarget {
  const MixtureWeibullParams& params;
  double x, u;
  double operator()(double s) const { return mixture_survival(std::exp(s), x, params) - u; }
};

double solve_log_time(const InversionTarget& f) {
  double lo = -1.0, hi = 1.0, step = 1.0;
  double f_lo = f(lo), f_hi = f(hi);
  for (int k = 0; f_lo < 0.0; ++k, step *= 2.0) {
    if (k == kMaxBracketSteps) throw NumericalError("mixture inversion: no lower bracket");
    hi = lo;
    f_hi = f_lo;
    lo -= step;
    f_lo = f(lo);
  }
  step = 1.0;
  for (int k = 0; f_hi > 0.0; ++k, step *= 2.0) {
    if (k == kMaxBracketSteps) throw NumericalError("mixture inversion: no upper bracket");
    lo = hi;
    f_lo = f_hi;
    hi += step;
    f_hi = f(hi);
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  std::uintmax_t iters = kMaxRootIterations;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(), iters);
  const double fa = std::abs(f(a)), fb = std::abs(f(b));
  return fa <= fb ? a : b;
}

}  // namespace

void MixtureWeibullParams::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw DataError(fmt::format("mixing proportion p={} not in [0, 1]", p));
  for (const auto& [name, v] : {std::pair{"lambda1", lambda1}, std::pair{"gamma1", gamma1},
                               std::pair{"lambda2", lambda2}, std::pair{"gamma2", gamma2}})
    if (!(v > 0.0) || !std::isfinite(v)) throw DataError(fmt::format("{}={} must be positive", name, v));
  if (!std::isfinite(beta)) throw DataError("beta must be finite");
}

MixtureWeibullParams MixtureWeibullParams::from_config(const Config& cfg) {
  MixtureWeibullParams m;
  m.p = cfg.get_double("p", 1.0);
  m.lambda1 = cfg.get_double("lambda1");
  m.gamma1 = cfg.get_double("gamma1");
  m.lambda2 = cfg.get_double("lambda2", 1.0);
  m.gamma2 = cfg.get_double("gamma2", 1.0);
  m.beta = cfg.get_double("beta", 0.0);
  m.validate();
  return m;
}

double mixture_survival(double t, double x, const MixtureWeibullParams& m) {
  if (t <= 0.0) return 1.0;
  const double ta = t * std::exp(-x * m.beta);
  double s = 0.0;
  if (m.p > 0.0) s += m.p * std::exp(-m.lambda1 * std::pow(ta, m.gamma1));
  if (m.p < 1.0) s += (1.0 - m.p) * std::exp(-m.lambda2 * std::pow(ta, m.gamma2));
  return s;
}

double mixture_cum_hazard(double t, double x, const MixtureWeibullParams& m) {
  return -std::log(mixture_survival(t, x, m));
}

double mixture_mean_survival(double t, const MixtureWeibullParams& m) {
  return 0.5 * (mixture_survival(t, 0.0, m) + mixture_survival(t, 1.0, m));
}

SimulatedData sample_mixture_aft(const MixtureWeibullParams& params, std::size_t n,
                                 std::uint64_t seed, double admin_censor_at) {
  params.validate();
  if (n == 0) throw DataError("sample size must be at least 1");
  if (!(admin_censor_at > 0.0)) throw DataError("administrative censoring time must be positive");
  Rng rng(seed);
  std::vector<double> exit(n);
  std::vector<int> event(n);
  RowMatrix x(static_cast<Eigen::Index>(n), 1);
  std::vector<double> residuals(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = rng.bernoulli(0.5) ? 1.0 : 0.0;
    const double u = rng.uniform_open();
    x(static_cast<Eigen::Index>(i), 0) = xi;
    if (std::isfinite(admin_censor_at) && u < mixture_survival(admin_censor_at, xi, params)) {
      exit[i] = admin_censor_at;
      event[i] = 0;
      continue;
    }
    const InversionTarget f{params, xi, u};
    const double s = solve_log_time(f);
    residuals[i] = std::abs(f(s));
    exit[i] = std::min(std::exp(s), admin_censor_at);
    event[i] = std::exp(s) <= admin_censor_at ? 1 : 0;
  }
  return {SurvivalDataset::without_entry(std::move(exit), std::move(event), std::move(x), {"x"}),
          std::move(residuals)};
}

double max_point_biserial_correlation() { return std::sqrt(2.0 / std::numbers::pi); }

double CausalScenarioParams::latent_correlation() const {
  return corr_scale == CorrelationScale::latent ? corr : corr / max_point_biserial_correlation();
}

double CausalScenarioParams::point_biserial_correlation() const {
  return corr_scale == CorrelationScale::latent ? corr * max_point_biserial_correlation() : corr;
}

void CausalScenarioParams::validate() const {
  if (!(z_sd > 0.0)) throw DataError("z_sd must be positive");
  if (!(censor_upper > 0.0)) throw DataError("censor_upper must be positive");
  if (n == 0) throw DataError("n must be at least 1");
  if (!(std::abs(corr) < 1.0))
    throw DataError(fmt::format("correlation target {} must lie in (-1, 1)", corr));
  if (!(std::abs(latent_correlation()) < 1.0))
    throw DataError(fmt::format("correlation target {} is unreachable: |Corr(X, Z)| < {:.4f} for a "
                                "thresholded normal X",
                                corr, max_point_biserial_correlation()));
  for (const double b : {beta0, beta_x, beta_z})
    if (!std::isfinite(b)) throw DataError("coefficients must be finite");
}

SurvivalDataset sample_causal(const CausalScenarioParams& params, std::uint64_t seed) {
  params.validate();
  const double rho = params.latent_correlation();
  const double rho_c = std::sqrt(1.0 - rho * rho);
  Rng rng(seed);
  const std::size_t n = params.n;
  std::vector<double> exit(n);
  std::vector<int> event(n);
  RowMatrix cov(static_cast<Eigen::Index>(n), 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = rng.normal();
    const double e = rng.normal();
    const double z = params.z_sd * (rho * w + rho_c * e);
    const double x = w > 0.0 ? 1.0 : 0.0;
    const double rate = std::exp(params.beta0 + params.beta_x * x + params.beta_z * z);
    const double t = -std::log(rng.uniform_open()) / rate;
    const double c = params.censor_upper * rng.uniform_open();
    exit[i] = std::min(t, c);
    event[i] = t < c ? 1 : 0;
    cov(static_cast<Eigen::Index>(i), 0) = x;
    cov(static_cast<Eigen::Index>(i), 1) = z;
  }
  return SurvivalDataset::without_entry(std::move(exit), std::move(event), std::move(cov), {"x", "z"});
}

}  // namespace fpaft
