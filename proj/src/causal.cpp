#include "fpaft/causal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "fpaft/error.hpp"
#include "fpaft/rng.hpp"
#include "fpaft/tde.hpp"

namespace fpaft {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

std::size_t index_of(const std::vector<std::string>& names, const std::string& name) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DataError(fmt::format("covariate '{}' is not in the model", name));
  return static_cast<std::size_t>(it - names.begin());
}

/// Arm terms a_i = e^{beta_z z} S(t|x,z), b_i = S(t|x,z) and their weighted means.
struct Arm {
  std::vector<double> a, b;
  double a_mean = 0.0, b_mean = 0.0;
};

Arm arm_terms(const PhEffects& m, const ZDistribution& z, double x, double t) {
  Arm arm;
  const auto& pts = z.points();
  const auto& w = z.weights();
  arm.a.resize(pts.size());
  arm.b.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double s = m.survival(t, x, pts[i]);
    arm.b[i] = s;
    arm.a[i] = std::exp(m.beta_z * pts[i]) * s;
    arm.a_mean += w[i] * arm.a[i];
    arm.b_mean += w[i] * arm.b[i];
  }
  return arm;
}

double log_ratio(const Arm& arm) {
  if (!(arm.a_mean > 0.0) || !(arm.b_mean > 0.0)) return kNaN;
  return std::log(arm.a_mean) - std::log(arm.b_mean);
}

/// Linearised influence of log(a_mean / b_mean), per sample point.
std::vector<double> influence(const Arm& arm) {
  std::vector<double> out(arm.a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = arm.a[i] / arm.a_mean - arm.b[i] / arm.b_mean;
  return out;
}

double variance_of_mean(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  if (v.size() < 2) return kNaN;
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / (n - 1.0) / n;
}

MarginalEffect contrast(const PhEffects& m, const ZDistribution& z1, const ZDistribution& z0,
                        bool shared_sample, std::span<const double> times) {
  MarginalEffect out;
  for (const double t : times) {
    if (!(t > 0.0)) throw DataError("marginal effect times must be positive");
    const Arm a1 = arm_terms(m, z1, 1.0, t);
    const Arm a0 = arm_terms(m, z0, 0.0, t);
    const double value = m.beta_x + log_ratio(a1) - log_ratio(a0);
    double se = 0.0;
    if (z1.is_sample() || z0.is_sample()) {
      if (!std::isfinite(value)) {
        se = kNaN;
      } else if (shared_sample) {
        auto l1 = influence(a1);
        const auto l0 = influence(a0);
        for (std::size_t i = 0; i < l1.size(); ++i) l1[i] -= l0[i];
        se = std::sqrt(variance_of_mean(l1));
      } else {
        const double v1 = z1.is_sample() ? variance_of_mean(influence(a1)) : 0.0;
        const double v0 = z0.is_sample() ? variance_of_mean(influence(a0)) : 0.0;
        se = std::sqrt(v1 + v0);
      }
    }
    out.times.push_back(t);
    out.values.push_back(value);
    out.mc_se.push_back(se);
  }
  return out;
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw DataError("Gauss-Hermite rule needs at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi, Eigen::EigenvaluesOnly);
  QuadratureRule rule;
  const double p0 = std::pow(std::numbers::pi, -0.25);
  for (int i = 0; i < n; ++i) {
    const double x = es.eigenvalues()[i];
    // orthonormal Hermite recurrence; w = 1 / sum_k p_k(x)^2
    double pm1 = 0.0, p = p0, sum = p0 * p0;
    for (int k = 1; k < n; ++k) {
      const double next = std::sqrt(2.0 / k) * x * p - std::sqrt((k - 1.0) / k) * pm1;
      pm1 = p;
      p = next;
      sum += p * p;
    }
    rule.nodes.push_back(x);
    rule.weights.push_back(1.0 / sum);
  }
  return rule;
}

ZDistribution ZDistribution::normal(double mean, double sd, int nodes) {
  if (!(sd > 0.0)) throw DataError("normal Z needs a positive sd");
  const auto rule = gauss_hermite(nodes);
  ZDistribution z;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    z.points_.push_back(mean + std::numbers::sqrt2 * sd * rule.nodes[i]);
    z.weights_.push_back(rule.weights[i] / std::sqrt(std::numbers::pi));
  }
  return z;
}

ZDistribution ZDistribution::normal_given_threshold(double sd, double rho, bool upper, int nodes) {
  if (!(std::abs(rho) < 1.0)) throw DataError("threshold construction needs |rho| < 1");
  ZDistribution z = normal(0.0, sd, nodes);
  const double slope = (upper ? rho : -rho) / (sd * std::sqrt(1.0 - rho * rho));
  double total = 0.0;
  for (std::size_t i = 0; i < z.points_.size(); ++i) {
    z.weights_[i] *= 2.0 * normal_cdf(slope * z.points_[i]);
    total += z.weights_[i];
  }
  for (double& w : z.weights_) w /= total;
  return z;
}

ZDistribution ZDistribution::empirical(std::vector<double> sample) {
  if (sample.empty()) throw DataError("empirical Z needs a non-empty sample");
  ZDistribution z;
  z.sample_ = true;
  z.weights_.assign(sample.size(), 1.0 / static_cast<double>(sample.size()));
  z.points_ = std::move(sample);
  return z;
}

double ZDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) m += weights_[i] * points_[i];
  return m;
}

double PhEffects::survival(double t, double x, double z) const {
  return std::exp(-baseline_cum_hazard(t) * std::exp(beta_x * x + beta_z * z));
}

PhEffects PhEffects::exponential(double log_rate, double beta_x, double beta_z) {
  const double rate = std::exp(log_rate);
  return {beta_x, beta_z, [rate](double t) { return rate * t; }};
}

PhEffects PhEffects::from_fit(const FittedModel& fitted) {
  if (fitted.spec.family != Family::exponential_ph || fitted.spec.covariates.size() != 2)
    throw DataError("PhEffects::from_fit needs an ExpPH fit with covariates (x, z)");
  return exponential(fitted.theta[2], fitted.theta[0], fitted.theta[1]);
}

MarginalEffect marginal_causal_loghr(const PhEffects& model, const ZDistribution& z,
                                     std::span<const double> times) {
  return contrast(model, z, z, true, times);
}

MarginalEffect marginal_unadjusted_loghr(const PhEffects& model, const ZDistribution& z_given_x1,
                                         const ZDistribution& z_given_x0,
                                         std::span<const double> times) {
  return contrast(model, z_given_x1, z_given_x0, false, times);
}

MarginalEffect confounding_bias(const PhEffects& model, const ZDistribution& z,
                                const ZDistribution& z_given_x1, const ZDistribution& z_given_x0,
                                std::span<const double> times) {
  auto causal = marginal_causal_loghr(model, z, times);
  const auto unadjusted = marginal_unadjusted_loghr(model, z_given_x1, z_given_x0, times);
  for (std::size_t i = 0; i < causal.values.size(); ++i) {
    causal.values[i] -= unadjusted.values[i];
    // conservative: treat the two Monte Carlo errors as independent
    causal.mc_se[i] = std::hypot(causal.mc_se[i], unadjusted.mc_se[i]);
  }
  return causal;
}

double aft_marginal_contrast(double beta_x, double beta_z, double mean_gap) {
  return -beta_x - beta_z * mean_gap;
}

double aft_marginal_contrast(const FittedModel& fitted, const std::string& x_name,
                             const std::string& z_name, double mean_gap) {
  if (fitted.spec.family == Family::exponential_ph)
    throw DataError("aft_marginal_contrast needs an AFT fit");
  const auto& names = fitted.spec.covariates;
  double value = fitted.theta[static_cast<Eigen::Index>(index_of(names, x_name))];
  if (std::find(names.begin(), names.end(), z_name) != names.end())
    value += fitted.theta[static_cast<Eigen::Index>(index_of(names, z_name))] * mean_gap;
  return value;
}

std::vector<double> aft_time_dependent_log_af(const FittedModel& fitted, const std::string& name,
                                              std::span<const double> times) {
  const auto* fp = dynamic_cast<const FpaftModel*>(fitted.model.get());
  if (!fp) throw DataError("time-dependent acceleration factors need an FPAFT fit");
  const auto k = index_of(fitted.spec.covariates, name);
  std::vector<double> out;
  for (const double t : times) out.push_back(log_instantaneous_af(*fp, k, t, fitted.theta));
  return out;
}

double threshold_mean_gap(const CausalScenarioParams& params) { return 2.0 * params.z_sd * params.point_biserial_correlation(); }

std::vector<Table1Cell> run_table1(const Table1Config& config) {
  if (config.replicates == 0) throw DataError("the confounding table needs at least one replicate");
  const std::size_t n_corr = config.correlations.size();
  const std::size_t reps = config.replicates;
  for (const double c : config.correlations) {
    auto s = config.scenario;
    s.corr = c;
    s.validate();
  }
  struct Spec {
    ModelSpec spec;
    std::string label, covs;
  };
  std::vector<Spec> roster;
  for (const auto& covs : {std::vector<std::string>{"x", "z"}, std::vector<std::string>{"x"}}) {
    const std::string name = covs.size() == 2 ? "x+z" : "x";
    ModelSpec ph{Family::exponential_ph, 1, covs, {}};
    ModelSpec aft{Family::fpaft, config.fpaft_df, covs, {}};
    roster.push_back({ph, ph.label(), name});
    roster.push_back({aft, aft.label(), name});
  }
  const std::size_t n_models = roster.size();

  // est[(job * n_models + m) * 2 + {0: beta, 1: se}]; NaN marks a failed fit
  std::vector<double> est(n_corr * reps * n_models * 2, kNaN);
  const auto jobs = static_cast<long long>(n_corr * reps);
#pragma omp parallel for schedule(dynamic)
  for (long long job = 0; job < jobs; ++job) {
    const auto j = static_cast<std::size_t>(job);
    auto scenario = config.scenario;
    scenario.corr = config.correlations[j / reps];
    const auto data = sample_causal(scenario, substream_seed(config.seed, j));
    FitOptions options;
    options.exec = Execution::serial_reference;
    for (std::size_t m = 0; m < n_models; ++m) {
      try {
        const auto f = fit(roster[m].spec, data, options);
        if (!f.converged) continue;
        est[(j * n_models + m) * 2] = f.theta[0];
        est[(j * n_models + m) * 2 + 1] = f.standard_errors()[0];
      } catch (const Error&) {
      }
    }
  }

  std::vector<Table1Cell> cells;
  for (std::size_t c = 0; c < n_corr; ++c) {
    for (std::size_t m = 0; m < n_models; ++m) {
      Table1Cell cell;
      cell.corr = config.correlations[c];
      cell.model = roster[m].label;
      cell.covariates = roster[m].covs;
      cell.replicates = reps;
      std::vector<double> betas;
      double se_sum = 0.0;
      std::size_t se_count = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        const std::size_t at = ((c * reps + r) * n_models + m) * 2;
        if (std::isnan(est[at])) continue;
        betas.push_back(est[at]);
        if (std::isfinite(est[at + 1])) {
          se_sum += est[at + 1];
          ++se_count;
        }
      }
      cell.converged = betas.size();
      if (!betas.empty()) {
        double mean = 0.0;
        for (double b : betas) mean += b;
        mean /= static_cast<double>(betas.size());
        double ss = 0.0;
        for (double b : betas) ss += (b - mean) * (b - mean);
        cell.mean_beta = mean;
        cell.sd_beta = betas.size() > 1 ? std::sqrt(ss / static_cast<double>(betas.size() - 1)) : 0.0;
        cell.mean_se = se_count ? se_sum / static_cast<double>(se_count) : kNaN;
      } else {
        cell.mean_beta = cell.mean_se = cell.sd_beta = kNaN;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace fpaft
