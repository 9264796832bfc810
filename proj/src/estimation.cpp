#include "fpaft/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "fpaft/error.hpp"

namespace fpaft {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kHessianStep = 1e-5;
constexpr double kEigenFloor = 1e-8;
constexpr double kRoundoff = 1e-12;
constexpr int kMaxStalls = 3;

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

/// Score or empty on the -inf region.
Eigen::VectorXd try_score(const SurvivalModel& model, const SurvivalDataset& data,
                          const Eigen::VectorXd& theta, Execution exec) {
  try {
    return model.score(data, theta, exec);
  } catch (const NumericalError&) {
    return {};
  }
}

/// Ascent direction info^-1 g with the information made positive definite. The matrix is
/// first equilibrated by its diagonal (spline coefficients and betas live on very
/// different scales), then eigenvalues are replaced by their absolute values and floored
/// relative to the largest.
Eigen::VectorXd newton_direction(const Eigen::MatrixXd& info, const Eigen::VectorXd& g) {
  Eigen::VectorXd d = info.diagonal().cwiseAbs();
  const double dmax = d.maxCoeff();
  if (!(dmax > 0.0) || !std::isfinite(dmax)) return g;
  d = d.cwiseMax(kEigenFloor * dmax).cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd scaled = d.asDiagonal() * info * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled);
  if (es.info() != Eigen::Success) return g;  // steepest ascent as a last resort
  Eigen::VectorXd ev = es.eigenvalues().cwiseAbs();
  const double floor = std::max(kEigenFloor * ev.maxCoeff(), std::numeric_limits<double>::min());
  ev = ev.cwiseMax(floor);
  const Eigen::MatrixXd& v = es.eigenvectors();
  return d.asDiagonal() * (v * (v.transpose() * d.cwiseProduct(g)).cwiseQuotient(ev));
}

void finish(FittedModel& out, const SurvivalDataset& data, const FitOptions& options) {
  const double k = static_cast<double>(out.n_params());
  out.aic = -2.0 * out.loglik + 2.0 * k;
  const double n_bic = options.bic_uses_events ? static_cast<double>(data.n_events())
                                               : static_cast<double>(data.size());
  out.bic = -2.0 * out.loglik + k * std::log(n_bic);
}

}  // namespace

Eigen::VectorXd FittedModel::standard_errors() const {
  if (!covariance) return Eigen::VectorXd::Constant(theta.size(), kNaN);
  return covariance->diagonal().cwiseMax(0.0).cwiseSqrt();
}

Eigen::VectorXd initialize(const ModelSpec& spec, const SurvivalDataset& data) {
  const auto sub = data.covariate_names() == spec.covariates ? data : data.select(spec.covariates);
  return make_model(spec, sub)->initial_values(sub);
}

Eigen::MatrixXd observed_information(const SurvivalModel& model, const SurvivalDataset& data,
                                     const Eigen::VectorXd& theta, Execution exec) {
  const auto k = theta.size();
  Eigen::MatrixXd h(k, k);
  Eigen::VectorXd centre;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double step = kHessianStep * (1.0 + std::abs(theta[j]));
    Eigen::VectorXd up = theta, down = theta;
    up[j] += step;
    down[j] -= step;
    const auto g_up = try_score(model, data, up, exec);
    const auto g_down = try_score(model, data, down, exec);
    if (g_up.size() && g_down.size()) {
      h.col(j) = (g_up - g_down) / (2.0 * step);
      continue;
    }
    if (!centre.size()) centre = try_score(model, data, theta, exec);
    if (!centre.size()) throw NumericalError("information undefined: score is undefined at theta");
    if (g_up.size())
      h.col(j) = (g_up - centre) / step;
    else if (g_down.size())
      h.col(j) = (centre - g_down) / step;
    else
      throw NumericalError(fmt::format("information undefined along parameter {}", j));
  }
  return -0.5 * (h + h.transpose());
}

std::optional<Eigen::MatrixXd> covariance_from_information(const Eigen::MatrixXd& info) {
  if (!info.allFinite()) return std::nullopt;
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(info.rows(), info.cols()));
  if (!cov.allFinite()) return std::nullopt;
  return Eigen::MatrixXd(0.5 * (cov + cov.transpose()));
}

Eigen::MatrixXd covariance(const FittedModel& fitted) {
  if (!fitted.covariance)
    throw NumericalError(fmt::format("{}: covariance unavailable ({})", fitted.spec.label(),
                                     fitted.converged ? "singular information" : "not converged"));
  return *fitted.covariance;
}

FittedModel fit(std::shared_ptr<const SurvivalModel> model, const SurvivalDataset& data,
                const FitOptions& options) {
  model->check_data(data);
  FittedModel out;
  out.spec = model->spec();
  out.model = model;
  out.n_obs = data.size();
  out.n_events = data.n_events();
  out.data_checksum = data.checksum();

  Eigen::VectorXd theta = options.start ? *options.start : model->initial_values(data);
  if (static_cast<std::size_t>(theta.size()) != model->n_params())
    throw DataError(fmt::format("{}: start has {} values, expected {}", out.spec.label(),
                                theta.size(), model->n_params()));
  double ll = model->loglik(data, theta, options.exec);
  out.theta = theta;
  out.loglik = ll;
  if (!std::isfinite(ll)) {
    out.message = "log-likelihood is not finite at the starting values";
    finish(out, data, options);
    return out;
  }

  int stalls = 0;
  try {
    for (int iter = 0;; ++iter) {
      const Eigen::VectorXd g = model->score(data, theta, options.exec);
      const double gmax = max_abs(g);
      out.max_abs_score = gmax;
      if (!std::isfinite(gmax)) {
        out.message = "score is not finite";
        break;
      }
      if (gmax < options.gradient_tolerance) {
        out.converged = true;
        break;
      }
      if (iter >= options.max_iterations) {
        out.message = fmt::format("no convergence within {} iterations", options.max_iterations);
        break;
      }
      const Eigen::MatrixXd info = observed_information(*model, data, theta, options.exec);
      const Eigen::VectorXd dir = newton_direction(info, g);

      // Accept a strict increase, or a change within roundoff that reduces the gradient.
      double t = 1.0;
      int halvings = 0;
      bool accepted = false;
      Eigen::VectorXd cand;
      double ll_cand = 0.0;
      for (; halvings <= options.max_step_halvings; ++halvings, t *= 0.5) {
        cand = theta + t * dir;
        ll_cand = model->loglik(data, cand, options.exec);
        if (!std::isfinite(ll_cand)) continue;
        if (ll_cand > ll) {
          accepted = true;
          break;
        }
        if (ll_cand >= ll - kRoundoff * (1.0 + std::abs(ll))) {
          const auto g_cand = try_score(*model, data, cand, options.exec);
          if (g_cand.size() && max_abs(g_cand) < gmax) {
            accepted = true;
            break;
          }
        }
      }
      if (!accepted) {
        out.message = "step halving failed to improve the log-likelihood";
        break;
      }
      const double rel_change =
          ((cand - theta).cwiseAbs().array() / (1.0 + theta.cwiseAbs().array())).maxCoeff();
      theta = cand;
      ll = ll_cand;
      out.iterations = iter + 1;
      out.trace.push_back({out.iterations, ll, gmax, halvings});
      stalls = rel_change < options.step_tolerance ? stalls + 1 : 0;
      if (stalls >= kMaxStalls) {
        const auto g_end = model->score(data, theta, options.exec);
        out.max_abs_score = max_abs(g_end);
        out.converged = out.max_abs_score < options.gradient_tolerance;
        if (!out.converged) out.message = "parameter change below tolerance";
        break;
      }
    }
  } catch (const NumericalError& e) {
    out.message = e.what();
    out.converged = false;
  }

  out.theta = theta;
  out.loglik = ll;
  if (out.converged) {
    try {
      out.covariance =
          covariance_from_information(observed_information(*model, data, theta, options.exec));
    } catch (const NumericalError&) {
      out.covariance.reset();
    }
  }
  finish(out, data, options);

  if (options.reknot && out.converged) {
    if (const auto* fp = dynamic_cast<const FpaftModel*>(model.get())) {
      auto [moved, start] = fp->reknotted(data, theta);
      FitOptions again = options;
      again.reknot = false;
      again.start = start;
      return fit(std::make_shared<FpaftModel>(std::move(moved)), data, again);
    }
  }
  return out;
}

FittedModel fit(const ModelSpec& spec, const SurvivalDataset& data, const FitOptions& options) {
  if (data.covariate_names() == spec.covariates) return fit(make_model(spec, data), data, options);
  const auto sub = data.select(spec.covariates);
  return fit(make_model(spec, sub), sub, options);
}

SurvivalPrediction predict_survival(const FittedModel& fitted, std::span<const double> x,
                                    std::span<const double> times) {
  const auto& model = *fitted.model;
  if (x.size() != model.n_covariates())
    throw DataError(fmt::format("prediction needs {} covariate values, got {}",
                                model.n_covariates(), x.size()));
  SurvivalPrediction out;
  const Eigen::VectorXd& theta = fitted.theta;
  const auto k = theta.size();
  for (const double t : times) {
    if (!(t > 0.0) || !std::isfinite(t))
      throw DataError(fmt::format("prediction times must be positive (got {})", t));
    const double g = model.log_cum_hazard(t, x, theta);
    const double s = std::exp(-std::exp(g));
    const bool defined = std::isfinite(g) && s > 0.0 && s < 1.0;
    double se = kNaN;
    if (defined && fitted.covariance) {
      Eigen::VectorXd grad(k);
      for (Eigen::Index j = 0; j < k; ++j) {
        const double step = kHessianStep * (1.0 + std::abs(theta[j]));
        Eigen::VectorXd up = theta, down = theta;
        up[j] += step;
        down[j] -= step;
        grad[j] = (model.log_cum_hazard(t, x, up) - model.log_cum_hazard(t, x, down)) / (2.0 * step);
      }
      const double var = grad.dot(*fitted.covariance * grad);
      if (std::isfinite(var) && var >= 0.0) se = std::sqrt(var);
    }
    out.times.push_back(t);
    out.survival.push_back(s);
    out.se_log_log.push_back(se);
    out.defined.push_back(defined);
    // larger exponent on S < 1 gives the lower bound
    out.lower.push_back(std::isfinite(se) ? std::pow(s, std::exp(1.96 * se)) : kNaN);
    out.upper.push_back(std::isfinite(se) ? std::pow(s, std::exp(-1.96 * se)) : kNaN);
  }
  return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t i) {
    return std::isnan(values[i]) ? std::numeric_limits<double>::infinity() : values[i];
  };
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return key(a) < key(b); });
  std::vector<double> ranks(n);
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo + 1;
    while (hi < n && key(order[hi]) == key(order[lo])) ++hi;
    const double r = 0.5 * static_cast<double>(lo + 1 + hi);  // mean of lo+1 .. hi
    for (std::size_t j = lo; j < hi; ++j) ranks[order[j]] = r;
    lo = hi;
  }
  return ranks;
}

std::vector<ComparisonRow> compare(std::span<const FittedModel> fits) {
  std::vector<double> aic, bic;
  for (const auto& f : fits) {
    if (f.data_checksum != fits.front().data_checksum)
      throw DataError("compare: models were fitted to different data");
    aic.push_back(f.aic);
    bic.push_back(f.bic);
  }
  const auto aic_rank = average_ranks(aic);
  const auto bic_rank = average_ranks(bic);
  std::vector<ComparisonRow> rows;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const auto& f = fits[i];
    rows.push_back({f.spec.label(), f.n_params(), f.loglik, f.aic, f.bic, aic_rank[i], bic_rank[i],
                    f.converged});
  }
  return rows;
}

}  // namespace fpaft
