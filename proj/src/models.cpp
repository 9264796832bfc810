#include "fpaft/models.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include <Eigen/QR>
#include <fmt/format.h>

#include "fpaft/error.hpp"

namespace fpaft {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxDf = 30;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::fpaft: return "fpaft";
    case Family::weibull: return "weibull";
    case Family::gengamma: return "gengamma";
    case Family::exponential_ph: return "expph";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "fpaft") return Family::fpaft;
  if (name == "weibull") return Family::weibull;
  if (name == "gengamma" || name == "gamma") return Family::gengamma;
  if (name == "expph" || name == "exponential_ph") return Family::exponential_ph;
  throw DataError(fmt::format("unknown model family '{}'", name));
}

void ModelSpec::validate() const {
  if (family == Family::fpaft && (df < 1 || df > kMaxDf))
    throw DataError(fmt::format("FPAFT df must be in [1, {}] (got {})", kMaxDf, df));
  if (family != Family::fpaft && !tde.empty())
    throw DataError("time-dependent effects are only available for the fpaft family");
  for (const auto& term : tde) {
    if (std::find(covariates.begin(), covariates.end(), term.covariate) == covariates.end())
      throw DataError(fmt::format("tde covariate '{}' is not among the model covariates",
                                  term.covariate));
    if (term.df < 1 || term.df > kMaxDf)
      throw DataError(fmt::format("tde df for '{}' must be in [1, {}]", term.covariate, kMaxDf));
  }
}

std::size_t ModelSpec::n_params() const {
  const std::size_t p = covariates.size();
  switch (family) {
    case Family::fpaft: {
      std::size_t k = p + static_cast<std::size_t>(df) + 1;
      for (const auto& term : tde) k += static_cast<std::size_t>(term.df);
      return k;
    }
    case Family::weibull: return p + 2;
    case Family::gengamma: return p + 3;
    case Family::exponential_ph: return p + 1;
  }
  return p;
}

std::string ModelSpec::label() const {
  switch (family) {
    case Family::fpaft: return fmt::format("FPAFT-df={}", df);
    case Family::weibull: return "Weibull";
    case Family::gengamma: return "Gamma";
    case Family::exponential_ph: return "ExpPH";
  }
  return "?";
}

ModelSpec ModelSpec::parse(std::string_view text, std::vector<std::string> covariates) {
  ModelSpec spec;
  spec.covariates = std::move(covariates);
  const auto colon = text.find(':');
  spec.family = parse_family(text.substr(0, colon));
  if (colon != std::string_view::npos) {
    if (spec.family != Family::fpaft)
      throw DataError(fmt::format("'{}': only fpaft takes a df suffix", text));
    const auto digits = text.substr(colon + 1);
    int df = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), df);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
      throw DataError(fmt::format("'{}': bad df", text));
    spec.df = df;
  } else if (spec.family != Family::fpaft) {
    spec.df = 1;
  }
  spec.validate();
  return spec;
}

double acceleration_factor(std::span<const double> x, std::span<const double> beta) {
  return std::exp(-dot(x, beta));
}

// ---------------------------------------------------------------------------

SurvivalModel::SurvivalModel(ModelSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

double SurvivalModel::cum_hazard(double t, std::span<const double> x,
                                 const Eigen::VectorXd& theta) const {
  return std::exp(log_cum_hazard(t, x, theta));
}

double SurvivalModel::survival(double t, std::span<const double> x,
                               const Eigen::VectorXd& theta) const {
  return std::exp(-cum_hazard(t, x, theta));
}

void SurvivalModel::check_theta(const Eigen::VectorXd& theta) const {
  if (static_cast<std::size_t>(theta.size()) != n_params())
    throw DataError(fmt::format("{}: expected {} parameters, got {}", spec_.label(), n_params(),
                                theta.size()));
}

void SurvivalModel::check_data(const SurvivalDataset& data) const {
  if (data.covariate_names() != spec_.covariates)
    throw DataError(fmt::format("{}: data covariates do not match the model covariates",
                                spec_.label()));
}

double SurvivalModel::loglik(const SurvivalDataset& data, const Eigen::VectorXd& theta,
                             Execution exec) const {
  check_theta(theta);
  check_data(data);
  return reduce_rows(data.size(), [&](std::size_t i) { return row_loglik(data, i, theta); }, exec);
}

Eigen::VectorXd SurvivalModel::score(const SurvivalDataset& data, const Eigen::VectorXd& theta,
                                     Execution exec) const {
  check_theta(theta);
  check_data(data);
  auto g = reduce_row_gradients(
      data.size(), n_params(),
      [&](std::size_t i, std::span<double> out) { return row_score(data, i, theta, out); }, exec);
  if (g.size() == 0)
    throw NumericalError(fmt::format("{}: score undefined (log-likelihood is -inf)", spec_.label()));
  return g;
}

// ---------------------------------------------------------------------------

std::pair<double, double> weibull_start(const SurvivalDataset& data) {
  const auto na = nelson_aalen(data);
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < na.times.size(); ++k) {
    if (na.values[k] <= 0.0) continue;
    lx.push_back(std::log(na.times[k]));
    ly.push_back(std::log(na.values[k]));
  }
  if (lx.size() < 2) return {std::log(static_cast<double>(data.n_events()) + 0.5), 1.0};
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(lx.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  double slope = sxx > 0.0 ? sxy / sxx : 1.0;
  if (!(slope > 0.05)) slope = 1.0;
  return {my - slope * mx, slope};
}

// ---------------------------------------------------------------------------

WeibullModel::WeibullModel(ModelSpec spec) : SurvivalModel(std::move(spec)) {}

std::vector<std::string> WeibullModel::parameter_names() const {
  auto names = spec().covariates;
  names.emplace_back("log_lambda");
  names.emplace_back("log_gamma");
  return names;
}

double WeibullModel::log_cum_hazard(double t, std::span<const double> x,
                                    const Eigen::VectorXd& theta) const {
  const std::size_t p = n_covariates();
  return theta[p] + std::exp(theta[p + 1]) * (std::log(t) - dot(x, beta(theta)));
}

double WeibullModel::hazard(double t, std::span<const double> x,
                            const Eigen::VectorXd& theta) const {
  const std::size_t p = n_covariates();
  return std::exp(log_cum_hazard(t, x, theta) + theta[p + 1]) / t;
}

double WeibullModel::row_loglik(const SurvivalDataset& data, std::size_t i,
                                const Eigen::VectorXd& theta) const {
  const std::size_t p = n_covariates();
  const double log_lambda = theta[p];
  const double log_gamma = theta[p + 1];
  const double gamma = std::exp(log_gamma);
  const double xb = dot(data.covariates(i), beta(theta));
  const double log_y = std::log(data.exit(i));
  const double log_h = log_lambda + gamma * (log_y - xb);
  double ll = -std::exp(log_h);
  if (data.event(i)) ll += log_h + log_gamma - log_y;
  if (data.entry(i) > 0.0) ll += std::exp(log_lambda + gamma * (std::log(data.entry(i)) - xb));
  return std::isnan(ll) ? kNegInf : ll;
}

bool WeibullModel::row_score(const SurvivalDataset& data, std::size_t i,
                             const Eigen::VectorXd& theta, std::span<double> out) const {
  const std::size_t p = n_covariates();
  const double log_lambda = theta[p];
  const double gamma = std::exp(theta[p + 1]);
  const auto x = data.covariates(i);
  const double xb = dot(x, beta(theta));
  const double w = std::log(data.exit(i)) - xb;
  const double h = std::exp(log_lambda + gamma * w);
  const double d = data.event(i);
  double d_loglambda = d - h;
  double d_loggamma = d * (gamma * w + 1.0) - h * gamma * w;
  if (data.entry(i) > 0.0) {
    const double w0 = std::log(data.entry(i)) - xb;
    const double h0 = std::exp(log_lambda + gamma * w0);
    d_loglambda += h0;
    d_loggamma += h0 * gamma * w0;
  }
  if (!std::isfinite(d_loglambda) || !std::isfinite(d_loggamma)) return false;
  for (std::size_t k = 0; k < p; ++k) out[k] = -gamma * x[k] * d_loglambda;
  out[p] = d_loglambda;
  out[p + 1] = d_loggamma;
  return true;
}

Eigen::VectorXd WeibullModel::initial_values(const SurvivalDataset& data) const {
  const auto [intercept, slope] = weibull_start(data);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_params()));
  theta[static_cast<Eigen::Index>(n_covariates())] = intercept;
  theta[static_cast<Eigen::Index>(n_covariates() + 1)] = std::log(slope);
  return theta;
}

// ---------------------------------------------------------------------------

ExponentialPhModel::ExponentialPhModel(ModelSpec spec) : SurvivalModel(std::move(spec)) {}

std::vector<std::string> ExponentialPhModel::parameter_names() const {
  auto names = spec().covariates;
  names.emplace_back("intercept");
  return names;
}

double ExponentialPhModel::log_cum_hazard(double t, std::span<const double> x,
                                          const Eigen::VectorXd& theta) const {
  return theta[static_cast<Eigen::Index>(n_covariates())] + dot(x, beta(theta)) + std::log(t);
}

double ExponentialPhModel::hazard(double, std::span<const double> x,
                                  const Eigen::VectorXd& theta) const {
  return std::exp(theta[static_cast<Eigen::Index>(n_covariates())] + dot(x, beta(theta)));
}

double ExponentialPhModel::row_loglik(const SurvivalDataset& data, std::size_t i,
                                      const Eigen::VectorXd& theta) const {
  const double eta =
      theta[static_cast<Eigen::Index>(n_covariates())] + dot(data.covariates(i), beta(theta));
  const double ll = data.event(i) * eta - (data.exit(i) - data.entry(i)) * std::exp(eta);
  return std::isnan(ll) ? kNegInf : ll;
}

bool ExponentialPhModel::row_score(const SurvivalDataset& data, std::size_t i,
                                   const Eigen::VectorXd& theta, std::span<double> out) const {
  const std::size_t p = n_covariates();
  const auto x = data.covariates(i);
  const double eta = theta[static_cast<Eigen::Index>(p)] + dot(x, beta(theta));
  const double r = data.event(i) - (data.exit(i) - data.entry(i)) * std::exp(eta);
  if (!std::isfinite(r)) return false;
  for (std::size_t k = 0; k < p; ++k) out[k] = r * x[k];
  out[p] = r;
  return true;
}

Eigen::VectorXd ExponentialPhModel::initial_values(const SurvivalDataset& data) const {
  double exposure = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) exposure += data.exit(i) - data.entry(i);
  const double events = std::max(static_cast<double>(data.n_events()), 0.5);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_params()));
  theta[static_cast<Eigen::Index>(n_covariates())] = std::log(events / exposure);
  return theta;
}

// ---------------------------------------------------------------------------

std::shared_ptr<const SurvivalModel> make_model(const ModelSpec& spec, const SurvivalDataset& data) {
  spec.validate();
  if (data.covariate_names() != spec.covariates)
    throw DataError(fmt::format("{}: data covariates do not match the model covariates",
                                spec.label()));
  const std::size_t k = spec.n_params();
  if (data.n_events() < k)
    throw IdentifiabilityError(fmt::format("{} has {} parameters but the data has only {} events",
                                           spec.label(), k, data.n_events()));
  switch (spec.family) {
    case Family::fpaft: return std::make_shared<FpaftModel>(FpaftModel::from_data(spec, data));
    case Family::weibull: return std::make_shared<WeibullModel>(spec);
    case Family::gengamma: return std::make_shared<GenGammaModel>(spec);
    case Family::exponential_ph: return std::make_shared<ExponentialPhModel>(spec);
  }
  throw DataError("unknown family");
}

}  // namespace fpaft
