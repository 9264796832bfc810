#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/QR>
#include <fmt/format.h>

#include "fpaft/error.hpp"
#include "fpaft/models.hpp"
#include "fpaft/tde.hpp"

namespace fpaft {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxBasis = 32;
using BasisBuffer = std::array<double, kMaxBasis>;

std::vector<double> log_event_times(const SurvivalDataset& data) {
  std::vector<double> out;
  out.reserve(data.n_events());
  for (std::size_t i = 0; i < data.size(); ++i)
    if (data.event(i)) out.push_back(std::log(data.exit(i)));
  return out;
}

/// Everything the likelihood needs about one time point of one row.
struct PointEval {
  double u = 0.0;        // log(t phi(x,t))
  double bracket = 1.0;  // d u / d log t
  SplineValue s;         // baseline spline at u
};

}  // namespace

FpaftModel::FpaftModel(ModelSpec spec, KnotVector baseline, std::vector<TimeDependentEffect> tde)
    : SurvivalModel(std::move(spec)), baseline_(std::move(baseline)), tde_(std::move(tde)) {
  if (this->spec().family != Family::fpaft) throw DataError("FpaftModel needs an fpaft spec");
  if (tde_.size() != this->spec().tde.size())
    throw DataError("tde knots do not match the tde terms of the model spec");
  std::size_t offset = n_covariates() + baseline_.df() + 1;
  for (const auto& term : tde_) {
    if (term.covariate >= n_covariates()) throw DataError("tde covariate index out of range");
    tde_offsets_.push_back(offset);
    offset += term.knots.df();
  }
  n_params_ = offset;
}

FpaftModel FpaftModel::from_data(const ModelSpec& spec, const SurvivalDataset& data) {
  spec.validate();
  const auto log_times = log_event_times(data);
  KnotVector baseline = make_knots(log_times, spec.df);
  std::vector<TimeDependentEffect> tde;
  for (const auto& term : spec.tde) {
    const auto it = std::find(spec.covariates.begin(), spec.covariates.end(), term.covariate);
    tde.push_back({static_cast<std::size_t>(it - spec.covariates.begin()),
                   make_knots(log_times, term.df)});
  }
  ModelSpec actual = spec;
  actual.df = static_cast<int>(baseline.df());
  for (std::size_t q = 0; q < tde.size(); ++q) actual.tde[q].df = static_cast<int>(tde[q].knots.df());
  return FpaftModel(std::move(actual), std::move(baseline), std::move(tde));
}

std::vector<std::string> FpaftModel::parameter_names() const {
  auto names = spec().covariates;
  for (std::size_t j = 0; j < n_gamma(); ++j) names.push_back(fmt::format("gamma{}", j));
  for (const auto& term : spec().tde)
    for (int j = 1; j <= term.df; ++j) names.push_back(fmt::format("tde:{}:{}", term.covariate, j));
  return names;
}

double FpaftModel::log_cum_hazard(double t, std::span<const double> x,
                                  const Eigen::VectorXd& theta) const {
  check_theta(theta);
  const auto tt = time_transform(*this, t, x, theta);
  const double u = std::log(t) + tt.log_phi;
  return baseline_.evaluate(u, std::span<const double>(theta.data() + gamma_offset(), n_gamma()))
      .value;
}

double FpaftModel::hazard(double t, std::span<const double> x, const Eigen::VectorXd& theta) const {
  check_theta(theta);
  const auto tt = time_transform(*this, t, x, theta);
  const double u = std::log(t) + tt.log_phi;
  const auto s =
      baseline_.evaluate(u, std::span<const double>(theta.data() + gamma_offset(), n_gamma()));
  return std::exp(s.value) * s.d1 * tt.bracket / t;
}

double FpaftModel::row_loglik(const SurvivalDataset& data, std::size_t i,
                              const Eigen::VectorXd& theta) const {
  const auto x = data.covariates(i);
  const auto gamma = std::span<const double>(theta.data() + gamma_offset(), n_gamma());
  const double log_y = std::log(data.exit(i));
  const auto tt = time_transform(*this, data.exit(i), x, theta);
  const auto s = baseline_.evaluate(log_y + tt.log_phi, gamma);
  double ll = -std::exp(s.value);
  if (data.event(i)) {
    if (!(s.d1 > 0.0) || !(tt.bracket > 0.0)) return kNegInf;
    ll += s.value + std::log(s.d1) - log_y + std::log(tt.bracket);
  }
  if (data.entry(i) > 0.0) {
    const auto tt0 = time_transform(*this, data.entry(i), x, theta);
    ll += std::exp(baseline_.evaluate(std::log(data.entry(i)) + tt0.log_phi, gamma).value);
  }
  return std::isfinite(ll) ? ll : kNegInf;
}

bool FpaftModel::row_score(const SurvivalDataset& data, std::size_t i,
                           const Eigen::VectorXd& theta, std::span<double> out) const {
  const std::size_t p = n_covariates();
  const std::size_t g0 = gamma_offset();
  const std::size_t m = baseline_.df();
  const auto x = data.covariates(i);
  const auto gamma = std::span<const double>(theta.data() + g0, m + 1);
  const double d = data.event(i);

  BasisBuffer v{}, v1{}, tv{}, tv1{};
  auto evaluate_point = [&](double t) {
    PointEval pe;
    const auto tt = time_transform(*this, t, x, theta);
    pe.u = std::log(t) + tt.log_phi;
    pe.bracket = tt.bracket;
    pe.s = baseline_.evaluate(pe.u, gamma);
    return pe;
  };

  // exit time
  const auto py = evaluate_point(data.exit(i));
  const double h = std::exp(py.s.value);
  if (!std::isfinite(h)) return false;
  if (d > 0.0 && (!(py.s.d1 > 0.0) || !(py.bracket > 0.0))) return false;
  // coefficient of du/dtheta in the row log-likelihood
  const double du_coef = d > 0.0 ? py.s.d1 + py.s.d2 / py.s.d1 - h * py.s.d1 : -h * py.s.d1;

  baseline_.basis(py.u, std::span<double>(v.data(), m));
  out[g0] = d - h;
  if (d > 0.0) {
    baseline_.basis_derivative(py.u, std::span<double>(v1.data(), m));
    for (std::size_t j = 0; j < m; ++j) out[g0 + 1 + j] = d * (v[j] + v1[j] / py.s.d1) - h * v[j];
  } else {
    for (std::size_t j = 0; j < m; ++j) out[g0 + 1 + j] = -h * v[j];
  }
  for (std::size_t k = 0; k < p; ++k) out[k] = -x[k] * du_coef;

  const double log_y = std::log(data.exit(i));
  for (std::size_t q = 0; q < tde_.size(); ++q) {
    const auto& term = tde_[q];
    const double xp = x[term.covariate];
    if (xp == 0.0) continue;
    const std::size_t mq = term.knots.df();
    term.knots.basis(log_y, std::span<double>(tv.data(), mq));
    term.knots.basis_derivative(log_y, std::span<double>(tv1.data(), mq));
    for (std::size_t j = 0; j < mq; ++j) {
      double g = -xp * tv[j] * du_coef;
      if (d > 0.0) g -= d * xp * tv1[j] / py.bracket;
      out[tde_offsets_[q] + j] = g;
    }
  }

  // delayed entry: + exp(s(u0))
  if (data.entry(i) > 0.0) {
    const auto p0 = evaluate_point(data.entry(i));
    const double h0 = std::exp(p0.s.value);
    if (!std::isfinite(h0)) return false;
    const double du0_coef = h0 * p0.s.d1;
    baseline_.basis(p0.u, std::span<double>(v.data(), m));
    out[g0] += h0;
    for (std::size_t j = 0; j < m; ++j) out[g0 + 1 + j] += h0 * v[j];
    for (std::size_t k = 0; k < p; ++k) out[k] -= x[k] * du0_coef;
    const double log_t0 = std::log(data.entry(i));
    for (std::size_t q = 0; q < tde_.size(); ++q) {
      const auto& term = tde_[q];
      const double xp = x[term.covariate];
      if (xp == 0.0) continue;
      const std::size_t mq = term.knots.df();
      term.knots.basis(log_t0, std::span<double>(tv.data(), mq));
      for (std::size_t j = 0; j < mq; ++j) out[tde_offsets_[q] + j] -= xp * tv[j] * du0_coef;
    }
  }
  return true;
}

Eigen::VectorXd FpaftModel::initial_values(const SurvivalDataset& data) const {
  const auto n = static_cast<Eigen::Index>(n_params());
  const auto g0 = static_cast<Eigen::Index>(gamma_offset());
  const auto m = static_cast<Eigen::Index>(baseline_.df());

  // Weibull-type start: linear in log t with the Nelson-Aalen slope.
  const auto [intercept, slope] = weibull_start(data);
  Eigen::VectorXd weibull = Eigen::VectorXd::Zero(n);
  weibull[g0] = intercept;
  weibull[g0 + 1] = slope;
  if (m == 1) return weibull;

  // Least squares of log Nelson-Aalen on the spline basis at the event times.
  const auto na = nelson_aalen(data);
  std::vector<double> u, target;
  for (std::size_t k = 0; k < na.times.size(); ++k) {
    if (na.values[k] <= 0.0) continue;
    u.push_back(std::log(na.times[k]));
    target.push_back(std::log(na.values[k]));
  }
  if (static_cast<Eigen::Index>(u.size()) <= m + 1) return weibull;
  Eigen::MatrixXd design(static_cast<Eigen::Index>(u.size()), m + 1);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(u.size()));
  BasisBuffer v{};
  for (std::size_t r = 0; r < u.size(); ++r) {
    baseline_.basis(u[r], std::span<double>(v.data(), static_cast<std::size_t>(m)));
    const auto row = static_cast<Eigen::Index>(r);
    design(row, 0) = 1.0;
    for (Eigen::Index j = 0; j < m; ++j) design(row, j + 1) = v[static_cast<std::size_t>(j)];
    rhs[row] = target[r];
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
  theta.segment(g0, m + 1) = coef;
  if (coef.allFinite() && std::isfinite(loglik(data, theta))) return theta;
  return weibull;
}

std::pair<FpaftModel, Eigen::VectorXd> FpaftModel::reknotted(const SurvivalDataset& data,
                                                             const Eigen::VectorXd& theta) const {
  check_theta(theta);
  std::vector<double> u, s_old;
  const auto gamma = std::span<const double>(theta.data() + gamma_offset(), n_gamma());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!data.event(i)) continue;
    const auto tt = time_transform(*this, data.exit(i), data.covariates(i), theta);
    u.push_back(std::log(data.exit(i)) + tt.log_phi);
    s_old.push_back(baseline_.evaluate(u.back(), gamma).value);
  }
  KnotVector knots = make_knots(u, static_cast<int>(baseline_.df()));
  ModelSpec spec2 = spec();
  spec2.df = static_cast<int>(knots.df());
  const auto m = static_cast<Eigen::Index>(knots.df());
  Eigen::MatrixXd design(static_cast<Eigen::Index>(u.size()), m + 1);
  BasisBuffer v{};
  for (std::size_t r = 0; r < u.size(); ++r) {
    knots.basis(u[r], std::span<double>(v.data(), static_cast<std::size_t>(m)));
    design(static_cast<Eigen::Index>(r), 0) = 1.0;
    for (Eigen::Index j = 0; j < m; ++j)
      design(static_cast<Eigen::Index>(r), j + 1) = v[static_cast<std::size_t>(j)];
  }
  const Eigen::VectorXd coef =
      design.colPivHouseholderQr().solve(Eigen::Map<const Eigen::VectorXd>(s_old.data(),
                                                                            static_cast<Eigen::Index>(s_old.size())));
  FpaftModel model(std::move(spec2), std::move(knots), tde_);
  Eigen::VectorXd theta2(static_cast<Eigen::Index>(model.n_params()));
  const auto p = static_cast<Eigen::Index>(n_covariates());
  theta2.head(p) = theta.head(p);
  theta2.segment(p, m + 1) = coef;
  const auto tail = static_cast<Eigen::Index>(n_params() - gamma_offset() - n_gamma());
  theta2.tail(tail) = theta.tail(tail);
  return {std::move(model), std::move(theta2)};
}

}  // namespace fpaft
