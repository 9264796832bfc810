#include "fpaft/spline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "fpaft/error.hpp"

namespace fpaft {

namespace {

inline double pos(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

KnotVector::KnotVector(std::vector<double> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw DataError("knot vector needs at least two knots");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i])) throw DataError("knot vector contains a non-finite value");
    if (i > 0 && !(knots_[i] > knots_[i - 1]))
      throw DataError("knot vector must be strictly increasing");
  }
  const double range = upper() - lower();
  lambdas_.reserve(knots_.size() - 2);
  for (std::size_t j = 1; j + 1 < knots_.size(); ++j)
    lambdas_.push_back((upper() - knots_[j]) / range);
}

std::vector<double> KnotVector::interior() const {
  return {knots_.begin() + 1, knots_.end() - 1};
}

void KnotVector::basis(double u, std::span<double> out) const {
  out[0] = u;
  const double lo = pos(u - lower());
  const double hi = pos(u - upper());
  const double lo3 = lo * lo * lo;
  const double hi3 = hi * hi * hi;
  for (std::size_t j = 0; j < lambdas_.size(); ++j) {
    const double a = pos(u - knots_[j + 1]);
    out[j + 1] = a * a * a - lambdas_[j] * lo3 - (1.0 - lambdas_[j]) * hi3;
  }
}

void KnotVector::basis_derivative(double u, std::span<double> out) const {
  out[0] = 1.0;
  const double lo = pos(u - lower());
  const double hi = pos(u - upper());
  for (std::size_t j = 0; j < lambdas_.size(); ++j) {
    const double a = pos(u - knots_[j + 1]);
    out[j + 1] = 3.0 * (a * a - lambdas_[j] * lo * lo - (1.0 - lambdas_[j]) * hi * hi);
  }
}

void KnotVector::basis_second_derivative(double u, std::span<double> out) const {
  out[0] = 0.0;
  const double lo = pos(u - lower());
  const double hi = pos(u - upper());
  for (std::size_t j = 0; j < lambdas_.size(); ++j) {
    const double a = pos(u - knots_[j + 1]);
    out[j + 1] = 6.0 * (a - lambdas_[j] * lo - (1.0 - lambdas_[j]) * hi);
  }
}

std::vector<double> KnotVector::basis(double u) const {
  std::vector<double> out(df());
  basis(u, out);
  return out;
}

std::vector<double> KnotVector::basis_derivative(double u) const {
  std::vector<double> out(df());
  basis_derivative(u, out);
  return out;
}

SplineValue KnotVector::evaluate_no_intercept(double u, std::span<const double> coeffs) const {
  SplineValue s{coeffs[0] * u, coeffs[0], 0.0};
  const double lo = pos(u - lower());
  const double hi = pos(u - upper());
  for (std::size_t j = 0; j < lambdas_.size(); ++j) {
    const double g = coeffs[j + 1];
    if (g == 0.0) continue;
    const double a = pos(u - knots_[j + 1]);
    const double l = lambdas_[j];
    s.value += g * (a * a * a - l * lo * lo * lo - (1.0 - l) * hi * hi * hi);
    s.d1 += g * 3.0 * (a * a - l * lo * lo - (1.0 - l) * hi * hi);
    s.d2 += g * 6.0 * (a - l * lo - (1.0 - l) * hi);
  }
  return s;
}

SplineValue KnotVector::evaluate(double u, std::span<const double> coeffs) const {
  SplineValue s = evaluate_no_intercept(u, coeffs.subspan(1));
  s.value += coeffs[0];
  return s;
}

double eval(double u, std::span<const double> coeffs, const KnotVector& knots) {
  return knots.evaluate(u, coeffs).value;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DataError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

KnotVector make_knots(std::span<const double> values, int df) {
  if (df < 1) throw DataError(fmt::format("df must be >= 1 (got {})", df));
  if (values.empty()) throw DegenerateKnotsError("cannot place knots on an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> uniq(sorted);
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  if (uniq.size() < static_cast<std::size_t>(df) + 1)
    throw DegenerateKnotsError(fmt::format(
        "df={} needs at least {} distinct values, found {}", df, df + 1, uniq.size()));

  std::vector<double> knots;
  knots.reserve(static_cast<std::size_t>(df) + 1);
  knots.push_back(sorted.front());
  for (int i = 1; i < df; ++i)
    knots.push_back(quantile_sorted(sorted, static_cast<double>(i) / df));
  knots.push_back(sorted.back());

  const std::size_t requested = knots.size();
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  if (knots.size() < requested)
    warn(fmt::format("tied quantiles: df reduced from {} to {}", df, knots.size() - 1));
  return KnotVector(std::move(knots));
}

}  // namespace fpaft
