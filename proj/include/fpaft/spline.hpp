#pragma once

#include <span>
#include <vector>

namespace fpaft {

/// Value and first two derivatives of a spline at a point.
struct SplineValue {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Knots of a restricted cubic spline in truncated power form.
///
/// The basis has one linear term v1(u) = u plus one term per interior knot kj:
///
///   vj(u) = (u - kj)^3_+ - lj (u - kmin)^3_+ - (1 - lj) (u - kmax)^3_+,
///   lj    = (kmax - kj) / (kmax - kmin),
///
/// so the spline is linear below kmin and above kmax. `df()` counts basis functions
/// excluding the intercept, i.e. knots - 1.
class KnotVector {
 public:
  /// Throws DataError unless `knots` is strictly increasing with at least two entries.
  explicit KnotVector(std::vector<double> knots);

  const std::vector<double>& knots() const { return knots_; }
  std::vector<double> interior() const;
  const std::vector<double>& lambdas() const { return lambdas_; }
  double lower() const { return knots_.front(); }
  double upper() const { return knots_.back(); }
  std::size_t df() const { return knots_.size() - 1; }

  /// Writes v1..v_df at u into `out` (size df()).
  void basis(double u, std::span<double> out) const;
  void basis_derivative(double u, std::span<double> out) const;
  void basis_second_derivative(double u, std::span<double> out) const;

  std::vector<double> basis(double u) const;
  std::vector<double> basis_derivative(double u) const;

  /// s(u) = g0 + sum_j gj vj(u) with its first two derivatives in u.
  /// `coeffs` has size df() + 1 (intercept first).
  SplineValue evaluate(double u, std::span<const double> coeffs) const;

  /// Same as evaluate() for a spline without an intercept: `coeffs` has size df().
  SplineValue evaluate_no_intercept(double u, std::span<const double> coeffs) const;

  bool operator==(const KnotVector& other) const { return knots_ == other.knots_; }

 private:
  std::vector<double> knots_;
  std::vector<double> lambdas_;  // one per interior knot
};

/// s(u | coeffs, knots); coeffs includes the intercept.
double eval(double u, std::span<const double> coeffs, const KnotVector& knots);

/// Order-statistic quantile with linear interpolation between neighbours
/// (h = (n - 1) p on the sorted sample). `sorted` must be sorted ascending.
double quantile_sorted(std::span<const double> sorted, double p);

/// Knots at the min, max and df - 1 equally spaced quantiles of `values`.
///
/// Throws DegenerateKnotsError if `values` has fewer than df + 1 distinct entries.
/// Coinciding quantiles (heavy ties) are collapsed with a warning, so the returned
/// vector can have a smaller df than requested.
KnotVector make_knots(std::span<const double> values, int df);

}  // namespace fpaft
