#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace fpaft {

/// How per-subject contributions are reduced.
///
/// `serial_reference` is the plain left-to-right loop kept as the test oracle.
/// `parallel` evaluates rows with OpenMP into a buffer and then sums the buffer in
/// index order with Neumaier compensation, so the result does not depend on the
/// number of threads.
enum class Execution { serial_reference, parallel };

/// Neumaier-compensated sum in index order. Any -inf term makes the sum -inf.
double ordered_sum(std::span<const double> terms);

/// Sum of row(i) over i in [0, n).
template <class RowFn>
double reduce_rows(std::size_t n, RowFn&& row, Execution exec) {
  if (exec == Execution::serial_reference) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += row(i);
    return total;
  }
  std::vector<double> terms(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) terms[static_cast<std::size_t>(i)] = row(static_cast<std::size_t>(i));
  return ordered_sum(terms);
}

/// Sum of per-row gradient vectors of length k. `row(i, out)` writes row i's gradient
/// into `out` (zeroed on entry) and returns false if the gradient is undefined, in which
/// case the reduction returns an empty vector.
template <class RowFn>
Eigen::VectorXd reduce_row_gradients(std::size_t n, std::size_t k, RowFn&& row, Execution exec) {
  if (exec == Execution::serial_reference) {
    Eigen::VectorXd total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    std::vector<double> g(k);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(g.begin(), g.end(), 0.0);
      if (!row(i, std::span<double>(g))) return {};
      for (std::size_t j = 0; j < k; ++j) total[static_cast<Eigen::Index>(j)] += g[j];
    }
    return total;
  }
  // column-major buffer: one contiguous run of n terms per parameter
  std::vector<double> terms(n * k, 0.0);
  int undefined = 0;
  const auto count = static_cast<long long>(n);
#pragma omp parallel
  {
    std::vector<double> g(k);
#pragma omp for schedule(static) reduction(| : undefined)
    for (long long ii = 0; ii < count; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      std::fill(g.begin(), g.end(), 0.0);
      if (!row(i, std::span<double>(g))) {
        undefined |= 1;
        continue;
      }
      for (std::size_t j = 0; j < k; ++j) terms[j * n + i] = g[j];
    }
  }
  if (undefined) return {};
  Eigen::VectorXd total(static_cast<Eigen::Index>(k));
  for (std::size_t j = 0; j < k; ++j)
    total[static_cast<Eigen::Index>(j)] = ordered_sum(std::span<const double>(terms).subspan(j * n, n));
  return total;
}

}  // namespace fpaft
