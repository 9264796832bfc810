#include "fpaft/kernels.hpp"

namespace fpaft {

double ordered_sum(std::span<const double> terms) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : terms) {
    if (!std::isfinite(x)) return x == -std::numeric_limits<double>::infinity()
                                      ? x
                                      : std::numeric_limits<double>::quiet_NaN();
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace fpaft
