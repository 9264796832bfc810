#include <doctest.h>

#include <cmath>
#include <random>

#include "fpaft/tde.hpp"
#include "oracles.hpp"

using namespace fpaft;

namespace {

// One covariate "x" with a time-dependent effect of `tde_df` spline terms.
FpaftModel tde_model(int df, std::vector<double> base_knots, std::vector<double> tde_knots) {
  const int tde_df = static_cast<int>(tde_knots.size()) - 1;
  ModelSpec spec{Family::fpaft, df, {"x"}, {{"x", tde_df}}};
  return FpaftModel(spec, KnotVector(std::move(base_knots)), {{0, KnotVector(std::move(tde_knots))}});
}

FpaftModel fixed_model(int df, std::vector<double> base_knots) {
  return FpaftModel({Family::fpaft, df, {"x"}, {}}, KnotVector(std::move(base_knots)), {});
}

const std::vector<double> kOne{1.0};
const std::vector<double> kZero{0.0};

}  // namespace

TEST_CASE("linear tde term: phi = t^-c") {
  // baseline exponential (gamma = (0, 1)), beta = 0, tde spline c log t
  const auto m = tde_model(1, {-1, 1}, {-1, 1});
  const double c = 0.5;
  Eigen::VectorXd th(4);
  th << 0.0, 0.0, 1.0, c;
  for (const double t : {0.3, 1.0, 4.0}) {
    CHECK(phi_t(m, kOne, t, th) == doctest::Approx(std::pow(t, -c)));
    CHECK(dphi_dt(m, kOne, t, th) == doctest::Approx(-c * std::pow(t, -c - 1)));
    CHECK(phi_t(m, kZero, t, th) == 1.0);
  }
  CHECK(eta(m, kOne, 4.0, th) == doctest::Approx(0.25));

  // single subject y = 2, d = 1: H = t^(1-c), h = (1-c) t^-c
  const SurvivalDataset d({0.0}, {2.0}, {1}, RowMatrix::Ones(1, 1), {"x"});
  const double expected = std::log(1 - c) - c * std::log(2.0) - std::pow(2.0, 1 - c);
  CHECK(tde_loglik(m, d, th) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(m.loglik(d, th, Execution::serial_reference) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(tde_hazard(m, 2.0, kOne, th) == doctest::Approx((1 - c) * std::pow(2.0, -c)));
}

TEST_CASE("zero tde coefficients reduce exactly to the time-fixed model") {
  const std::vector<double> base{-1.0, 0.0, 0.6, 1.5};
  const auto m = tde_model(3, base, {-1.0, 0.3, 1.5});
  const auto f = fixed_model(3, base);
  Eigen::VectorXd th(7), tf(5);
  tf << 0.4, -1.0, 1.2, 0.05, -0.02;
  th << tf, 0.0, 0.0;
  oracle::SimOptions o;
  o.n = 200;
  o.delayed_entry = true;
  auto data = oracle::simulate_weibull({0.8, 1.2, {0.4}}, o, 3).select({"x1"});
  data = SurvivalDataset(data.entries(), data.exits(), data.events(), data.covariate_matrix(), {"x"});
  for (const double t : {0.1, 0.9, 2.0, 5.0})
    for (const auto& x : {kZero, kOne}) {
      const double phi = std::exp(-x[0] * 0.4);
      CHECK(phi_t(m, x, t, th) == phi);
      CHECK(dphi_dt(m, x, t, th) == 0.0);
      CHECK(eta(m, x, t, th) == phi);
      CHECK(tde_hazard(m, t, x, th) == f.hazard(t, x, tf));
      CHECK(tde_survival(m, t, x, th) == f.survival(t, x, tf));
    }
  CHECK(tde_loglik(m, data, th) == f.loglik(data, tf));
  CHECK(m.loglik(data, th, Execution::serial_reference) == f.loglik(data, tf, Execution::serial_reference));
}

TEST_CASE("integral identity t phi(t) = int_0^t eta") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto m = tde_model(2, {-2.0, 0.0, 1.5}, {-1.5, 0.2, 1.0});
  for (int rep = 0; rep < 30; ++rep) {
    Eigen::VectorXd th(6);
    th << u(rng), u(rng), 1.0 + 0.3 * u(rng), 0.1 * u(rng), 0.3 * u(rng), 0.1 * u(rng);
    const double t = std::exp(1.5 * u(rng));
    const double x = 0.5 + std::abs(u(rng));
    const std::vector<double> xv{x};
    const double lhs = t * phi_t(m, xv, t, th);
    const double rhs = oracle::integrate_endpoint([&](double s) { return eta(m, xv, s, th); }, 0.0, t);
    CHECK_MESSAGE(oracle::rel_error(rhs, lhs) < 1e-6, "rep " << rep);
  }
}

TEST_CASE("tde hazard is the derivative of the cumulative hazard") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto m = tde_model(3, {-2.0, -0.5, 0.4, 1.5}, {-1.5, 0.2, 1.0});
  for (int rep = 0; rep < 30; ++rep) {
    Eigen::VectorXd th(7);
    th << u(rng), -0.5 + 0.2 * u(rng), 1.0 + 0.2 * u(rng), 0.03 * u(rng), 0.03 * u(rng), 0.2 * u(rng),
        0.05 * u(rng);
    const double t = std::exp(u(rng));
    const std::vector<double> xv{rep % 3 ? 1.0 : 0.0};
    const auto H = [&](double s) { return -std::log(tde_survival(m, s, xv, th)); };
    const double h = tde_hazard(m, t, xv, th);
    if (h <= 0) continue;
    CHECK(oracle::rel_error(h, oracle::derivative(H, t, 1e-4 * t)) < 1e-5);
    // survival = exp(-int_0^t h)
    const double integral = oracle::integrate_endpoint([&](double s) { return tde_hazard(m, s, xv, th); }, 0.0, t);
    CHECK(oracle::rel_error(tde_survival(m, t, xv, th), std::exp(-integral)) < 1e-6);
  }
}

TEST_CASE("x = 0 gives the baseline hazard and survival tends to one at zero") {
  const auto m = tde_model(2, {-2.0, 0.0, 1.5}, {-1.5, 0.2, 1.0});
  Eigen::VectorXd th(6);
  th << 0.3, -0.2, 1.1, 0.02, 0.4, -0.1;
  const auto& k = m.baseline_knots();
  const std::vector<double> g{-0.2, 1.1, 0.02};
  for (const double t : {0.2, 1.0, 3.0}) {
    const auto s = k.evaluate(std::log(t), g);
    CHECK(tde_hazard(m, t, kZero, th) == doctest::Approx(std::exp(s.value) * s.d1 / t).epsilon(1e-13));
  }
  CHECK(tde_survival(m, 1e-30, kOne, th) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("log instantaneous AF is -beta for time-fixed effects") {
  const auto f = fixed_model(2, {-1.0, 0.0, 1.0});
  Eigen::VectorXd th(4);
  th << 0.37, 0.0, 1.0, 0.0;
  for (const double t : {0.5, 2.0}) CHECK(log_instantaneous_af(f, 0, t, th) == doctest::Approx(-0.37));
}
