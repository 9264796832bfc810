#include <doctest.h>

#include <random>

#include "fpaft/error.hpp"
#include "fpaft/spline.hpp"
#include "oracles.hpp"

using namespace fpaft;

TEST_CASE("make_knots places boundary and quantile knots") {
  const std::vector<double> v{0, 1, 2, 3, 4};
  CHECK(make_knots(v, 1).knots() == std::vector<double>{0, 4});
  CHECK(make_knots(v, 2).knots() == std::vector<double>{0, 2, 4});

  std::vector<double> grid;
  for (int i = 0; i < 999; ++i) grid.push_back(i / 998.0);
  const auto k = make_knots(grid, 3);
  REQUIRE(k.knots().size() == 4);
  CHECK(k.knots()[1] == doctest::Approx(1.0 / 3).epsilon(1e-3));
  CHECK(k.knots()[2] == doctest::Approx(2.0 / 3).epsilon(1e-3));
  CHECK(make_knots(v, 1).df() == 1);
}

TEST_CASE("make_knots rejects too few distinct values and collapses ties") {
  CHECK_THROWS_AS(make_knots(std::vector<double>{1, 1, 1}, 2), DegenerateKnotsError);
  CHECK_THROWS_AS(make_knots(std::vector<double>{1, 2}, 2), DegenerateKnotsError);

  int warnings = 0;
  const auto previous = set_warning_handler([&](const std::string&) { ++warnings; });
  // 4 distinct values, heavily tied: the 1/3 and 2/3 quantiles coincide
  std::vector<double> tied(100, 1.0);
  tied.front() = 0.0;
  tied[98] = 2.0;
  tied.back() = 3.0;
  const auto k = make_knots(tied, 3);
  set_warning_handler(previous);
  CHECK(k.df() < 3);
  CHECK(warnings == 1);
}

TEST_CASE("KnotVector validates") {
  CHECK_THROWS_AS(KnotVector({1.0}), DataError);
  CHECK_THROWS_AS(KnotVector({1.0, 1.0}), DataError);
  CHECK_THROWS_AS(KnotVector({2.0, 1.0}), DataError);
  const KnotVector k({0, 1, 3});
  REQUIRE(k.lambdas().size() == 1);
  CHECK(k.lambdas()[0] == doctest::Approx(2.0 / 3));
}

TEST_CASE("basis hand values") {
  const KnotVector k({0, 1, 2});
  const auto b = k.basis(1.5);
  REQUIRE(b.size() == 2);
  CHECK(b[0] == 1.5);
  CHECK(b[1] == doctest::Approx(-1.5625));
  CHECK(k.basis(0.0) == std::vector<double>{0, 0});
  const auto below = KnotVector({0, 1, 2, 5}).basis(-3.0);
  CHECK(below == std::vector<double>{-3, 0, 0});
  CHECK(KnotVector({0, 1, 2, 5}).basis_derivative(-1.0) == std::vector<double>{1, 0, 0});
}

TEST_CASE("basis matches the written-out definition and its derivatives match finite differences") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> knots;
    for (int j = 0; j < 2 + trial % 5; ++j) knots.push_back(unif(rng));
    std::sort(knots.begin(), knots.end());
    const KnotVector k(knots);
    for (int rep = 0; rep < 100; ++rep) {
      const double u = 1.5 * unif(rng);
      const auto b = k.basis(u);
      const auto d = k.basis_derivative(u);
      std::vector<double> d2(k.df());
      k.basis_second_derivative(u, d2);
      CHECK(b[0] == u);
      for (std::size_t j = 1; j < k.df(); ++j) {
        CHECK(b[j] == doctest::Approx(oracle::rcs_term(u, knots[j], knots.front(), knots.back())));
        const auto component = [&](double v) { return k.basis(v)[j]; };
        const auto slope = [&](double v) { return k.basis_derivative(v)[j]; };
        const double fd = oracle::derivative(component, u, 1e-4);
        CHECK(std::abs(d[j] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
        const double fd2 = oracle::derivative(slope, u, 1e-4);
        CHECK(std::abs(d2[j] - fd2) <= 1e-6 * std::max(1.0, std::abs(fd2)));
      }
    }
  }
}

TEST_CASE("restricted spline is linear outside the boundary knots and continuous at knots") {
  const KnotVector k({-1.0, 0.2, 0.7, 2.0});
  const std::vector<double> g{0.3, 1.1, -0.4, 0.9};
  const auto s = [&](double u) { return eval(u, g, k); };
  for (const double u : {-6.0, -4.0, -2.5, 3.0, 5.0, 8.0}) {
    const double second = s(u + 1) - 2 * s(u) + s(u - 1);
    CHECK(std::abs(second) < 1e-9);
  }
  for (const double kj : k.knots()) {
    CHECK(std::abs(s(kj - 1e-12) - s(kj + 1e-12)) < 1e-10);
    CHECK(std::abs(k.evaluate(kj - 1e-12, g).d1 - k.evaluate(kj + 1e-12, g).d1) < 1e-10);
  }
  // above kmax the derivative is constant
  CHECK(KnotVector({0, 1, 2}).basis_derivative(2.5) == KnotVector({0, 1, 2}).basis_derivative(7.0));
}

TEST_CASE("eval is a dot product with the basis") {
  const KnotVector k({0.0, 0.5, 1.0, 3.0});
  CHECK(eval(1.7, std::vector<double>{0.4, 2.0, 0.0, 0.0}, k) == doctest::Approx(0.4 + 2.0 * 1.7));
  CHECK(eval(1.7, std::vector<double>{0, 0, 0, 0}, k) == 0.0);
  const std::vector<double> g{0.1, -0.2, 0.3, 0.7};
  const auto b = k.basis(2.2);
  const double dot = g[0] + g[1] * b[0] + g[2] * b[1] + g[3] * b[2];
  CHECK(eval(2.2, g, k) == doctest::Approx(dot).epsilon(1e-14));
  const auto nv = k.evaluate_no_intercept(2.2, std::vector<double>{-0.2, 0.3, 0.7});
  CHECK(nv.value == doctest::Approx(dot - 0.1).epsilon(1e-14));
}

TEST_CASE("quantile_sorted interpolates order statistics") {
  const std::vector<double> v{1, 2, 4, 8};
  CHECK(quantile_sorted(v, 0.0) == 1);
  CHECK(quantile_sorted(v, 1.0) == 8);
  CHECK(quantile_sorted(v, 0.5) == doctest::Approx(3.0));
  CHECK(quantile_sorted(v, 1.0 / 3) == doctest::Approx(2.0));
}
