#include <doctest.h>

#include <cmath>

#include "fpaft/dataset.hpp"
#include "fpaft/error.hpp"
#include "oracles.hpp"
#include "tempdir.hpp"

using namespace fpaft;
using testing_support::TempDir;

namespace {

SurvivalDataset no_covariates(std::vector<double> y, std::vector<int> d) {
  return SurvivalDataset::without_entry(std::move(y), std::move(d), RowMatrix(static_cast<Eigen::Index>(d.size()), 0), {});
}

}  // namespace

TEST_CASE("read_csv maps columns and defaults entry to zero") {
  TempDir tmp;
  const auto p = tmp.write("d.csv", "time,died,x\n1.5,1,0\n2,0,1\n3.25,1,0.5\n");
  ColumnMapping m;
  m.time = "time";
  m.event = "died";
  m.covariates = {"x"};
  const auto d = read_csv(p, m);
  REQUIRE(d.size() == 3);
  CHECK(d.entry(0) == 0.0);
  CHECK(d.exit(2) == 3.25);
  CHECK(d.event(1) == 0);
  CHECK(d.covariates(2)[0] == 0.5);
  CHECK(d.n_events() == 2);
  CHECK_FALSE(d.has_delayed_entry());
}

TEST_CASE("read_csv reports the offending row and column") {
  TempDir tmp;
  ColumnMapping m;
  m.entry = "t0";
  const auto check_message = [&](const std::string& body, const std::string& needle) {
    const auto p = tmp.write("bad.csv", "t0,time,event\n" + body);
    try {
      (void)read_csv(p, m);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  check_message("0,1,1\n0,0,1\n", "row 2");      // y = 0
  check_message("0,1,1\n2,1,0\n", "row 2");      // t0 > y
  check_message("0,1,1\n0,abc,1\n", "time");     // parse failure names the column
  check_message("0,1,2\n", "row 1");             // event not 0/1
  ColumnMapping missing;
  missing.covariates = {"nope"};
  CHECK_THROWS_AS(read_csv(tmp.write("ok.csv", "time,event\n1,1\n"), missing), DataError);
}

TEST_CASE("write_csv round-trips exactly") {
  TempDir tmp;
  RowMatrix x(3, 2);
  x << 0.1, 1.0 / 3, 2.0, -7e-12, 1e300, 0.0;
  const SurvivalDataset d({0.0, 0.5, 1.0 / 7}, {1.0 / 3, 2.0, 3.0}, {1, 0, 1}, x, {"a", "b"});
  write_csv(tmp / "rt.csv", d);
  ColumnMapping m;
  m.entry = "entry";
  m.covariates = {"a", "b"};
  const auto r = read_csv(tmp / "rt.csv", m);
  CHECK(r.entries() == d.entries());
  CHECK(r.exits() == d.exits());
  CHECK(r.events() == d.events());
  CHECK(r.covariate_matrix() == d.covariate_matrix());
  CHECK(r.checksum() == d.checksum());
}

TEST_CASE("select reorders covariates and checksum tracks content") {
  RowMatrix x(2, 2);
  x << 1, 2, 3, 4;
  const SurvivalDataset d({0, 0}, {1, 2}, {1, 1}, x, {"a", "b"});
  const auto s = d.select({"b"});
  CHECK(s.covariate_names() == std::vector<std::string>{"b"});
  CHECK(s.covariates(1)[0] == 4);
  CHECK_THROWS_AS(d.select({"c"}), DataError);
  CHECK(d.checksum() != s.checksum());
}

TEST_CASE("Kaplan-Meier hand values") {
  const auto one = kaplan_meier(no_covariates({1.0}, {1}));
  CHECK(one.at(0.5) == 1.0);
  CHECK(one.at(1.0) == 0.0);
  CHECK(one.at(10.0) == 0.0);

  const auto none = kaplan_meier(no_covariates({1, 2, 3}, {0, 0, 0}));
  CHECK(none.at(0.5) == 1.0);
  CHECK(none.at(5.0) == 1.0);

  const auto four = kaplan_meier(no_covariates({1, 2, 1.5, 3}, {1, 1, 0, 0}));
  CHECK(four.at(0.99) == 1.0);
  CHECK(four.at(1.0) == doctest::Approx(0.75));
  CHECK(four.at(1.99) == doctest::Approx(0.75));
  CHECK(four.at(2.0) == doctest::Approx(0.375));
  CHECK(four.at(100.0) == doctest::Approx(0.375));
}

TEST_CASE("Nelson-Aalen hand values") {
  CHECK(nelson_aalen(no_covariates({1.0}, {1})).at(1.0) == 1.0);
  CHECK(nelson_aalen(no_covariates({1, 2}, {0, 0})).at(5.0) == 0.0);
  const auto four = nelson_aalen(no_covariates({1, 2, 1.5, 3}, {1, 1, 0, 0}));
  CHECK(four.at(2.0) == doctest::Approx(0.75));
}

TEST_CASE("ties: events precede censorings") {
  // event and censoring at t = 1: both at risk, so S(1) = 1 - 1/2
  const auto km = kaplan_meier(no_covariates({1, 1}, {1, 0}));
  CHECK(km.at(1.0) == doctest::Approx(0.5));
}

TEST_CASE("delayed entry shrinks early risk sets") {
  // subject 2 enters at 1.5 so is not at risk at t = 1
  const SurvivalDataset d({0.0, 1.5}, {1.0, 2.0}, {1, 1}, RowMatrix(2, 0), {});
  const auto km = kaplan_meier(d);
  REQUIRE(km.n_risk.size() == 2);
  CHECK(km.n_risk[0] == 1);
  CHECK(km.n_risk[1] == 1);
}

TEST_CASE("exp(-Nelson-Aalen) >= Kaplan-Meier on random data") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    oracle::SimOptions o;
    o.n = 300;
    o.delayed_entry = seed % 2 == 0;
    const auto d = oracle::simulate_weibull({1.0, 1.3, {0.4}}, o, seed);
    const auto km = kaplan_meier(d);
    const auto na = nelson_aalen(d);
    for (std::size_t k = 0; k < km.times.size(); ++k) {
      CHECK(std::exp(-na.values[k]) >= km.values[k] - 1e-15);
      if (k) CHECK(km.values[k] <= km.values[k - 1]);
    }
  }
}
