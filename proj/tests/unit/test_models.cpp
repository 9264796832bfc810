#include <doctest.h>

#include <cmath>
#include <random>

#include "fpaft/error.hpp"
#include "fpaft/models.hpp"
#include "oracles.hpp"

using namespace fpaft;

namespace {

const std::vector<double> kNone;

SurvivalDataset single(double t0, double y, int d) {
  return SurvivalDataset({t0}, {y}, {d}, RowMatrix(1, 0), {});
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const double x : v) out[i++] = x;
  return out;
}

SurvivalDataset sample(std::uint64_t seed, int n_cov = 2, bool delayed = true, std::size_t n = 300) {
  oracle::SimOptions o;
  o.n = n;
  o.n_covariates = n_cov;
  o.delayed_entry = delayed;
  std::vector<double> beta{0.4, -0.3, 0.2};
  beta.resize(static_cast<std::size_t>(n_cov));
  return oracle::simulate_weibull({0.8, 1.4, beta}, o, seed);
}

// Random points near the starting values where the log-likelihood is finite.
template <class Check>
int at_random_points(const SurvivalModel& model, const SurvivalDataset& data, int wanted,
                     std::uint64_t seed, double spread, Check&& check) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, spread);
  const Eigen::VectorXd start = model.initial_values(data);
  int done = 0;
  for (int attempt = 0; done < wanted && attempt < 50 * wanted; ++attempt) {
    Eigen::VectorXd theta = start;
    for (Eigen::Index j = 0; j < theta.size(); ++j) theta[j] += noise(rng);
    if (!std::isfinite(model.loglik(data, theta, Execution::serial_reference))) continue;
    check(theta);
    ++done;
  }
  return done;
}

void check_score(const SurvivalModel& model, const SurvivalDataset& data, std::uint64_t seed) {
  const int done = at_random_points(model, data, 10, seed, 0.1, [&](const Eigen::VectorXd& theta) {
    const auto ll = [&](const Eigen::VectorXd& t) { return model.loglik(data, t, Execution::serial_reference); };
    const Eigen::VectorXd fd = oracle::gradient(ll, theta, oracle::kScoreStep);
    const Eigen::VectorXd sc = model.score(data, theta, Execution::serial_reference);
    CHECK_MESSAGE(oracle::scaled_error(sc, fd) < 1e-6, model.spec().label());
  });
  CHECK(done == 10);
}

}  // namespace

TEST_CASE("acceleration factor") {
  CHECK(acceleration_factor(std::vector<double>{0.0}, std::vector<double>{3.0}) == 1.0);
  CHECK(acceleration_factor(std::vector<double>{1.0}, std::vector<double>{0.5}) ==
        doctest::Approx(0.6065306597));
  CHECK(acceleration_factor(std::vector<double>{1.0, 2.0}, std::vector<double>{0.1, -0.2}) ==
        doctest::Approx(1.3498588076));
}

TEST_CASE("ModelSpec parsing and validation") {
  CHECK(ModelSpec::parse("fpaft:4").df == 4);
  CHECK(ModelSpec::parse("weibull").family == Family::weibull);
  CHECK(ModelSpec::parse("gengamma").label() == "Gamma");
  CHECK_THROWS_AS(ModelSpec::parse("weibull:2"), DataError);
  CHECK_THROWS_AS(ModelSpec::parse("cox"), DataError);
  CHECK_THROWS_AS(ModelSpec::parse("fpaft:0"), DataError);
  ModelSpec bad{Family::weibull, 1, {"x"}, {{"x", 2}}};
  CHECK_THROWS_AS(bad.validate(), DataError);
  ModelSpec missing{Family::fpaft, 2, {"x"}, {{"z", 2}}};
  CHECK_THROWS_AS(missing.validate(), DataError);
}

TEST_CASE("FPAFT hand values") {
  const ModelSpec spec{Family::fpaft, 1, {}, {}};
  const FpaftModel m(spec, KnotVector({0.0, 1.0}), {});
  const auto expo = vec({0.0, 1.0});  // log H = log t
  CHECK(m.log_cum_hazard(2.0, kNone, expo) == doctest::Approx(std::log(2.0)));
  CHECK(m.hazard(0.3, kNone, expo) == doctest::Approx(1.0));
  CHECK(m.hazard(7.0, kNone, expo) == doctest::Approx(1.0));
  const auto shape2 = vec({0.0, 2.0});  // H = t^2, h = 2t
  CHECK(m.hazard(1.7, kNone, shape2) == doctest::Approx(3.4));

  // rate-1 exponential: log f(2) = -2 (s - log y cancels since s = log y)
  CHECK(m.row_loglik(single(0, 2, 1), 0, expo) == doctest::Approx(-2.0));
  CHECK(m.row_loglik(single(0, 2, 0), 0, expo) == doctest::Approx(-2.0));
  CHECK(m.row_loglik(single(1, 2, 1), 0, expo) == doctest::Approx(-1.0));
  // s' < 0 at an event: sentinel
  CHECK(m.row_loglik(single(0, 2, 1), 0, vec({0.0, -1.0})) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("FPAFT log H equals the spline at log(t phi)") {
  const auto data = sample(3);
  const ModelSpec spec{Family::fpaft, 4, {"x1", "x2"}, {}};
  const auto m = FpaftModel::from_data(spec, data);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> z;
  Eigen::VectorXd theta = m.initial_values(data);
  for (Eigen::Index j = 0; j < theta.size(); ++j) theta[j] += 0.1 * z(rng);
  for (const double t : {0.05, 0.4, 1.0, 2.5, 9.0}) {
    const std::vector<double> x{1.0, -0.7};
    const double u = std::log(t) - (x[0] * theta[0] + x[1] * theta[1]);
    const std::vector<double> g(theta.data() + 2, theta.data() + theta.size());
    CHECK(m.log_cum_hazard(t, x, theta) == doctest::Approx(eval(u, g, m.baseline_knots())).epsilon(1e-13));
    // AFT identity S(t|x) = S0(t phi(x))
    const double phi = std::exp(-(x[0] * theta[0] + x[1] * theta[1]));
    CHECK(m.survival(t, x, theta) ==
          doctest::Approx(m.survival(t * phi, std::vector<double>{0.0, 0.0}, theta)).epsilon(1e-13));
    CHECK(m.survival(t, x, theta) == doctest::Approx(std::exp(-m.cum_hazard(t, x, theta))).epsilon(1e-15));
    // hazard = dH/dt
    const auto H = [&](double s) { return m.cum_hazard(s, x, theta); };
    CHECK(oracle::rel_error(m.hazard(t, x, theta), oracle::derivative(H, t, 1e-4 * t)) < 1e-5);
  }
}

TEST_CASE("Weibull hand values") {
  const ModelSpec spec{Family::weibull, 1, {"x"}, {}};
  const WeibullModel w(spec);
  const auto theta = vec({0.0, 0.0, 0.0});
  for (const double t : {0.2, 1.0, 3.0})
    CHECK(w.survival(t, std::vector<double>{1.0}, theta) == doctest::Approx(std::exp(-t)));
  // lambda = 1, gamma = 2, beta = 0.5, x = 1, t = 1: H = exp(-0.5)^2
  const auto theta2 = vec({0.5, 0.0, std::log(2.0)});
  CHECK(w.cum_hazard(1.0, std::vector<double>{1.0}, theta2) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("FPAFT df=1 and Weibull agree at mapped parameters") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto data = sample(seed);
    const ModelSpec fs{Family::fpaft, 1, {"x1", "x2"}, {}};
    const ModelSpec ws{Family::weibull, 1, {"x1", "x2"}, {}};
    const auto fp = FpaftModel::from_data(fs, data);
    const WeibullModel w(ws);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const double b1 = u(rng), b2 = u(rng), loglam = u(rng), loggam = u(rng);
    const Eigen::VectorXd tw = vec({b1, b2, loglam, loggam});
    const Eigen::VectorXd tf = vec({b1, b2, loglam, std::exp(loggam)});
    const double lw = w.loglik(data, tw, Execution::serial_reference);
    CHECK(fp.loglik(data, tf, Execution::serial_reference) == doctest::Approx(lw).epsilon(1e-12));
    // independent closed form
    oracle::Weibull o{std::exp(loglam), std::exp(loggam), {b1, b2}};
    CHECK(lw == doctest::Approx(oracle::weibull_loglik(o, data)).epsilon(1e-12));
  }
}

TEST_CASE("ExpPH log-likelihood closed form") {
  RowMatrix x(3, 1);
  x << 0, 1, 1;
  const SurvivalDataset d({0, 0.5, 0}, {2, 1, 3}, {1, 0, 1}, x, {"x"});
  const ExponentialPhModel m({Family::exponential_ph, 1, {"x"}, {}});
  const auto theta = vec({0.3, -1.2});
  double expected = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double eta = -1.2 + 0.3 * d.covariates(i)[0];
    expected += d.event(i) * eta - (d.exit(i) - d.entry(i)) * std::exp(eta);
  }
  CHECK(m.loglik(d, theta, Execution::serial_reference) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("analytic scores match finite differences") {
  const auto data = sample(21);
  const std::vector<std::string> covs{"x1", "x2"};
  for (int df = 1; df <= 5; ++df) {
    const auto m = FpaftModel::from_data({Family::fpaft, df, covs, {}}, data);
    check_score(m, data, 100 + static_cast<std::uint64_t>(df));
    const auto t = FpaftModel::from_data({Family::fpaft, df, covs, {{"x1", 2}}}, data);
    check_score(t, data, 200 + static_cast<std::uint64_t>(df));
  }
  check_score(WeibullModel({Family::weibull, 1, covs, {}}), data, 7);
  check_score(ExponentialPhModel({Family::exponential_ph, 1, covs, {}}), data, 8);
  check_score(GenGammaModel({Family::gengamma, 1, covs, {}}), data, 9);
}

TEST_CASE("make_model enforces identifiability") {
  const SurvivalDataset d({0, 0, 0}, {1, 2, 3}, {1, 1, 0}, RowMatrix(3, 0), {});
  CHECK_THROWS_AS(make_model({Family::fpaft, 5, {}, {}}, d), IdentifiabilityError);
  CHECK_NOTHROW(make_model({Family::exponential_ph, 1, {}, {}}, d));
}
