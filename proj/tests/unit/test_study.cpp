#include <doctest.h>

#include <cmath>
#include <filesystem>

#include <omp.h>

#include "fpaft/config.hpp"
#include "fpaft/error.hpp"
#include "fpaft/study.hpp"
#include "tempdir.hpp"

using namespace fpaft;

namespace {

StudyConfig small_study() {
  StudyConfig c;
  c.name = "small";
  c.scenario = {1.0, 0.10156498547191432, 1.1917781233169238, 1.0, 1.0, 0.5};
  c.roster = {ModelSpec::parse("weibull", {"x"}), ModelSpec::parse("fpaft:2", {"x"})};
  c.replicates = 6;
  c.n = 300;
  c.seed = 123;
  c.times = {1.0, 3.0};
  return c;
}

}  // namespace

TEST_CASE("coverage and median") {
  const std::vector<double> est{0.0, 1.0}, se{1.0, 0.1};
  CHECK(coverage(est, se, 0.5) == 50.0);
  CHECK(coverage(std::vector<double>{0.5}, std::vector<double>{0.0}, 0.5) == 100.0);
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 2, 3}) == 2.5);
  CHECK(median({std::nan(""), 1.0}) == 1.0);
  CHECK(std::isnan(median({})));
}

TEST_CASE("summaries from hand-made records") {
  StudyReport r;
  r.config = small_study();
  r.config.roster = {ModelSpec::parse("weibull", {"x"})};
  r.config.times = {};
  for (std::size_t k = 0; k < 4; ++k) {
    ReplicateRecord rec;
    rec.replicate = k;
    rec.converged = k < 3;
    rec.beta = 0.4 + 0.1 * static_cast<double>(k);  // 0.4, 0.5, 0.6 converged
    rec.se = 0.05;
    rec.aic_rank = rec.bic_rank = 1.0;
    r.records.push_back(rec);
  }
  summarise(r);
  REQUIRE(r.models.size() == 1);
  const auto& m = r.models[0];
  CHECK(m.converged == 3);
  CHECK(std::abs(m.bias) < 1e-12);
  CHECK(m.coverage == doctest::Approx(100.0 / 3));
  CHECK(m.aic_rank == 1.0);
}

TEST_CASE("study runs, ranks and round-trips through CSV") {
  auto cfg = small_study();
  const auto report = run_study(cfg);
  REQUIRE(report.models.size() == 2);
  CHECK(report.records.size() == 12);
  for (const auto& m : report.models) {
    CHECK(m.converged == 6);
    CHECK(m.aic_rank >= 1.0);
    CHECK(m.aic_rank <= 2.0);
  }
  CHECK(report.survival.size() == 2 * 2 * 2);

  testing_support::TempDir dir;
  emit_tables(report, dir.path(), 1.0);
  for (const char* f : {"beta.csv", "survival.csv", "replicates.csv", "report.txt", "manifest.json"})
    CHECK(std::filesystem::exists(dir / f));
  const auto back = read_model_table(dir / "beta.csv");
  REQUIRE(back.size() == 2);
  for (std::size_t m = 0; m < 2; ++m) {
    CHECK(back[m].model == report.models[m].model);
    CHECK(back[m].bias == report.models[m].bias);
    CHECK(back[m].coverage == report.models[m].coverage);
    CHECK(back[m].converged == report.models[m].converged);
  }
  const auto surv = read_survival_table(dir / "survival.csv");
  REQUIRE(surv.size() == report.survival.size());
  CHECK(surv[3].truth == report.survival[3].truth);

  const auto table = format_model_table(report.models);
  const auto pos = [&](const char* s) { return table.find(s); };
  CHECK(pos("Bias") < pos("% Bias"));
  CHECK(pos("% Bias") < pos("Cov."));
  CHECK(pos("Cov.") < pos("AIC"));
  CHECK(pos("AIC") < pos("BIC"));
  CHECK(pos("BIC") < pos("# Conv."));
}

TEST_CASE("one model roster ranks first; one replicate echoes the fit") {
  auto cfg = small_study();
  cfg.roster = {ModelSpec::parse("weibull", {"x"})};
  cfg.replicates = 1;
  const auto r = run_study(cfg);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].aic_rank == 1.0);
  CHECK(r.models[0].aic_rank == 1.0);
  CHECK(r.models[0].mean_estimate == r.records[0].beta);
  CHECK(r.models[0].bias == r.records[0].beta - 0.5);
}

TEST_CASE("results do not depend on the number of workers") {
  auto cfg = small_study();
  cfg.workers = 1;
  const auto a = run_study(cfg);
  cfg.workers = 3;
  const auto b = run_study(cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].beta == b.records[k].beta);
    CHECK(a.records[k].se == b.records[k].se);
    CHECK(a.records[k].loglog == b.records[k].loglog);
  }
}

TEST_CASE("study configuration") {
  CHECK_THROWS_AS(StudyConfig::from_config(Config::parse("p = 1\nlambda1 = 1\ngamma1 = 1\n")), DataError);
  CHECK_THROWS_AS(StudyConfig::from_config(Config::parse("seed = 1\np = 1\nlambda1 = 1\ngamma1 = 1\nbogus = 2\n")),
                  DataError);
  auto c = small_study();
  c.replicates = 0;
  CHECK_THROWS_AS(c.validate(), DataError);
  c = small_study();
  c.roster.clear();
  CHECK_THROWS_AS(c.validate(), DataError);
  CHECK(default_roster().size() == 10);

  for (int s = 1; s <= 4; ++s) {
    const auto path = std::filesystem::path(FPAFT_SCENARIO_DIR) / ("scenario" + std::to_string(s) + ".cfg");
    const auto sc = StudyConfig::from_config(Config::load(path));
    CHECK(sc.n == 1000);
    CHECK(sc.censor_time == 5.0);
    CHECK(sc.seed != 0);
    CHECK_NOTHROW(sc.validate());
  }
}
