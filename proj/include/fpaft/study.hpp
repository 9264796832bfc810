#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fpaft/models.hpp"
#include "fpaft/simulation.hpp"

namespace fpaft {

class Config;

/// A replicated generate-fit-summarise run on a mixture-Weibull scenario.
struct StudyConfig {
  std::string name = "study";
  MixtureWeibullParams scenario;  ///< scenario.beta is the true log acceleration factor
  double censor_time = 5.0;
  std::vector<ModelSpec> roster;  ///< covariate "x" only
  std::size_t replicates = 100;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::vector<double> times{1.0, 2.0, 3.0, 4.0, 5.0};
  int workers = 0;  ///< OpenMP threads; 0 keeps the runtime default

  /// Throws DataError on an empty roster, zero replicates or sample size, bad times.
  void validate() const;

  /// Keys: name, p, lambda1, gamma1, lambda2, gamma2, beta, censor_time, n, replicates,
  /// seed, models (e.g. "weibull, gengamma, fpaft:2"), times, workers.
  static StudyConfig from_config(const Config& cfg);
};

/// Default roster: Weibull, generalized gamma and FPAFT with df 2..9.
std::vector<ModelSpec> default_roster();

/// One model fitted to one replicate.
struct ReplicateRecord {
  std::size_t replicate = 0;
  std::size_t model = 0;
  bool converged = false;
  double beta = 0.0;
  double se = 0.0;
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double aic_rank = 0.0;  ///< among the replicate's converged fits; NaN if not converged
  double bic_rank = 0.0;
  /// log(-log S(t|x)) and its SE, ordered [x = 0 at each time, then x = 1 at each time]
  std::vector<double> loglog;
  std::vector<double> loglog_se;
  std::string message;
};

struct ModelSummary {
  std::string model;
  double bias = 0.0;
  double pct_bias = 0.0;  ///< NaN where the truth is ~0
  double coverage = 0.0;
  double aic_rank = 0.0;  ///< median over replicates
  double bic_rank = 0.0;
  std::size_t converged = 0;
  double mean_estimate = 0.0;
  double mean_se = 0.0;
  double empirical_sd = 0.0;
  std::size_t coverage_n = 0;  ///< fits with a usable SE
};

struct SurvivalSummary {
  std::string model;
  double x = 0.0;
  double time = 0.0;
  double truth = 0.0;  ///< log(-log S(t|x)) of the generating scenario
  double bias = 0.0;
  double pct_bias = 0.0;
  double coverage = 0.0;
  std::size_t used = 0;      ///< converged fits with a delta-method SE
  std::size_t excluded = 0;  ///< converged fits where the delta method failed
};

struct StudyReport {
  StudyConfig config;
  std::vector<ModelSummary> models;
  std::vector<SurvivalSummary> survival;
  std::vector<ReplicateRecord> records;  ///< sorted by (replicate, model)
};

/// Runs every replicate (in parallel, one RNG substream per replicate) and summarises over
/// converged fits. The report does not depend on the number of workers.
StudyReport run_study(const StudyConfig& config);

/// Percentage of i with |truth - estimates[i]| <= 1.96 ses[i].
double coverage(std::span<const double> estimates, std::span<const double> ses, double truth);

/// Summaries from raw records (exposed for testing).
void summarise(StudyReport& report);

/// Median of the finite values; NaN when there are none.
double median(std::vector<double> values);

/// Writes beta.csv, survival.csv (skipped when no times are monitored), replicates.csv,
/// report.txt and manifest.json into `dir`.
void emit_tables(const StudyReport& report, const std::filesystem::path& dir,
                 double elapsed_seconds = 0.0);

/// Reads beta.csv back.
std::vector<ModelSummary> read_model_table(const std::filesystem::path& path);

/// Reads survival.csv back.
std::vector<SurvivalSummary> read_survival_table(const std::filesystem::path& path);

/// Aligned-text rendering of the beta table in the column order
/// Bias, % Bias, Cov., AIC, BIC, # Conv.
std::string format_model_table(const std::vector<ModelSummary>& models);
std::string format_survival_table(const std::vector<SurvivalSummary>& rows);

}  // namespace fpaft
