#include "fpaft/study.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <omp.h>

#include "json.hpp"

#include "fpaft/config.hpp"
#include "fpaft/error.hpp"
#include "fpaft/estimation.hpp"
#include "fpaft/rng.hpp"

namespace fpaft {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kZeroTruth = 1e-3;
constexpr const char* kFormatVersion = "1";

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return v.empty() ? kNaN : 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double pct(double bias, double truth) {
  return std::abs(truth) < kZeroTruth ? kNaN : 100.0 * bias / truth;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError(fmt::format("{}: '{}' is not a number", where, s));
  return v;
}

std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path,
                                                    std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<std::string>> rows;
  for (int row = 2; std::getline(in, line); ++row) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != columns)
      throw DataError(fmt::format("{}:{}: expected {} fields, found {}", path.string(), row, columns,
                                  cells.size()));
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::string cell(double v) { return std::isnan(v) ? "." : fmt::format("{:.3f}", v); }
std::string cell1(double v) { return std::isnan(v) ? "." : fmt::format("{:.1f}", v); }
std::string rank_cell(double v) { return std::isnan(v) ? "." : fmt::format("{:g}", v); }

}  // namespace

void StudyConfig::validate() const {
  scenario.validate();
  if (roster.empty()) throw DataError("study roster is empty");
  if (replicates == 0) throw DataError("study needs at least one replicate");
  if (n == 0) throw DataError("study sample size must be positive");
  if (!(censor_time > 0.0)) throw DataError("censor_time must be positive");
  for (const double t : times)
    if (!(t > 0.0) || !std::isfinite(t)) throw DataError("monitored times must be positive");
  for (const auto& spec : roster) {
    spec.validate();
    if (spec.covariates != std::vector<std::string>{"x"})
      throw DataError(fmt::format("{}: study models use the single covariate x", spec.label()));
  }
}

std::vector<ModelSpec> default_roster() {
  std::vector<ModelSpec> roster{{Family::weibull, 1, {"x"}, {}}, {Family::gengamma, 1, {"x"}, {}}};
  for (int df = 2; df <= 9; ++df) roster.push_back({Family::fpaft, df, {"x"}, {}});
  return roster;
}

StudyConfig StudyConfig::from_config(const Config& cfg) {
  cfg.require_known({"name", "p", "lambda1", "gamma1", "lambda2", "gamma2", "beta", "censor_time",
                     "n", "replicates", "seed", "models", "times", "workers"});
  StudyConfig c;
  c.name = cfg.get_string("name", c.name);
  c.scenario = MixtureWeibullParams::from_config(cfg);
  c.censor_time = cfg.get_double("censor_time", c.censor_time);
  const auto positive = [&](const char* key, long long fallback) {
    const long long v = cfg.get_int(key, fallback);
    if (v < 1) throw DataError(fmt::format("{}: key '{}' must be at least 1", cfg.source(), key));
    return static_cast<std::size_t>(v);
  };
  c.n = positive("n", static_cast<long long>(c.n));
  c.replicates = positive("replicates", static_cast<long long>(c.replicates));
  c.seed = cfg.get_uint64("seed");
  if (cfg.has("models")) {
    c.roster.clear();
    for (const auto& m : cfg.get_list("models")) {
      try {
        c.roster.push_back(ModelSpec::parse(m, {"x"}));
      } catch (const DataError& e) {
        throw DataError(fmt::format("{}: key 'models': {}", cfg.source(), e.what()));
      }
    }
  } else {
    c.roster = default_roster();
  }
  if (cfg.has("times")) c.times = cfg.get_doubles("times");
  c.workers = static_cast<int>(cfg.get_int("workers", 0));
  c.validate();
  return c;
}

double coverage(std::span<const double> estimates, std::span<const double> ses, double truth) {
  if (estimates.size() != ses.size()) throw DataError("coverage: estimates and SEs differ in length");
  if (estimates.empty()) return kNaN;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < estimates.size(); ++i)
    if (std::abs(truth - estimates[i]) <= 1.96 * ses[i]) ++hit;
  return 100.0 * static_cast<double>(hit) / static_cast<double>(estimates.size());
}

double median(std::vector<double> values) {
  std::erase_if(values, [](double v) { return !std::isfinite(v); });
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

StudyReport run_study(const StudyConfig& config) {
  config.validate();
  const std::size_t n_models = config.roster.size();
  const std::size_t reps = config.replicates;
  const std::size_t n_times = config.times.size();
  std::vector<ReplicateRecord> records(reps * n_models);

  const int threads = config.workers > 0 ? config.workers : omp_get_max_threads();
  const auto count = static_cast<long long>(reps);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long long rr = 0; rr < count; ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    const auto sim = sample_mixture_aft(config.scenario, config.n, substream_seed(config.seed, r),
                                        config.censor_time);
    FitOptions options;
    options.exec = Execution::serial_reference;
    for (std::size_t m = 0; m < n_models; ++m) {
      auto& rec = records[r * n_models + m];
      rec.replicate = r;
      rec.model = m;
      rec.loglog.assign(2 * n_times, kNaN);
      rec.loglog_se.assign(2 * n_times, kNaN);
      rec.beta = rec.se = rec.loglik = rec.aic = rec.bic = rec.aic_rank = rec.bic_rank = kNaN;
      try {
        const auto f = fit(config.roster[m], sim.data, options);
        rec.converged = f.converged;
        rec.message = f.message;
        if (!f.converged) continue;
        rec.beta = f.theta[0];
        rec.se = f.standard_errors()[0];
        rec.loglik = f.loglik;
        rec.aic = f.aic;
        rec.bic = f.bic;
        for (int x = 0; x <= 1; ++x) {
          const double xv = x;
          const auto pred = predict_survival(f, std::span<const double>(&xv, 1), config.times);
          for (std::size_t k = 0; k < n_times; ++k) {
            if (!pred.defined[k]) continue;
            rec.loglog[x * n_times + k] = std::log(-std::log(pred.survival[k]));
            rec.loglog_se[x * n_times + k] = pred.se_log_log[k];
          }
        }
      } catch (const Error& e) {
        rec.converged = false;
        rec.message = e.what();
      }
    }
    // ranks among this replicate's converged fits
    std::vector<double> aic, bic;
    std::vector<std::size_t> which;
    for (std::size_t m = 0; m < n_models; ++m) {
      const auto& rec = records[r * n_models + m];
      if (!rec.converged) continue;
      aic.push_back(rec.aic);
      bic.push_back(rec.bic);
      which.push_back(m);
    }
    const auto ra = average_ranks(aic), rb = average_ranks(bic);
    for (std::size_t j = 0; j < which.size(); ++j) {
      records[r * n_models + which[j]].aic_rank = ra[j];
      records[r * n_models + which[j]].bic_rank = rb[j];
    }
  }

  StudyReport report;
  report.config = config;
  report.records = std::move(records);
  summarise(report);
  return report;
}

void summarise(StudyReport& report) {
  const auto& config = report.config;
  const std::size_t n_models = config.roster.size();
  const std::size_t n_times = config.times.size();
  const double truth = config.scenario.beta;
  report.models.clear();
  report.survival.clear();
  for (std::size_t m = 0; m < n_models; ++m) {
    std::vector<double> est, ses, est_se, ses_se, aic, bic;
    for (const auto& rec : report.records) {
      if (rec.model != m || !rec.converged) continue;
      est.push_back(rec.beta);
      aic.push_back(rec.aic_rank);
      bic.push_back(rec.bic_rank);
      if (std::isfinite(rec.se)) {
        est_se.push_back(rec.beta);
        ses_se.push_back(rec.se);
      }
      ses.push_back(rec.se);
    }
    ModelSummary s;
    s.model = config.roster[m].label();
    s.converged = est.size();
    s.mean_estimate = mean_of(est);
    s.bias = s.mean_estimate - truth;
    s.pct_bias = pct(s.bias, truth);
    s.coverage_n = est_se.size();
    s.coverage = coverage(est_se, ses_se, truth);
    s.aic_rank = median(aic);
    s.bic_rank = median(bic);
    s.mean_se = mean_of(ses_se);
    s.empirical_sd = sd_of(est);
    report.models.push_back(s);
  }
  for (std::size_t m = 0; m < n_models; ++m) {
    for (int x = 0; x <= 1; ++x) {
      for (std::size_t k = 0; k < n_times; ++k) {
        const double t = config.times[k];
        SurvivalSummary s;
        s.model = config.roster[m].label();
        s.x = x;
        s.time = t;
        s.truth = std::log(mixture_cum_hazard(t, x, config.scenario));
        std::vector<double> all, est, ses;
        for (const auto& rec : report.records) {
          if (rec.model != m || !rec.converged) continue;
          const double g = rec.loglog[x * n_times + k];
          const double se = rec.loglog_se[x * n_times + k];
          if (std::isfinite(g)) all.push_back(g);
          if (std::isfinite(g) && std::isfinite(se)) {
            est.push_back(g);
            ses.push_back(se);
          } else {
            ++s.excluded;
          }
        }
        s.used = est.size();
        s.bias = mean_of(all) - s.truth;
        s.pct_bias = pct(s.bias, s.truth);
        s.coverage = coverage(est, ses, s.truth);
        report.survival.push_back(s);
      }
    }
  }
}

std::string format_model_table(const std::vector<ModelSummary>& models) {
  std::string out = fmt::format("{:<12} {:>8} {:>8} {:>6} {:>5} {:>5} {:>7}\n", "Model", "Bias",
                                "% Bias", "Cov.", "AIC", "BIC", "# Conv.");
  for (const auto& s : models)
    out += fmt::format("{:<12} {:>8} {:>8} {:>6} {:>5} {:>5} {:>7}\n", s.model, cell(s.bias),
                       cell1(s.pct_bias), cell1(s.coverage), rank_cell(s.aic_rank),
                       rank_cell(s.bic_rank), s.converged);
  return out;
}

std::string format_survival_table(const std::vector<SurvivalSummary>& rows) {
  std::string out = fmt::format("{:>2} {:>5} {:<12} {:>8} {:>8} {:>8} {:>6} {:>6}\n", "x", "Time",
                                "Model", "Truth", "Bias", "% Bias", "Cov.", "Excl.");
  for (const auto& s : rows)
    out += fmt::format("{:>2} {:>5g} {:<12} {:>8} {:>8} {:>8} {:>6} {:>6}\n", s.x, s.time, s.model,
                       cell(s.truth), cell(s.bias), cell1(s.pct_bias), cell1(s.coverage), s.excluded);
  return out;
}

void emit_tables(const StudyReport& report, const std::filesystem::path& dir,
                 double elapsed_seconds) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw DataError(fmt::format("cannot write '{}'", (dir / name).string()));
    return out;
  };
  {
    auto out = open("beta.csv");
    out << "model,bias,pct_bias,coverage,aic_rank,bic_rank,converged,mean_estimate,mean_se,"
           "empirical_sd,coverage_n\n";
    for (const auto& s : report.models)
      out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", s.model, s.bias, s.pct_bias,
                         s.coverage, s.aic_rank, s.bic_rank, s.converged, s.mean_estimate, s.mean_se,
                         s.empirical_sd, s.coverage_n);
  }
  if (!report.config.times.empty()) {
    auto out = open("survival.csv");
    out << "model,x,time,truth,bias,pct_bias,coverage,used,excluded\n";
    for (const auto& s : report.survival)
      out << fmt::format("{},{},{},{},{},{},{},{},{}\n", s.model, s.x, s.time, s.truth, s.bias,
                         s.pct_bias, s.coverage, s.used, s.excluded);
  }
  {
    auto out = open("replicates.csv");
    out << "replicate,model,converged,beta,se,loglik,aic,bic,aic_rank,bic_rank\n";
    for (const auto& r : report.records)
      out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.replicate,
                         report.config.roster[r.model].label(), r.converged ? 1 : 0, r.beta, r.se,
                         r.loglik, r.aic, r.bic, r.aic_rank, r.bic_rank);
  }
  {
    auto out = open("report.txt");
    const auto& c = report.config;
    out << fmt::format("{}: beta = {}, n = {}, replicates = {}, seed = {}\n\n", c.name,
                       c.scenario.beta, c.n, c.replicates, c.seed);
    out << "Log acceleration factor\n" << format_model_table(report.models);
    if (!c.times.empty())
      out << "\nlog(-log S(t|x))\n" << format_survival_table(report.survival);
  }
  {
    const auto& c = report.config;
    nlohmann::json roster = nlohmann::json::array();
    for (const auto& s : c.roster) roster.push_back(s.label());
    nlohmann::json manifest = {
        {"format_version", kFormatVersion},
        {"name", c.name},
        {"seed", c.seed},
        {"replicates", c.replicates},
        {"n", c.n},
        {"censor_time", c.censor_time},
        {"scenario",
         {{"p", c.scenario.p},
          {"lambda1", c.scenario.lambda1},
          {"gamma1", c.scenario.gamma1},
          {"lambda2", c.scenario.lambda2},
          {"gamma2", c.scenario.gamma2},
          {"beta", c.scenario.beta}}},
        {"roster", roster},
        {"times", c.times},
        {"threads", c.workers > 0 ? c.workers : omp_get_max_threads()},
        {"elapsed_seconds", elapsed_seconds},
        {"library_version", FPAFT_VERSION},
        {"rng", "mt19937_64 seeded per replicate by SplitMix64 substreams"},
    };
    auto out = open("manifest.json");
    out << manifest.dump(2) << "\n";
  }
}

std::vector<ModelSummary> read_model_table(const std::filesystem::path& path) {
  std::vector<ModelSummary> out;
  const auto where = path.string();
  for (const auto& c : read_csv_rows(path, 11)) {
    ModelSummary s;
    s.model = c[0];
    s.bias = to_double(c[1], where);
    s.pct_bias = to_double(c[2], where);
    s.coverage = to_double(c[3], where);
    s.aic_rank = to_double(c[4], where);
    s.bic_rank = to_double(c[5], where);
    s.converged = static_cast<std::size_t>(to_double(c[6], where));
    s.mean_estimate = to_double(c[7], where);
    s.mean_se = to_double(c[8], where);
    s.empirical_sd = to_double(c[9], where);
    s.coverage_n = static_cast<std::size_t>(to_double(c[10], where));
    out.push_back(s);
  }
  return out;
}

std::vector<SurvivalSummary> read_survival_table(const std::filesystem::path& path) {
  std::vector<SurvivalSummary> out;
  const auto where = path.string();
  for (const auto& c : read_csv_rows(path, 9)) {
    SurvivalSummary s;
    s.model = c[0];
    s.x = to_double(c[1], where);
    s.time = to_double(c[2], where);
    s.truth = to_double(c[3], where);
    s.bias = to_double(c[4], where);
    s.pct_bias = to_double(c[5], where);
    s.coverage = to_double(c[6], where);
    s.used = static_cast<std::size_t>(to_double(c[7], where));
    s.excluded = static_cast<std::size_t>(to_double(c[8], where));
    out.push_back(s);
  }
  return out;
}

}  // namespace fpaft
