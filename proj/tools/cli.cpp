#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <omp.h>

#include "fpaft/causal.hpp"
#include "fpaft/config.hpp"
#include "fpaft/dataset.hpp"
#include "fpaft/error.hpp"
#include "fpaft/estimation.hpp"
#include "fpaft/model_io.hpp"
#include "fpaft/simulation.hpp"
#include "fpaft/study.hpp"

namespace fpaft::cli {

namespace {

// Thrown for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw UsageError(fmt::format("{}: '{}' is not a number", what, text));
  return v;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) out.push_back(parse_double(s, what));
  return out;
}

std::string fixed(double v, int digits) {
  return std::isfinite(v) ? fmt::format("{:.{}f}", v, digits) : std::string(".");
}

// Shortest text that reads back to the same double; "NA" for non-finite values.
std::string exact(double v) { return std::isfinite(v) ? fmt::format("{}", v) : std::string("NA"); }

void set_workers(int workers) {
  if (workers < 0) throw UsageError("--workers must be non-negative");
  if (workers > 0) omp_set_num_threads(workers);
}

struct DataFlags {
  std::string path, time, event, entry, covars;

  void add(CLI::App* cmd, bool with_covars) {
    cmd->add_option("--data", path, "CSV file with a header row")->required();
    cmd->add_option("--time", time, "exit-time column")->required();
    cmd->add_option("--event", event, "event-indicator column (1 = event, 0 = censored)")->required();
    cmd->add_option("--entry", entry, "delayed-entry column");
    if (with_covars) cmd->add_option("--covars", covars, "comma-separated covariate columns");
  }

  SurvivalDataset load() const {
    ColumnMapping m;
    m.time = time;
    m.event = event;
    m.entry = entry;
    m.covariates = split_list(covars);
    return read_csv(path, m);
  }
};

// ---------------------------------------------------------------------------- fit

struct FitFlags {
  DataFlags data;
  std::string family = "fpaft";
  int df = 3;
  std::vector<std::string> tde;
  std::string out;
  bool compare = false;
  std::string roster;
  bool reknot = false;
  bool bic_rows = false;
  int workers = 0;
};

ModelSpec spec_from_flags(const FitFlags& f, const std::vector<std::string>& covariates) {
  ModelSpec spec;
  spec.family = parse_family(f.family);
  spec.df = spec.family == Family::fpaft ? f.df : 1;
  spec.covariates = covariates;
  for (const auto& t : f.tde) {
    const auto colon = t.rfind(':');
    if (colon == std::string::npos || colon == 0)
      throw UsageError(fmt::format("--tde '{}': expected name:df", t));
    const double df = parse_double(t.substr(colon + 1), "--tde df");
    if (df < 1 || df != std::floor(df)) throw UsageError(fmt::format("--tde '{}': df must be a positive integer", t));
    spec.tde.push_back({t.substr(0, colon), static_cast<int>(df)});
  }
  spec.validate();
  return spec;
}

void print_fit(std::ostream& out, const FittedModel& f) {
  fmt::print(out, "Model: {}   n = {}   events = {}\n", f.spec.label(), f.n_obs, f.n_events);
  const auto names = f.parameter_names();
  const auto se = f.standard_errors();
  std::size_t width = 9;
  for (const auto& n : names) width = std::max(width, n.size());
  fmt::print(out, "{:<{}} {:>12} {:>12} {:>25}\n", "Parameter", width, "Estimate", "Std. Err.", "95% CI");
  for (std::size_t j = 0; j < names.size(); ++j) {
    const double b = f.theta[static_cast<Eigen::Index>(j)];
    const double s = se[static_cast<Eigen::Index>(j)];
    const std::string ci = std::isfinite(s)
                               ? fmt::format("({:.6f}, {:.6f})", b - 1.96 * s, b + 1.96 * s)
                               : std::string("(., .)");
    fmt::print(out, "{:<{}} {:>12.6f} {:>12} {:>25}\n", names[j], width, b, fixed(s, 6), ci);
  }
  fmt::print(out, "Log-likelihood: {:.4f}   AIC: {:.2f}   BIC: {:.2f}\n", f.loglik, f.aic, f.bic);
  fmt::print(out, "Converged: {} after {} iterations (max |score| {:.3g})\n", f.converged ? "yes" : "no",
             f.iterations, f.max_abs_score);
}

std::vector<ModelSpec> compare_roster(const FitFlags& flags, const std::vector<std::string>& covs) {
  std::vector<ModelSpec> roster;
  if (flags.roster.empty()) {
    roster.push_back(ModelSpec::parse("weibull", covs));
    roster.push_back(ModelSpec::parse("gengamma", covs));
    for (int df = 1; df <= 9; ++df) roster.push_back(ModelSpec::parse(fmt::format("fpaft:{}", df), covs));
  } else {
    for (const auto& s : split_list(flags.roster)) roster.push_back(ModelSpec::parse(s, covs));
  }
  return roster;
}

int cmd_fit(const FitFlags& flags, std::ostream& out, std::ostream& err) {
  set_workers(flags.workers);
  const auto data = flags.data.load();
  const auto& covs = data.covariate_names();
  FitOptions opts;
  opts.reknot = flags.reknot;
  opts.bic_uses_events = !flags.bic_rows;

  if (flags.compare) {
    if (!flags.tde.empty()) throw UsageError("--compare does not take --tde");
    std::vector<FittedModel> fits;
    for (const auto& spec : compare_roster(flags, covs)) fits.push_back(fit(spec, data, opts));
    const auto rows = compare(fits);
    const bool has_beta = !covs.empty();
    fmt::print(out, "{:<12} {:>4} {:>12} {:>12} {:>10} {:>24} {:>12} {:>12} {:>5} {:>5} {:>5}\n",
               "Model", "k", has_beta ? covs[0] : "-", "Std. Err.", "", "95% CI", "AIC", "BIC",
               "rAIC", "rBIC", "Conv.");
    for (std::size_t m = 0; m < fits.size(); ++m) {
      const auto& f = fits[m];
      const auto& r = rows[m];
      const double b = has_beta ? f.theta[0] : std::nan("");
      const double s = has_beta ? f.standard_errors()[0] : std::nan("");
      const std::string ci =
          std::isfinite(s) ? fmt::format("({:.4f}, {:.4f})", b - 1.96 * s, b + 1.96 * s) : "(., .)";
      fmt::print(out, "{:<12} {:>4} {:>12} {:>12} {:>10} {:>24} {:>12.2f} {:>12.2f} {:>5} {:>5} {:>5}\n",
                 r.label, r.n_params, fixed(b, 4), fixed(s, 4), "", ci, r.aic, r.bic,
                 fixed(r.aic_rank, 1), fixed(r.bic_rank, 1), r.converged ? "yes" : "NO");
      if (!f.converged) fmt::print(err, "warning: {} did not converge: {}\n", r.label, f.message);
    }
    if (!flags.out.empty()) {
      std::ofstream csv(flags.out);
      if (!csv) throw DataError(fmt::format("cannot write '{}'", flags.out));
      csv << "model,n_params,estimate,se,loglik,aic,bic,aic_rank,bic_rank,converged\n";
      for (std::size_t m = 0; m < fits.size(); ++m) {
        const auto& r = rows[m];
        const double b = has_beta ? fits[m].theta[0] : std::nan("");
        const double s = has_beta ? fits[m].standard_errors()[0] : std::nan("");
        csv << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.label, r.n_params, exact(b), exact(s),
                           exact(r.loglik), exact(r.aic), exact(r.bic), exact(r.aic_rank),
                           exact(r.bic_rank), r.converged ? 1 : 0);
      }
    }
    return kOk;
  }

  const auto f = fit(spec_from_flags(flags, covs), data, opts);
  print_fit(out, f);
  if (!f.converged)
    fmt::print(err, "WARNING: the fit did not converge ({}). Estimates are not maximum likelihood.\n",
               f.message);
  if (!flags.out.empty()) save_model(flags.out, f);
  return kOk;
}

// ---------------------------------------------------------------------------- predict

struct PredictFlags {
  std::string model, at, times, out;
};

std::vector<double> parse_at(const std::string& text, const std::vector<std::string>& names) {
  std::map<std::string, double> given;
  for (const auto& item : split_list(text)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError(fmt::format("--at '{}': expected name=value", item));
    std::string key = item.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    if (given.count(key)) throw UsageError(fmt::format("--at: '{}' given twice", key));
    given[key] = parse_double(item.substr(eq + 1), "--at " + key);
  }
  std::vector<double> x;
  for (const auto& n : names) {
    const auto it = given.find(n);
    if (it == given.end()) throw UsageError(fmt::format("--at: no value for covariate '{}'", n));
    x.push_back(it->second);
    given.erase(it);
  }
  if (!given.empty())
    throw UsageError(fmt::format("--at: '{}' is not a covariate of the model", given.begin()->first));
  return x;
}

void write_prediction(std::ostream& os, const SurvivalPrediction& p) {
  os << "time,S,se_loglogS,lower,upper\n";
  for (std::size_t k = 0; k < p.times.size(); ++k)
    os << fmt::format("{},{},{},{},{}\n", exact(p.times[k]), exact(p.survival[k]),
                      exact(p.se_log_log[k]), exact(p.lower[k]), exact(p.upper[k]));
}

int cmd_predict(const PredictFlags& flags, std::ostream& out, std::ostream& err) {
  const auto f = load_model(flags.model);
  const auto x = parse_at(flags.at, f.spec.covariates);
  const auto times = parse_doubles(flags.times, "--times");
  if (times.empty()) throw UsageError("--times: no times given");
  if (!f.converged) fmt::print(err, "WARNING: the stored fit did not converge.\n");
  const auto pred = predict_survival(f, x, times);
  if (flags.out.empty()) {
    write_prediction(out, pred);
  } else {
    std::ofstream os(flags.out);
    if (!os) throw DataError(fmt::format("cannot write '{}'", flags.out));
    write_prediction(os, pred);
  }
  return kOk;
}

// ---------------------------------------------------------------------------- simulate

struct SimulateFlags {
  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::optional<double> beta;
  std::optional<std::size_t> n;
};

int cmd_simulate(const SimulateFlags& flags, std::ostream& out, std::ostream&) {
  const auto cfg = Config::load(flags.config);
  cfg.require_known({"name", "p", "lambda1", "gamma1", "lambda2", "gamma2", "beta", "censor_time",
                     "n", "replicates", "seed", "models", "times", "workers"});
  auto params = MixtureWeibullParams::from_config(cfg);
  if (flags.beta) params.beta = *flags.beta;
  params.validate();
  const long long n = flags.n ? static_cast<long long>(*flags.n) : cfg.get_int("n", 1000);
  if (n < 1) throw UsageError("n must be at least 1");
  const double censor = cfg.get_double("censor_time", 5.0);
  const auto sim = sample_mixture_aft(params, static_cast<std::size_t>(n), *flags.seed, censor);
  write_csv(flags.out, sim.data);
  fmt::print(out, "wrote {} rows ({} events) to {}\n", sim.data.size(), sim.data.n_events(), flags.out);
  return kOk;
}

// ---------------------------------------------------------------------------- study

struct StudyFlags {
  std::string config, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> beta;
  std::optional<std::size_t> replicates, n;
  int workers = 0;
};

int cmd_study(const StudyFlags& flags, std::ostream& out, std::ostream&) {
  set_workers(flags.workers);
  auto cfg_text = Config::load(flags.config);
  StudyConfig config;
  if (!cfg_text.has("seed") && !flags.seed)
    throw UsageError("study: no seed (set 'seed' in the config or pass --seed)");
  if (!cfg_text.has("seed")) {
    // give the parser a seed so that it validates the rest, then apply the flag
    std::ifstream in(flags.config);
    std::stringstream ss;
    ss << in.rdbuf() << "\nseed = " << *flags.seed << '\n';
    cfg_text = Config::parse(ss.str(), flags.config);
  }
  config = StudyConfig::from_config(cfg_text);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.beta) config.scenario.beta = *flags.beta;
  if (flags.replicates) config.replicates = *flags.replicates;
  if (flags.n) config.n = *flags.n;
  if (flags.workers > 0) config.workers = flags.workers;
  config.validate();

  const auto start = std::chrono::steady_clock::now();
  const auto report = run_study(config);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit_tables(report, flags.out_dir, elapsed);
  fmt::print(out, "{}: beta = {}, R = {}, n = {}, seed = {}\n", config.name, config.scenario.beta,
             config.replicates, config.n, config.seed);
  out << format_model_table(report.models);
  fmt::print(out, "tables written to {} ({:.1f} s)\n", flags.out_dir, elapsed);
  return kOk;
}

// ---------------------------------------------------------------------------- causal

struct CausalFlags {
  std::string corr = "0,0.1,-0.1";
  std::string corr_scale = "point-biserial";
  std::size_t n = 10000;
  std::size_t reps = 50;
  std::optional<std::uint64_t> seed;
  int df = 3;
  std::string out, curve_out;
  int workers = 0;
};

int cmd_causal(const CausalFlags& flags, std::ostream& out, std::ostream&) {
  set_workers(flags.workers);
  Table1Config cfg;
  cfg.correlations = parse_doubles(flags.corr, "--corr");
  if (cfg.correlations.empty()) throw UsageError("--corr: no correlations given");
  cfg.scenario.n = flags.n;
  cfg.scenario.corr_scale =
      flags.corr_scale == "latent" ? CorrelationScale::latent : CorrelationScale::point_biserial;
  cfg.replicates = flags.reps;
  cfg.seed = *flags.seed;
  cfg.fpaft_df = flags.df;
  const auto cells = run_table1(cfg);

  fmt::print(out, "n = {}, replicates = {}, seed = {}\n", flags.n, flags.reps, cfg.seed);
  fmt::print(out, "{:>6} {:<12} {:<5} {:>10} {:>10} {:>10} {:>6}\n", "corr", "Model", "Covs", "E(b_x)",
             "E(se)", "SD(b_x)", "Conv.");
  for (const auto& c : cells)
    fmt::print(out, "{:>6.2f} {:<12} {:<5} {:>10.3f} {:>10.3f} {:>10.3f} {:>6}\n", c.corr, c.model,
               c.covariates, c.mean_beta, c.mean_se, c.sd_beta, c.converged);
  if (!flags.out.empty()) {
    std::ofstream os(flags.out);
    if (!os) throw DataError(fmt::format("cannot write '{}'", flags.out));
    os << "corr,model,covariates,mean_beta,mean_se,sd_beta,converged,replicates\n";
    for (const auto& c : cells)
      os << fmt::format("{},{},{},{},{},{},{},{}\n", exact(c.corr), c.model, c.covariates,
                        exact(c.mean_beta), exact(c.mean_se), exact(c.sd_beta), c.converged,
                        c.replicates);
  }
  if (!flags.curve_out.empty()) {
    // population contrasts under the generating parameters
    std::ofstream os(flags.curve_out);
    if (!os) throw DataError(fmt::format("cannot write '{}'", flags.curve_out));
    std::vector<double> times;
    for (int k = 1; k <= 100; ++k) times.push_back(0.1 * k);
    os << "corr,time,causal_loghr,unadjusted_loghr,aft_marginal\n";
    for (const double corr : cfg.correlations) {
      auto s = cfg.scenario;
      s.corr = corr;
      s.validate();
      const auto ph = PhEffects::exponential(s.beta0, s.beta_x, s.beta_z);
      const double rho = s.latent_correlation();
      const auto z = ZDistribution::normal(0.0, s.z_sd);
      const auto causal = marginal_causal_loghr(ph, z, times);
      const auto unadj = marginal_unadjusted_loghr(
          ph, ZDistribution::normal_given_threshold(s.z_sd, rho, true),
          ZDistribution::normal_given_threshold(s.z_sd, rho, false), times);
      const double tm = aft_marginal_contrast(s.beta_x, s.beta_z, threshold_mean_gap(s));
      for (std::size_t k = 0; k < times.size(); ++k)
        os << fmt::format("{},{},{},{},{}\n", exact(corr), exact(times[k]), exact(causal.values[k]),
                          exact(unadj.values[k]), exact(tm));
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------- km

struct KmFlags {
  DataFlags data;
  std::string out;
};

int cmd_km(const KmFlags& flags, std::ostream& out, std::ostream&) {
  const auto data = flags.data.load();
  const auto km = kaplan_meier(data);
  const auto na = nelson_aalen(data);
  std::ofstream file;
  if (!flags.out.empty()) {
    file.open(flags.out);
    if (!file) throw DataError(fmt::format("cannot write '{}'", flags.out));
  }
  std::ostream& os = flags.out.empty() ? out : file;
  os << "time,n_risk,n_events,survival,cum_hazard\n";
  for (std::size_t k = 0; k < km.times.size(); ++k)
    os << fmt::format("{},{},{},{},{}\n", exact(km.times[k]), exact(km.n_risk[k]),
                      exact(km.n_events[k]), exact(km.values[k]), exact(na.values[k]));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flexible parametric accelerated failure time models"};
  app.name("fpaft");
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", FPAFT_VERSION);

  FitFlags fit_flags;
  auto* fit_cmd = app.add_subcommand("fit", "fit a model to a CSV dataset");
  fit_flags.data.add(fit_cmd, true);
  fit_cmd->add_option("--family", fit_flags.family, "fpaft | weibull | gengamma | expph")
      ->capture_default_str();
  fit_cmd->add_option("--df", fit_flags.df, "baseline spline degrees of freedom (fpaft)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--tde", fit_flags.tde, "time-dependent effect name:df (repeatable)");
  fit_cmd->add_option("--out", fit_flags.out,
                      "model file to write (with --compare: CSV of the comparison table)");
  fit_cmd->add_flag("--compare", fit_flags.compare,
                    "fit a roster and tabulate AIC/BIC instead of a single model");
  fit_cmd->add_option("--roster", fit_flags.roster,
                      "models for --compare (default: weibull,gengamma,fpaft:1..fpaft:9)");
  fit_cmd->add_flag("--reknot", fit_flags.reknot, "move fpaft knots to the accelerated time scale and refit");
  fit_cmd->add_flag("--bic-rows", fit_flags.bic_rows, "BIC penalty log(rows) instead of log(events)");
  fit_cmd->add_option("--workers", fit_flags.workers, "threads for likelihood evaluation");

  PredictFlags pred_flags;
  auto* pred_cmd = app.add_subcommand("predict", "survival curve with 95% CI from a model file");
  pred_cmd->add_option("--model", pred_flags.model, "model file from 'fit --out'")->required();
  pred_cmd->add_option("--at", pred_flags.at, "covariate values, e.g. \"x=1,z=0.5\"");
  pred_cmd->add_option("--times", pred_flags.times, "comma-separated positive times")->required();
  pred_cmd->add_option("--out", pred_flags.out, "CSV file (default: stdout)");

  SimulateFlags sim_flags;
  auto* sim_cmd = app.add_subcommand("simulate", "draw a mixture-Weibull AFT dataset");
  sim_cmd->add_option("--scenario-config", sim_flags.config, "scenario file")->required();
  sim_cmd->add_option("--seed", sim_flags.seed, "RNG seed")->required();
  sim_cmd->add_option("--out", sim_flags.out, "CSV file to write")->required();
  sim_cmd->add_option("--beta", sim_flags.beta, "override the scenario's log acceleration factor");
  sim_cmd->add_option("--n", sim_flags.n, "override the sample size")->check(CLI::PositiveNumber);

  StudyFlags study_flags;
  auto* study_cmd = app.add_subcommand("study", "replicated simulation study");
  study_cmd->add_option("--study-config", study_flags.config, "study/scenario file")->required();
  study_cmd->add_option("--out-dir", study_flags.out_dir, "directory for the tables")->required();
  study_cmd->add_option("--seed", study_flags.seed, "override the config seed");
  study_cmd->add_option("--beta", study_flags.beta, "override the true log acceleration factor");
  study_cmd->add_option("--replicates", study_flags.replicates, "override R")->check(CLI::PositiveNumber);
  study_cmd->add_option("--n", study_flags.n, "override the sample size")->check(CLI::PositiveNumber);
  study_cmd->add_option("--workers", study_flags.workers, "threads (0 = runtime default)");

  CausalFlags causal_flags;
  auto* causal_cmd = app.add_subcommand("causal", "collapsibility demonstration (PH vs AFT)");
  causal_cmd->add_option("--corr", causal_flags.corr, "comma-separated Corr(X, Z) targets")
      ->capture_default_str();
  causal_cmd->add_option("--corr-scale", causal_flags.corr_scale,
                         "what --corr targets: Corr(X, Z) or the latent normal's Corr(W, Z)")
      ->capture_default_str()
      ->check(CLI::IsMember({"point-biserial", "latent"}));
  causal_cmd->add_option("--n", causal_flags.n, "subjects per replicate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  causal_cmd->add_option("--reps", causal_flags.reps, "replicates per correlation")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  causal_cmd->add_option("--seed", causal_flags.seed, "RNG seed")->required();
  causal_cmd->add_option("--df", causal_flags.df, "FPAFT degrees of freedom")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  causal_cmd->add_option("--out", causal_flags.out, "CSV of the summary table");
  causal_cmd->add_option("--curve-out", causal_flags.curve_out,
                         "CSV of the population log hazard ratio contrasts over time");
  causal_cmd->add_option("--workers", causal_flags.workers, "threads (0 = runtime default)");

  KmFlags km_flags;
  auto* km_cmd = app.add_subcommand("km", "Kaplan-Meier and Nelson-Aalen estimates");
  km_flags.data.add(km_cmd, false);
  km_cmd->add_option("--out", km_flags.out, "CSV file (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit_flags, out, err);
    if (*pred_cmd) return cmd_predict(pred_flags, out, err);
    if (*sim_cmd) return cmd_simulate(sim_flags, out, err);
    if (*study_cmd) return cmd_study(study_flags, out, err);
    if (*causal_cmd) return cmd_causal(causal_flags, out, err);
    if (*km_cmd) return cmd_km(km_flags, out, err);
  } catch (const UsageError& e) {
    fmt::print(err, "usage error: {}\n", e.what());
    return kUsage;
  } catch (const DataError& e) {
    fmt::print(err, "data error: {}\n", e.what());
    return kData;
  } catch (const NumericalError& e) {
    fmt::print(err, "numerical error: {}\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kFailure;
  }
  return kUsage;
}

}  // namespace fpaft::cli
