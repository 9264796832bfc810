#include "fpaft/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "fpaft/error.hpp"

namespace fpaft {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

void write_numbers(std::ostream& out, std::string_view key, std::span<const double> values) {
  out << key << ' ' << values.size();
  for (const double v : values) out << ' ' << num(v);
  out << '\n';
}

void check_name(const std::string& name) {
  if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos)
    throw DataError(fmt::format("covariate name '{}' cannot be stored in a model file", name));
}

struct Record {
  std::vector<std::string> tokens;
  int line = 0;
};

class Reader {
 public:
  Reader(std::istream& in, std::string source) : source_(std::move(source)) {
    std::string raw;
    for (int line = 1; std::getline(in, raw); ++line) {
      std::istringstream ss(raw);
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (tokens.empty() || tokens[0].starts_with('#')) continue;
      std::string key = tokens[0];
      std::size_t skip = 1;
      if (key == "knots" && tokens.size() > 1) {
        key += ' ' + tokens[1];
        skip = 2;
      }
      if (records_.count(key)) fail(line, fmt::format("duplicate record '{}'", key));
      records_[key] = {std::vector<std::string>(tokens.begin() + static_cast<long>(skip), tokens.end()),
                       line};
      if (first_line_ == 0) first_key_ = key, first_line_ = line;
    }
  }

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw DataError(fmt::format("{}:{}: {}", source_, line, what));
  }

  bool has(const std::string& key) const { return records_.count(key) != 0; }

  const Record& get(const std::string& key) const {
    const auto it = records_.find(key);
    if (it == records_.end())
      throw DataError(fmt::format("{}: missing record '{}'", source_, key));
    return it->second;
  }

  std::string word(const std::string& key) const {
    const auto& r = get(key);
    if (r.tokens.size() != 1) fail(r.line, fmt::format("'{}' expects one value", key));
    return r.tokens[0];
  }

  double number(const Record& r, std::size_t i, const std::string& key) const {
    if (i >= r.tokens.size()) fail(r.line, fmt::format("'{}' has too few values", key));
    const auto& s = r.tokens[i];
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      fail(r.line, fmt::format("'{}': '{}' is not a number", key, s));
    return v;
  }

  double scalar(const std::string& key) const { return number(get(key), 0, key); }

  std::size_t count(const std::string& key) const {
    const double v = scalar(key);
    if (v < 0 || v != std::floor(v)) fail(get(key).line, fmt::format("'{}' must be a count", key));
    return static_cast<std::size_t>(v);
  }

  /// `key n v1 .. vn`
  std::vector<double> vector(const std::string& key) const {
    const auto& r = get(key);
    const auto n = static_cast<std::size_t>(number(r, 0, key));
    if (r.tokens.size() != n + 1)
      fail(r.line, fmt::format("'{}' declares {} values but has {}", key, n, r.tokens.size() - 1));
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(number(r, i + 1, key));
    return out;
  }

  const std::string& first_key() const { return first_key_; }
  int first_line() const { return first_line_; }

 private:
  std::string source_;
  std::map<std::string, Record> records_;
  std::string first_key_;
  int first_line_ = 0;
};

}  // namespace

void write_model(std::ostream& out, const FittedModel& f) {
  const auto& spec = f.spec;
  out << "fpaft-model " << kModelFormatVersion << '\n';
  out << "family " << to_string(spec.family) << '\n';
  out << "df " << spec.df << '\n';
  out << "covariates " << spec.covariates.size();
  for (const auto& c : spec.covariates) {
    check_name(c);
    out << ' ' << c;
  }
  out << '\n';
  out << "tde " << spec.tde.size();
  for (const auto& t : spec.tde) out << ' ' << t.covariate << ' ' << t.df;
  out << '\n';
  if (const auto* fp = dynamic_cast<const FpaftModel*>(f.model.get())) {
    write_numbers(out, "knots baseline", fp->baseline_knots().knots());
    for (std::size_t q = 0; q < fp->tde().size(); ++q)
      write_numbers(out, "knots tde:" + spec.tde[q].covariate, fp->tde()[q].knots.knots());
  }
  write_numbers(out, "theta", std::span<const double>(f.theta.data(), f.n_params()));
  if (f.covariance) {
    const Eigen::MatrixXd& c = *f.covariance;
    std::vector<double> flat;
    for (Eigen::Index i = 0; i < c.rows(); ++i)
      for (Eigen::Index j = 0; j < c.cols(); ++j) flat.push_back(c(i, j));
    write_numbers(out, "covariance", flat);
  } else {
    out << "covariance 0\n";
  }
  out << "loglik " << num(f.loglik) << '\n';
  out << "aic " << num(f.aic) << '\n';
  out << "bic " << num(f.bic) << '\n';
  out << "n_obs " << f.n_obs << '\n';
  out << "n_events " << f.n_events << '\n';
  out << "converged " << (f.converged ? 1 : 0) << '\n';
  out << "iterations " << f.iterations << '\n';
  out << "max_abs_score " << num(f.max_abs_score) << '\n';
  out << "data_checksum " << f.data_checksum << '\n';
  out << "end\n";
}

void save_model(const std::filesystem::path& path, const FittedModel& fitted) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("cannot write model file '{}'", path.string()));
  write_model(out, fitted);
}

FittedModel read_model(std::istream& in, const std::string& source) {
  const Reader r(in, source);
  if (r.first_key() != "fpaft-model")
    throw DataError(fmt::format("{}: not a model file (missing 'fpaft-model' header)", source));
  const auto version = r.count("fpaft-model");
  if (version != static_cast<std::size_t>(kModelFormatVersion))
    r.fail(r.first_line(), fmt::format("unsupported model format version {}", version));
  if (!r.has("end")) throw DataError(fmt::format("{}: truncated model file (no 'end')", source));

  ModelSpec spec;
  try {
    spec.family = parse_family(r.word("family"));
  } catch (const DataError& e) {
    r.fail(r.get("family").line, e.what());
  }
  spec.df = static_cast<int>(r.count("df"));
  {
    const auto& rec = r.get("covariates");
    const std::size_t n = r.count("covariates");
    if (rec.tokens.size() != n + 1) r.fail(rec.line, "covariate count does not match");
    spec.covariates.assign(rec.tokens.begin() + 1, rec.tokens.end());
  }
  {
    const auto& rec = r.get("tde");
    const std::size_t n = r.count("tde");
    if (rec.tokens.size() != 2 * n + 1) r.fail(rec.line, "tde count does not match");
    for (std::size_t q = 0; q < n; ++q)
      spec.tde.push_back({rec.tokens[1 + 2 * q], static_cast<int>(r.number(rec, 2 + 2 * q, "tde"))});
  }
  try {
    spec.validate();
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", source, e.what()));
  }

  FittedModel f;
  f.spec = spec;
  switch (spec.family) {
    case Family::fpaft: {
      std::vector<FpaftModel::TimeDependentEffect> tde;
      for (const auto& t : spec.tde) {
        const auto it = std::find(spec.covariates.begin(), spec.covariates.end(), t.covariate);
        tde.push_back({static_cast<std::size_t>(it - spec.covariates.begin()),
                       KnotVector(r.vector("knots tde:" + t.covariate))});
      }
      f.model = std::make_shared<FpaftModel>(spec, KnotVector(r.vector("knots baseline")), tde);
      break;
    }
    case Family::weibull: f.model = std::make_shared<WeibullModel>(spec); break;
    case Family::gengamma: f.model = std::make_shared<GenGammaModel>(spec); break;
    case Family::exponential_ph: f.model = std::make_shared<ExponentialPhModel>(spec); break;
  }
  const auto theta = r.vector("theta");
  if (theta.size() != f.model->n_params())
    r.fail(r.get("theta").line,
           fmt::format("expected {} parameters, found {}", f.model->n_params(), theta.size()));
  f.theta = Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
  const auto cov = r.vector("covariance");
  if (!cov.empty()) {
    const auto k = static_cast<Eigen::Index>(theta.size());
    if (cov.size() != theta.size() * theta.size())
      r.fail(r.get("covariance").line, "covariance size does not match the parameters");
    f.covariance = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                  Eigen::RowMajor>>(cov.data(), k, k);
  }
  f.loglik = r.scalar("loglik");
  f.aic = r.scalar("aic");
  f.bic = r.scalar("bic");
  f.n_obs = r.count("n_obs");
  f.n_events = r.count("n_events");
  f.converged = r.count("converged") == 1;
  f.iterations = static_cast<int>(r.count("iterations"));
  f.max_abs_score = r.scalar("max_abs_score");
  {
    const auto& rec = r.get("data_checksum");
    if (rec.tokens.size() != 1) r.fail(rec.line, "data_checksum expects one value");
    std::uint64_t v = 0;
    const auto& s = rec.tokens[0];
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) r.fail(rec.line, "bad data_checksum");
    f.data_checksum = v;
  }
  return f;
}

FittedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open model file '{}'", path.string()));
  return read_model(in, path.string());
}

}  // namespace fpaft
