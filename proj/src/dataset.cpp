#include "fpaft/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "fpaft/error.hpp"

namespace fpaft {

SurvivalDataset::SurvivalDataset(std::vector<double> entry, std::vector<double> exit,
                                 std::vector<int> event, RowMatrix covariates,
                                 std::vector<std::string> covariate_names)
    : entry_(std::move(entry)),
      exit_(std::move(exit)),
      event_(std::move(event)),
      covariates_(std::move(covariates)),
      names_(std::move(covariate_names)) {
  const std::size_t n = exit_.size();
  if (entry_.size() != n || event_.size() != n)
    throw DataError("entry, exit and event columns differ in length");
  if (static_cast<std::size_t>(covariates_.rows()) != n ||
      static_cast<std::size_t>(covariates_.cols()) != names_.size()) {
    // an empty covariate matrix is allowed to arrive as 0x0
    if (!(names_.empty() && covariates_.size() == 0))
      throw DataError("covariate matrix shape does not match rows and names");
    covariates_.resize(static_cast<Eigen::Index>(n), 0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double t0 = entry_[i];
    const double y = exit_[i];
    if (!std::isfinite(t0) || !std::isfinite(y))
      throw DataError(fmt::format("row {}: non-finite time", i + 1));
    if (!(y > 0.0)) throw DataError(fmt::format("row {}: exit time must be > 0 (got {})", i + 1, y));
    if (t0 < 0.0) throw DataError(fmt::format("row {}: entry time must be >= 0 (got {})", i + 1, t0));
    if (!(y > t0))
      throw DataError(fmt::format("row {}: exit time {} must exceed entry time {}", i + 1, y, t0));
    if (event_[i] != 0 && event_[i] != 1)
      throw DataError(fmt::format("row {}: event must be 0 or 1 (got {})", i + 1, event_[i]));
    for (std::size_t j = 0; j < names_.size(); ++j)
      if (!std::isfinite(covariates_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))))
        throw DataError(fmt::format("row {}: covariate '{}' is not finite", i + 1, names_[j]));
    n_events_ += static_cast<std::size_t>(event_[i]);
    delayed_ = delayed_ || t0 > 0.0;
  }
}

SurvivalDataset SurvivalDataset::without_entry(std::vector<double> exit, std::vector<int> event,
                                               RowMatrix covariates,
                                               std::vector<std::string> covariate_names) {
  std::vector<double> entry(exit.size(), 0.0);
  return SurvivalDataset(std::move(entry), std::move(exit), std::move(event),
                         std::move(covariates), std::move(covariate_names));
}

std::size_t SurvivalDataset::covariate_index(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw DataError(fmt::format("unknown covariate '{}'", name));
  return static_cast<std::size_t>(it - names_.begin());
}

SurvivalDataset SurvivalDataset::select(const std::vector<std::string>& names) const {
  RowMatrix x(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j)
    x.col(static_cast<Eigen::Index>(j)) =
        covariates_.col(static_cast<Eigen::Index>(covariate_index(names[j])));
  return SurvivalDataset(entry_, exit_, event_, std::move(x), names);
}

std::uint64_t SurvivalDataset::checksum() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* p, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t n = size();
  const std::uint64_t p = n_covariates();
  mix(&n, sizeof n);
  mix(&p, sizeof p);
  mix(entry_.data(), entry_.size() * sizeof(double));
  mix(exit_.data(), exit_.size() * sizeof(double));
  mix(event_.data(), event_.size() * sizeof(int));
  mix(covariates_.data(), static_cast<std::size_t>(covariates_.size()) * sizeof(double));
  return h;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& field, std::size_t row, const std::string& column) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || field.empty())
    throw DataError(fmt::format("row {}, column '{}': cannot parse '{}' as a number", row,
                                column, field));
  return value;
}

}  // namespace

SurvivalDataset read_csv(const std::filesystem::path& path, const ColumnMapping& columns) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  std::string line;
  if (!std::getline(in, line)) throw DataError(fmt::format("'{}' is empty", path.string()));
  const auto header = split_csv_line(line);
  auto find_column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw DataError(fmt::format("column '{}' not found in '{}'", name, path.string()));
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t time_col = find_column(columns.time);
  const std::size_t event_col = find_column(columns.event);
  const std::optional<std::size_t> entry_col =
      columns.entry.empty() ? std::nullopt : std::optional(find_column(columns.entry));
  std::vector<std::size_t> cov_cols;
  for (const auto& c : columns.covariates) cov_cols.push_back(find_column(c));

  std::vector<double> entry, exit;
  std::vector<int> event;
  std::vector<double> cov_values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw DataError(fmt::format("row {}: expected {} fields, found {}", row, header.size(),
                                  fields.size()));
    exit.push_back(parse_number(fields[time_col], row, columns.time));
    const double d = parse_number(fields[event_col], row, columns.event);
    if (d != 0.0 && d != 1.0)
      throw DataError(fmt::format("row {}, column '{}': event must be 0 or 1 (got {})", row,
                                  columns.event, fields[event_col]));
    event.push_back(static_cast<int>(d));
    entry.push_back(entry_col ? parse_number(fields[*entry_col], row, columns.entry) : 0.0);
    for (std::size_t j = 0; j < cov_cols.size(); ++j)
      cov_values.push_back(parse_number(fields[cov_cols[j]], row, columns.covariates[j]));
  }
  RowMatrix x(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(cov_cols.size()));
  std::copy(cov_values.begin(), cov_values.end(), x.data());
  return SurvivalDataset(std::move(entry), std::move(exit), std::move(event), std::move(x),
                         columns.covariates);
}

void write_csv(const std::filesystem::path& path, const SurvivalDataset& data) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  out << "entry,time,event";
  for (const auto& name : data.covariate_names()) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << fmt::format("{},{},{}", data.entry(i), data.exit(i), data.event(i));
    for (double v : data.covariates(i)) out << fmt::format(",{}", v);
    out << '\n';
  }
}

double StepFunctionEstimate::at(double t) const {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return initial_value;
  return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

namespace {

struct RiskTable {
  std::vector<double> times;
  std::vector<double> n_risk;
  std::vector<double> n_events;
};

RiskTable risk_table(const SurvivalDataset& data) {
  std::map<double, double> events;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (data.event(i) == 1) events[data.exit(i)] += 1.0;
  std::vector<double> exits = data.exits();
  std::vector<double> entries = data.entries();
  std::sort(exits.begin(), exits.end());
  std::sort(entries.begin(), entries.end());
  RiskTable table;
  for (const auto& [t, d] : events) {
    // at risk: entry < t <= exit, i.e. #{exit >= t} - #{entry >= t}
    const auto exit_ge =
        exits.end() - std::lower_bound(exits.begin(), exits.end(), t);
    const auto entry_ge =
        entries.end() - std::lower_bound(entries.begin(), entries.end(), t);
    table.times.push_back(t);
    table.n_risk.push_back(static_cast<double>(exit_ge - entry_ge));
    table.n_events.push_back(d);
  }
  return table;
}

}  // namespace

StepFunctionEstimate kaplan_meier(const SurvivalDataset& data) {
  auto table = risk_table(data);
  StepFunctionEstimate km{std::move(table.times), {}, std::move(table.n_risk),
                          std::move(table.n_events), 1.0};
  double s = 1.0;
  for (std::size_t k = 0; k < km.times.size(); ++k) {
    s *= 1.0 - km.n_events[k] / km.n_risk[k];
    km.values.push_back(s);
  }
  return km;
}

StepFunctionEstimate nelson_aalen(const SurvivalDataset& data) {
  auto table = risk_table(data);
  StepFunctionEstimate na{std::move(table.times), {}, std::move(table.n_risk),
                          std::move(table.n_events), 0.0};
  double h = 0.0;
  for (std::size_t k = 0; k < na.times.size(); ++k) {
    h += na.n_events[k] / na.n_risk[k];
    na.values.push_back(h);
  }
  return na;
}

}  // namespace fpaft
