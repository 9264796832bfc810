#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fpaft {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Right-censored, possibly left-truncated survival data: one row per subject with
/// entry time t0 >= 0, exit time y > t0, event indicator d and a covariate vector.
///
/// Validated on construction and immutable afterwards. Times are never rescaled.
class SurvivalDataset {
 public:
  SurvivalDataset() = default;

  /// Throws DataError naming the first offending row (1-based) if any invariant fails.
  SurvivalDataset(std::vector<double> entry, std::vector<double> exit, std::vector<int> event,
                  RowMatrix covariates, std::vector<std::string> covariate_names);

  /// Dataset without delayed entry.
  static SurvivalDataset without_entry(std::vector<double> exit, std::vector<int> event,
                                       RowMatrix covariates,
                                       std::vector<std::string> covariate_names);

  std::size_t size() const { return exit_.size(); }
  std::size_t n_covariates() const { return names_.size(); }
  std::size_t n_events() const { return n_events_; }
  bool has_delayed_entry() const { return delayed_; }

  double entry(std::size_t i) const { return entry_[i]; }
  double exit(std::size_t i) const { return exit_[i]; }
  int event(std::size_t i) const { return event_[i]; }
  std::span<const double> covariates(std::size_t i) const {
    return {covariates_.data() + i * names_.size(), names_.size()};
  }

  const std::vector<double>& entries() const { return entry_; }
  const std::vector<double>& exits() const { return exit_; }
  const std::vector<int>& events() const { return event_; }
  const RowMatrix& covariate_matrix() const { return covariates_; }
  const std::vector<std::string>& covariate_names() const { return names_; }

  /// Index of a covariate by name; throws DataError if absent.
  std::size_t covariate_index(const std::string& name) const;

  /// New dataset keeping only the named covariates, in the given order.
  SurvivalDataset select(const std::vector<std::string>& names) const;

  /// FNV-1a hash over the numeric content; identifies the data a model was fitted to.
  std::uint64_t checksum() const;

 private:
  std::vector<double> entry_;
  std::vector<double> exit_;
  std::vector<int> event_;
  RowMatrix covariates_;
  std::vector<std::string> names_;
  std::size_t n_events_ = 0;
  bool delayed_ = false;
};

/// Which CSV columns hold what. An empty `entry` means no delayed entry (t0 = 0).
struct ColumnMapping {
  std::string time = "time";
  std::string event = "event";
  std::string entry;
  std::vector<std::string> covariates;
};

/// Reads a header-first CSV. Parse failures report the row and column; invariant
/// violations report the row (both 1-based data rows).
SurvivalDataset read_csv(const std::filesystem::path& path, const ColumnMapping& columns);

/// Writes entry,time,event,<covariates...> with round-trip precision.
void write_csv(const std::filesystem::path& path, const SurvivalDataset& data);

/// Right-continuous step function with jumps at the distinct event times.
struct StepFunctionEstimate {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> n_risk;
  std::vector<double> n_events;
  double initial_value = 1.0;

  /// Value at t: the last jump at or before t, `initial_value` before the first jump.
  double at(double t) const;
};

/// Product-limit estimate with risk sets {i : t0_i < t <= y_i}; subjects censored at an
/// event time are still at risk at it (events precede censorings).
StepFunctionEstimate kaplan_meier(const SurvivalDataset& data);

/// Cumulative hazard with increments d(t) / n_risk(t), same risk sets as kaplan_meier.
StepFunctionEstimate nelson_aalen(const SurvivalDataset& data);

}  // namespace fpaft
