#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lobsim/config.hpp"
#include "lobsim/report.hpp"

namespace lobsim {

enum class SweepAxis { none, gamma, tech_fraction };

SweepAxis parse_sweep_axis(const std::string& name);
const char* sweep_axis_name(SweepAxis axis);

struct ExperimentSpec {
  SimConfig base;
  SweepAxis axis{SweepAxis::none};
  std::vector<double> values;  // ignored for SweepAxis::none
  std::size_t runs{1};
  std::size_t jobs{1};
  ReportOptions report;

  void validate() const;
  /// One entry per sweep cell; {NaN} when there is no sweep.
  [[nodiscard]] std::vector<double> cells() const;
};

/// Configuration of run `run_index` in sweep cell `value_index`. The seed is
/// derive_seed(base.seed, value_index, run_index).
SimConfig config_for(const ExperimentSpec& spec, std::size_t value_index,
                     std::size_t run_index);

/// Metrics kept from one run. Missing sections are NaN.
struct RunSummary {
  std::size_t value_index{0};
  std::size_t run_index{0};
  std::uint64_t seed{0};
  bool ok{false};
  std::string error;  // abort or analysis failure when !ok
  double skewness{0.0};
  double kurtosis{0.0};  // raw
  double kappa_neg{0.0};
  double kappa_pos{0.0};
  double kappa_diff{0.0};
  double R_neg{0.0};
  double p_neg{0.0};
  double R_pos{0.0};
  double p_pos{0.0};
  double vol_ks_p{0.0};
  double volume_mean{0.0};
  double volume_cv{0.0};
  double volume_p999{0.0};
};

/// Runs one configuration and reduces it to a RunSummary. Never throws for
/// aborted runs; they come back with ok == false. The full report of a
/// completed run is copied to `full` when given.
RunSummary summarize_run(const SimConfig& config, const ReportOptions& report,
                         std::size_t value_index = 0, std::size_t run_index = 0,
                         StatsReport* full = nullptr);

struct MetricStats {
  double mean{0.0};
  std::optional<double> sd;  // sample sd; empty with fewer than two values
  std::size_t n{0};
};

struct CellSummary {
  double value{0.0};
  std::size_t completed{0};
  std::size_t failed{0};
  MetricStats skewness, kurtosis, kappa_neg, kappa_pos, kappa_diff, R_neg, p_neg, R_pos, p_pos,
      vol_ks_p;
};

/// Aggregates per sweep cell. Runs are ordered by (value_index, run_index)
/// first, so the result does not depend on completion order.
std::vector<CellSummary> aggregate(const ExperimentSpec& spec, std::vector<RunSummary> runs);

using ProgressFn = std::function<void(const RunSummary&)>;

/// Executes every run with up to `spec.jobs` worker threads. The result is
/// sorted by (value_index, run_index).
std::vector<RunSummary> run_ensemble(const ExperimentSpec& spec, const ProgressFn& progress = {});

void write_summary_csv(std::ostream& out, const ExperimentSpec& spec,
                       const std::vector<CellSummary>& cells);
void write_runs_csv(std::ostream& out, const ExperimentSpec& spec,
                    const std::vector<RunSummary>& runs);

}  // namespace lobsim
