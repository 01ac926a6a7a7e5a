#include "lobsim/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

#include "lobsim/engine.hpp"
#include "lobsim/rng.hpp"
#include "lobsim/series_io.hpp"

namespace lobsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

MetricStats metric(const std::vector<RunSummary>& runs, double RunSummary::*field) {
  MetricStats m;
  double sum = 0.0;
  for (const RunSummary& r : runs) {
    if (!r.ok || !std::isfinite(r.*field)) continue;
    sum += r.*field;
    ++m.n;
  }
  if (m.n == 0) {
    m.mean = kNaN;
    return m;
  }
  m.mean = sum / static_cast<double>(m.n);
  if (m.n >= 2) {
    double ss = 0.0;
    for (const RunSummary& r : runs) {
      if (!r.ok || !std::isfinite(r.*field)) continue;
      ss += (r.*field - m.mean) * (r.*field - m.mean);
    }
    m.sd = std::sqrt(ss / static_cast<double>(m.n - 1));
  }
  return m;
}

void put(std::ostream& out, double v) {
  if (std::isfinite(v)) out << v;
}

void put(std::ostream& out, const MetricStats& m) {
  put(out, m.mean);
  out << ',';
  if (m.sd) put(out, *m.sd);
}

bool by_index(const RunSummary& a, const RunSummary& b) {
  return std::tie(a.value_index, a.run_index) < std::tie(b.value_index, b.run_index);
}

}  // namespace

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "none") return SweepAxis::none;
  if (name == "gamma") return SweepAxis::gamma;
  if (name == "tech_fraction") return SweepAxis::tech_fraction;
  throw ConfigError("unknown sweep axis '" + name + "'", "sweep");
}

const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::gamma: return "gamma";
    case SweepAxis::tech_fraction: return "tech_fraction";
    case SweepAxis::none: break;
  }
  return "none";
}

void ExperimentSpec::validate() const {
  base.validate();
  if (runs < 1) throw ConfigError("ensemble size must be >= 1", "runs");
  if (jobs < 1) throw ConfigError("parallelism must be >= 1", "jobs");
  if (axis != SweepAxis::none && values.empty()) {
    throw ConfigError("a sweep needs at least one value", "values");
  }
  for (std::size_t i = 0; i < cells().size(); ++i) config_for(*this, i, 0).validate();
}

std::vector<double> ExperimentSpec::cells() const {
  if (axis == SweepAxis::none) return {kNaN};
  return values;
}

SimConfig config_for(const ExperimentSpec& spec, std::size_t value_index,
                     std::size_t run_index) {
  SimConfig cfg = spec.base;
  const std::vector<double> cells = spec.cells();
  const double v = cells.at(value_index);
  switch (spec.axis) {
    case SweepAxis::gamma:
      cfg.gamma = v;
      break;
    case SweepAxis::tech_fraction:
      if (!(v >= 0.0)) throw ConfigError("tech_fraction must be >= 0", "values");
      cfg = v == 0.0 ? without_technicals(cfg) : with_technical_ratio(cfg, v);
      break;
    case SweepAxis::none:
      break;
  }
  cfg.seed = derive_seed(spec.base.seed, value_index, run_index);
  return cfg;
}

RunSummary summarize_run(const SimConfig& config, const ReportOptions& report,
                         std::size_t value_index, std::size_t run_index, StatsReport* full) {
  RunSummary s;
  s.value_index = value_index;
  s.run_index = run_index;
  s.seed = config.seed;
  SeriesRecord record;
  try {
    record = run(config, RunOptions{.trade_log = false});
  } catch (const RunAborted& e) {
    s.error = e.what();
    return s;
  }
  const std::vector<double> prices = close_prices(record);
  StatsReport rep;
  try {
    rep = compute_report(prices, report);
  } catch (const std::exception& e) {
    s.error = e.what();
    return s;
  }
  s.ok = true;
  s.skewness = rep.moments ? rep.moments->skewness : kNaN;
  s.kurtosis = rep.moments ? rep.moments->kurtosis_raw : kNaN;
  s.kappa_neg = rep.tail_neg ? rep.tail_neg->fit.kappa : kNaN;
  s.kappa_pos = rep.tail_pos ? rep.tail_pos->fit.kappa : kNaN;
  s.kappa_diff = s.kappa_neg - s.kappa_pos;
  s.R_neg = rep.tail_neg ? rep.tail_neg->llr.R : kNaN;
  s.p_neg = rep.tail_neg ? rep.tail_neg->llr.p : kNaN;
  s.R_pos = rep.tail_pos ? rep.tail_pos->llr.R : kNaN;
  s.p_pos = rep.tail_pos ? rep.tail_pos->llr.p : kNaN;
  s.vol_ks_p = rep.vol_ks ? rep.vol_ks->p_value : kNaN;
  if (full) *full = rep;

  if (!record.volume.empty()) {
    const double n = static_cast<double>(record.volume.size());
    double sum = 0.0;
    for (auto v : record.volume) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (auto v : record.volume) ss += (v - mean) * (v - mean);
    s.volume_mean = mean;
    s.volume_cv = mean > 0.0 ? std::sqrt(ss / n) / mean : kNaN;
    std::vector<std::uint32_t> sorted(record.volume.begin(), record.volume.end());
    const auto k = static_cast<std::size_t>(std::ceil(0.999 * n)) - 1;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
    s.volume_p999 = sorted[k];
  }
  return s;
}

std::vector<CellSummary> aggregate(const ExperimentSpec& spec, std::vector<RunSummary> runs) {
  std::sort(runs.begin(), runs.end(), by_index);
  const std::vector<double> values = spec.cells();
  std::vector<CellSummary> out;
  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    std::vector<RunSummary> cell;
    for (const RunSummary& r : runs) {
      if (r.value_index == vi) cell.push_back(r);
    }
    CellSummary c;
    c.value = values[vi];
    for (const RunSummary& r : cell) (r.ok ? c.completed : c.failed) += 1;
    c.skewness = metric(cell, &RunSummary::skewness);
    c.kurtosis = metric(cell, &RunSummary::kurtosis);
    c.kappa_neg = metric(cell, &RunSummary::kappa_neg);
    c.kappa_pos = metric(cell, &RunSummary::kappa_pos);
    c.kappa_diff = metric(cell, &RunSummary::kappa_diff);
    c.R_neg = metric(cell, &RunSummary::R_neg);
    c.p_neg = metric(cell, &RunSummary::p_neg);
    c.R_pos = metric(cell, &RunSummary::R_pos);
    c.p_pos = metric(cell, &RunSummary::p_pos);
    c.vol_ks_p = metric(cell, &RunSummary::vol_ks_p);
    out.push_back(c);
  }
  return out;
}

std::vector<RunSummary> run_ensemble(const ExperimentSpec& spec, const ProgressFn& progress) {
  spec.validate();
  const std::size_t n_cells = spec.cells().size();
  const std::size_t total = n_cells * spec.runs;
  std::vector<RunSummary> results(total);
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const std::size_t vi = i / spec.runs;
      const std::size_t ri = i % spec.runs;
      results[i] = summarize_run(config_for(spec, vi, ri), spec.report, vi, ri);
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(results[i]);
      }
    }
  };

  const std::size_t n_threads = std::min(spec.jobs, total);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  return results;
}

void write_summary_csv(std::ostream& out, const ExperimentSpec& spec,
                       const std::vector<CellSummary>& cells) {
  const char* metrics[] = {"skewness", "kurtosis", "kappa_neg", "kappa_pos", "kappa_diff",
                           "R_neg",    "p_neg",    "R_pos",     "p_pos",     "vol_ks_p"};
  out << sweep_axis_name(spec.axis) << ",completed,failed";
  for (const char* m : metrics) out << ',' << m << "_mean," << m << "_sd";
  out << '\n';
  const auto old_precision = out.precision(10);
  for (const CellSummary& c : cells) {
    put(out, c.value);
    out << ',' << c.completed << ',' << c.failed;
    for (const MetricStats* m : {&c.skewness, &c.kurtosis, &c.kappa_neg, &c.kappa_pos,
                                 &c.kappa_diff, &c.R_neg, &c.p_neg, &c.R_pos, &c.p_pos,
                                 &c.vol_ks_p}) {
      out << ',';
      put(out, *m);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void write_runs_csv(std::ostream& out, const ExperimentSpec& spec,
                    const std::vector<RunSummary>& runs) {
  const std::vector<double> values = spec.cells();
  out << sweep_axis_name(spec.axis)
      << ",run,seed,ok,skewness,kurtosis,kappa_neg,kappa_pos,kappa_diff,R_neg,p_neg,R_pos,p_pos,"
         "vol_ks_p,volume_mean,volume_cv,volume_p999,error\n";
  const auto old_precision = out.precision(10);
  for (const RunSummary& r : runs) {
    put(out, values.at(r.value_index));
    out << ',' << r.run_index << ',' << r.seed << ',' << (r.ok ? 1 : 0);
    for (double v : {r.skewness, r.kurtosis, r.kappa_neg, r.kappa_pos, r.kappa_diff, r.R_neg,
                     r.p_neg, r.R_pos, r.p_pos, r.vol_ks_p, r.volume_mean, r.volume_cv,
                     r.volume_p999}) {
      out << ',';
      if (r.ok) put(out, v);
    }
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << ',' << err << '\n';
  }
  out.precision(old_precision);
}

}  // namespace lobsim
