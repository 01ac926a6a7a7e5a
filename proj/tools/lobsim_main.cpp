// lobsim: run, sweep and analyse the order-book market model.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 run aborted
// (illiquid book), 3 analysis error.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "lobsim/config_parser.hpp"
#include "lobsim/engine.hpp"
#include "lobsim/ensemble.hpp"
#include "lobsim/report.hpp"
#include "lobsim/series_io.hpp"

namespace fs = std::filesystem;
using namespace lobsim;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kAborted = 2;
constexpr int kAnalysis = 3;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::size_t tau = 1;
  std::size_t window = 30;
  std::size_t max_lag = 200;
  bool fundamental_only = false;
};

SimConfig load_config(const Common& c) {
  SimConfig cfg = c.config_path.empty() ? SimConfig{} : parse_config(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  if (c.fundamental_only) cfg = without_technicals(cfg);
  cfg.validate();
  return cfg;
}

ReportOptions report_options(const Common& c) {
  return {.tau = c.tau, .window = c.window, .max_lag = c.max_lag,
          .fundamental_only = c.fundamental_only};
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

nlohmann::ordered_json diagnostics_json(const Diagnostics& d) {
  return {{"liquidity_failures", d.liquidity_failures},
          {"limit_clamps", d.limit_clamps},
          {"self_trades", d.self_trades},
          {"expired_orders", d.expired_orders},
          {"bid_depth_after_warmup", d.bid_depth_after_warmup},
          {"ask_depth_after_warmup", d.ask_depth_after_warmup},
          {"final_bid_depth", d.final_bid_depth},
          {"final_ask_depth", d.final_ask_depth}};
}

int cmd_run(const Common& c, bool trade_log) {
  const SimConfig cfg = load_config(c);
  fs::create_directories(c.out_dir);
  const fs::path dir = c.out_dir;

  nlohmann::ordered_json meta;
  meta["seed"] = cfg.seed;
  meta["config"] = format_config(cfg);
  SeriesRecord record;
  try {
    record = run(cfg, RunOptions{.trade_log = trade_log});
  } catch (const RunAborted& e) {
    meta["aborted_at_step"] = e.step();
    meta["diagnostics"] = diagnostics_json(e.diagnostics());
    write_file(dir / "run.json", meta.dump(2) + "\n");
    std::cerr << "run aborted at step " << e.step() << ": " << e.what() << '\n';
    return kAborted;
  }
  meta["diagnostics"] = diagnostics_json(record.diagnostics);
  meta["news_events"] = record.news.size();
  write_file(dir / "run.json", meta.dump(2) + "\n");

  std::ostringstream series;
  write_series_csv(series, record);
  write_file(dir / "series.csv", series.str());
  if (trade_log) {
    std::ostringstream trades;
    write_trade_log_csv(trades, record);
    write_file(dir / "trades.csv", trades.str());
  }

  StatsReport rep;
  try {
    rep = compute_report(close_prices(record), report_options(c));
  } catch (const std::exception& e) {
    std::cerr << "analysis failed: " << e.what() << '\n';
    return kAnalysis;
  }
  write_file(dir / "report.json", render_report(rep));
  for (const auto& err : rep.errors) std::cerr << "warning: " << err << '\n';
  return kOk;
}

int cmd_analyze(const Common& c, const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) {
    std::cerr << "cannot open " << csv_path << '\n';
    return kUsage;
  }
  StatsReport rep;
  try {
    rep = compute_report(read_close_column(in), report_options(c));
  } catch (const std::exception& e) {
    std::cerr << "analysis failed: " << e.what() << '\n';
    return kAnalysis;
  }
  fs::create_directories(c.out_dir);
  write_file(fs::path(c.out_dir) / "report.json", render_report(rep));
  for (const auto& err : rep.errors) std::cerr << "error: " << err << '\n';
  return rep.ok() ? kOk : kAnalysis;
}

int cmd_ensemble(const Common& c, const std::string& sweep, const std::vector<double>& values,
                 std::size_t runs, std::size_t jobs) {
  ExperimentSpec spec;
  spec.base = load_config(c);
  spec.axis = parse_sweep_axis(sweep);
  spec.values = values;
  spec.runs = runs;
  spec.jobs = jobs;
  spec.report = report_options(c);
  spec.validate();

  const std::size_t total = spec.cells().size() * spec.runs;
  std::size_t done = 0;
  auto results = run_ensemble(spec, [&](const RunSummary& r) {
    ++done;
    std::cerr << '[' << done << '/' << total << "] cell " << r.value_index << " run "
              << r.run_index << (r.ok ? "" : " FAILED: " + r.error) << '\n';
  });

  fs::create_directories(c.out_dir);
  const fs::path dir = c.out_dir;
  std::ostringstream summary;
  write_summary_csv(summary, spec, aggregate(spec, results));
  write_file(dir / "summary.csv", summary.str());
  std::ostringstream per_run;
  write_runs_csv(per_run, spec, results);
  write_file(dir / "runs.csv", per_run.str());
  std::cout << summary.str();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based limit order book market simulator"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool with_sim) {
    if (with_sim) {
      sub->add_option("--config", common.config_path, "config file (key = value)")
          ->check(CLI::ExistingFile);
      sub->add_option("--seed", common.seed, "root seed, overrides the config");
      sub->add_flag("--fundamental-only", common.fundamental_only,
                    "drop all technical agents");
    } else {
      sub->add_flag("--fundamental-only", common.fundamental_only,
                    "tag the report as a fundamental-only series");
    }
    sub->add_option("--out", common.out_dir, "output directory")->capture_default_str();
    sub->add_option("--tau", common.tau, "return lag in steps")
        ->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--window", common.window, "volatility window")
        ->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--max-lag", common.max_lag, "largest ACF lag")->capture_default_str();
  };

  bool trade_log = false;
  auto* run_cmd = app.add_subcommand("run", "simulate one run and write series, report");
  add_common(run_cmd, true);
  run_cmd->add_flag("--trade-log", trade_log, "also write trades.csv");

  std::string sweep = "none";
  std::vector<double> values;
  std::size_t runs = 1;
  std::size_t jobs = 1;
  auto* ens_cmd = app.add_subcommand("ensemble", "run seeded ensembles over a parameter sweep");
  add_common(ens_cmd, true);
  ens_cmd->add_option("--sweep", sweep, "gamma | tech_fraction | none")
      ->check(CLI::IsMember({"gamma", "tech_fraction", "none"}))->capture_default_str();
  ens_cmd->add_option("--values", values, "comma-separated sweep values")->delimiter(',');
  ens_cmd->add_option("--runs", runs, "runs per sweep value")
      ->check(CLI::PositiveNumber)->capture_default_str();
  ens_cmd->add_option("--jobs", jobs, "worker threads")
      ->check(CLI::PositiveNumber)->capture_default_str();

  std::string csv_path;
  auto* ana_cmd = app.add_subcommand("analyze", "stylized-fact report of a CSV price series");
  ana_cmd->add_option("csv", csv_path, "CSV with a close column")->required();
  add_common(ana_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(common, trade_log);
    if (*ens_cmd) return cmd_ensemble(common, sweep, values, runs, jobs);
    if (*ana_cmd) return cmd_analyze(common, csv_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error";
    if (!e.key().empty()) std::cerr << " [" << e.key() << "]";
    if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
    std::cerr << ": " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
