#include "lobsim/report.hpp"

#include <algorithm>
#include <json.hpp>

namespace lobsim {

namespace {

template <typename F>
void section(StatsReport& report, const char* name, F&& compute) {
  try {
    compute();
  } catch (const std::exception& e) {
    report.errors.push_back(std::string(name) + ": " + e.what());
  }
}

std::optional<TailReport> fit_tail(std::span<const double> samples) {
  TailReport t;
  t.fit = stats::fit_powerlaw_tail(samples);
  t.llr = stats::llr_powerlaw_vs_lognormal(samples, t.fit.x_min);
  return t;
}

nlohmann::json tail_json(const TailReport& t) {
  return {{"alpha", t.fit.alpha},      {"kappa", t.fit.kappa}, {"x_min", t.fit.x_min},
          {"ks_distance", t.fit.ks_distance}, {"n_tail", t.fit.n_tail}, {"R", t.llr.R},
          {"p", t.llr.p}};
}

}  // namespace

StatsReport compute_report(std::span<const double> prices, const ReportOptions& options) {
  StatsReport report;
  report.tau = options.tau;
  report.window = options.window;
  report.fundamental_only = options.fundamental_only;
  const std::vector<double> r = stats::log_returns(prices, options.tau);
  report.n_returns = r.size();

  const std::size_t lag = std::min(options.max_lag, r.empty() ? 0 : r.size() - 1);
  section(report, "acf", [&] { report.acf = stats::acf(r, lag); });
  section(report, "abs_acf", [&] {
    std::vector<double> a(r.size());
    std::transform(r.begin(), r.end(), a.begin(), [](double v) { return std::abs(v); });
    report.abs_acf = stats::acf(a, lag);
  });
  section(report, "moments", [&] { report.moments = stats::moments(r); });

  std::vector<double> neg;
  std::vector<double> pos;
  for (double v : r) {
    if (v < 0.0) neg.push_back(-v);
    if (v > 0.0) pos.push_back(v);
  }
  section(report, "tail_neg", [&] { report.tail_neg = fit_tail(neg); });
  section(report, "tail_pos", [&] { report.tail_pos = fit_tail(pos); });
  section(report, "vol_ks", [&] {
    report.vol_ks = stats::lognormal_ks(stats::volatility_series(r, options.window));
  });
  return report;
}

std::string render_report(const StatsReport& report) {
  nlohmann::ordered_json j;
  j["tau"] = report.tau;
  j["window"] = report.window;
  j["n_returns"] = report.n_returns;
  if (report.acf) j["acf"] = *report.acf;
  if (report.abs_acf) j["abs_acf"] = *report.abs_acf;
  if (report.moments) {
    j["mean"] = report.moments->mean;
    j["variance"] = report.moments->variance;
    j["skewness"] = report.moments->skewness;
    j["kurtosis_raw"] = report.moments->kurtosis_raw;
    j["kurtosis_excess"] = report.moments->kurtosis_excess;
  }
  if (report.tail_neg) j["tail_neg"] = tail_json(*report.tail_neg);
  if (report.tail_pos) j["tail_pos"] = tail_json(*report.tail_pos);
  if (report.tail_neg && report.tail_pos) {
    j["kappa_diff"] = report.tail_neg->fit.kappa - report.tail_pos->fit.kappa;
  }
  if (report.vol_ks) {
    nlohmann::ordered_json v = {{"D", report.vol_ks->D},
                                {"p", report.vol_ks->p_value},
                                {"mu", report.vol_ks->mu},
                                {"sigma", report.vol_ks->sigma},
                                {"n", report.vol_ks->n},
                                {"p_is_asymptotic", true}};
    if (report.fundamental_only) v["population"] = "fundamental_only";
    j["vol_ks"] = std::move(v);
  }
  j["errors"] = report.errors;
  return j.dump(2) + "\n";
}

}  // namespace lobsim
