#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <random>
#include <sstream>

#include "lobsim/config_parser.hpp"
#include "lobsim/engine.hpp"
#include "lobsim/report.hpp"
#include "lobsim/series_io.hpp"

using namespace lobsim;

namespace {

SimConfig tiny() {
  SimConfig c;
  c.n_fundamental = 200;
  c.groups = {{400, 200, 60}};
  c.steps = 3000;
  c.seed = 11;
  c.liquidity_failure = LiquidityPolicy::skip;
  return c;
}

int error_line(std::string_view text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string error_key(std::string_view text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("empty config gives the defaults") {
  const SimConfig c = parse_config_text("");
  const SimConfig d;
  CHECK(c.n_fundamental == d.n_fundamental);
  CHECK(c.n_technical() == 1500);
  CHECK(c.gamma == d.gamma);
  CHECK(c.steps == d.steps);
  CHECK(format_config(c) == format_config(d));
  CHECK(format_config(parse_config_text("# only a comment\n\n   \n")) == format_config(d));
}

TEST_CASE("config overrides") {
  const SimConfig c = parse_config_text(
      "gamma = 0.0025   # trailing comment\n"
      "p_f = 21..24\n"
      "t_wait = 5..10\n"
      "liquidity_failure = skip\n"
      "symmetric_profit_taking = yes\n");
  CHECK(c.gamma == 0.0025);
  CHECK(c.p_f.lo == 21.0);
  CHECK(c.p_f.hi == 24.0);
  CHECK(c.t_wait.lo == 5);
  CHECK(c.t_wait.hi == 10);
  CHECK(c.liquidity_failure == LiquidityPolicy::skip);
  CHECK(c.symmetric_profit_taking);
  CHECK(c.n_fundamental == 1000);
}

TEST_CASE("group lines replace the default groups") {
  const SimConfig two = parse_config_text("group = 600,300,10\ngroup = 500,100,20\n");
  REQUIRE(two.groups.size() == 2);
  CHECK(two.groups[1].slow_window == 500);
  CHECK(two.groups[1].fast_window == 100);
  CHECK(two.groups[1].count == 20);
  CHECK(parse_config_text("group = none\n").groups.empty());
  CHECK(parse_config_text("group = none\n").effective_warmup() == 0);
}

TEST_CASE("config errors name the key and line") {
  CHECK(error_key("p_active = 1.5\n") == "p_active");
  CHECK(error_line("gamma = 0.01\n\nbogus = 3\n") == 3);
  CHECK(error_key("gamma = 0.01\ngamma = 0.02\n") == "gamma");
  CHECK(error_line("gamma 0.01\n") == 1);
  CHECK(error_key("n_fundamental = many\n") == "n_fundamental");
  CHECK(error_key("group = 100,200,5\n") == "group");
  CHECK(error_key("p_f = 25..20\n") == "p_f");
  CHECK(error_key("T = 3000\n") == "T");  // shorter than the slow window
}

TEST_CASE("formatted configs parse back to themselves") {
  SimConfig c = tiny();
  c.gamma = 0.15;
  c.sigma_dpf = 0.1 + 0.2;
  c.max_resting_age = 77;
  c.warmup_steps = 900;
  const std::string text = format_config(c);
  CHECK(text.find("0.15\n") != std::string::npos);
  CHECK(format_config(parse_config_text(text)) == text);
  const SimConfig back = parse_config_text(text);
  CHECK(back.sigma_dpf == c.sigma_dpf);
  CHECK(back.groups.size() == 1);
  CHECK(*back.warmup_steps == 900);
  CHECK(format_config(parse_config_text(format_config(without_technicals(c)))) ==
        format_config(without_technicals(c)));
}

TEST_CASE("series CSV reading") {
  std::istringstream ok("step,close,volume\n0,22.5,3\n1,22.5001,0\n");
  const auto v = read_close_column(ok);
  REQUIRE(v.size() == 2);
  CHECK(v[1] == 22.5001);

  std::istringstream reordered("volume,close\n1,10\n2,11\n");
  CHECK(read_close_column(reordered).size() == 2);
  std::istringstream missing("step,price\n0,1\n");
  CHECK_THROWS_AS(read_close_column(missing), SeriesFormatError);
  std::istringstream ragged("step,close\n0\n");
  CHECK_THROWS_AS(read_close_column(ragged), SeriesFormatError);
  std::istringstream garbage("close\nabc\n");
  CHECK_THROWS_AS(read_close_column(garbage), SeriesFormatError);
  std::istringstream negative("close\n1\n-2\n");
  CHECK_THROWS_AS(read_close_column(negative), std::domain_error);
}

TEST_CASE("series CSV round trip keeps every column") {
  const auto rec = run(tiny(), {.trade_log = true});
  std::ostringstream out;
  write_series_csv(out, rec);
  std::istringstream in(out.str());
  CHECK(read_close_column(in) == close_prices(rec));

  std::string header;
  std::istringstream first(out.str());
  std::getline(first, header);
  CHECK(header == "step,close,volume,tech_active");

  std::ostringstream trades;
  write_trade_log_csv(trades, rec);
  std::size_t lines = 0;
  std::istringstream tl(trades.str());
  for (std::string line; std::getline(tl, line);) ++lines;
  CHECK(lines == rec.trades.size() + 1);
}

TEST_CASE("report of a constant series") {
  const std::vector<double> flat(500, 22.5);
  const StatsReport rep = compute_report(flat);
  CHECK(rep.n_returns == 499);
  CHECK_FALSE(rep.acf.has_value());
  CHECK_FALSE(rep.moments.has_value());
  CHECK_FALSE(rep.ok());
  const auto doc = nlohmann::json::parse(render_report(rep));
  CHECK_FALSE(doc.contains("acf"));
  CHECK_FALSE(doc.contains("skewness"));
  CHECK(doc["errors"].size() == rep.errors.size());
  CHECK_THROWS(compute_report(std::vector<double>{22.5}));
}

TEST_CASE("report of a random walk") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> z(0.0, 0.01);
  std::vector<double> prices{22.5};
  for (int i = 0; i < 20000; ++i) prices.push_back(prices.back() * std::exp(z(rng)));
  ReportOptions opt;
  opt.max_lag = 50;
  opt.fundamental_only = true;
  const StatsReport rep = compute_report(prices, opt);
  CHECK(rep.ok());
  REQUIRE(rep.acf.has_value());
  CHECK(rep.acf->size() == 51);
  CHECK(rep.moments->kurtosis_raw == doctest::Approx(3.0).epsilon(0.05));
  const auto doc = nlohmann::json::parse(render_report(rep));
  CHECK(doc["vol_ks"]["population"] == "fundamental_only");
  CHECK(doc["vol_ks"]["p_is_asymptotic"] == true);
  CHECK(doc["kappa_diff"].get<double>() ==
        doctest::Approx(rep.tail_neg->fit.kappa - rep.tail_pos->fit.kappa));
  // the CCDF exponent gap equals the density exponent gap
  CHECK(rep.tail_neg->fit.alpha - rep.tail_pos->fit.alpha ==
        doctest::Approx(rep.tail_neg->fit.kappa - rep.tail_pos->fit.kappa));
  CHECK(render_report(rep) == render_report(compute_report(prices, opt)));
}

TEST_CASE("report from the CSV matches the report from memory") {
  const auto rec = run(tiny());
  std::ostringstream out;
  write_series_csv(out, rec);
  std::istringstream in(out.str());
  CHECK(render_report(compute_report(read_close_column(in))) ==
        render_report(compute_report(close_prices(rec))));
}

TEST_CASE("coarser return lag") {
  std::mt19937_64 rng(78);
  std::normal_distribution<double> z(0.0, 0.01);
  std::vector<double> prices{22.5};
  for (int i = 0; i < 5000; ++i) prices.push_back(prices.back() * std::exp(z(rng)));
  ReportOptions opt;
  opt.tau = 50;
  opt.max_lag = 20;
  const StatsReport rep = compute_report(prices, opt);
  CHECK(rep.tau == 50);
  CHECK(rep.n_returns == prices.size() - 50);
  // overlapping 50-step returns are strongly autocorrelated at short lags
  REQUIRE(rep.acf.has_value());
  CHECK((*rep.acf)[1] > 0.9);
}
