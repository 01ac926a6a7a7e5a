#include <doctest.h>

#include <cmath>
#include <random>

#include "lobsim/stats.hpp"
#include "samplers.hpp"

using namespace lobsim::stats;
using lobsim::testing::pareto_sample;

TEST_CASE("log returns") {
  const std::vector<double> flat(10, 22.5);
  for (double r : log_returns(flat)) CHECK(r == 0.0);
  const std::vector<double> two{22.5, 22.725};
  CHECK(log_returns(two)[0] == doctest::Approx(0.00995033).epsilon(1e-6));
  std::vector<double> hundred(100);
  for (std::size_t i = 0; i < 100; ++i) hundred[i] = 1.0 + static_cast<double>(i);
  CHECK(log_returns(hundred, 50).size() == 50);
  CHECK_THROWS_AS(log_returns(std::vector<double>{1.0, 0.0, 2.0}), std::domain_error);
  CHECK_THROWS(log_returns(two, 2));
}

TEST_CASE("autocorrelation") {
  std::vector<double> alt(1000);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? -1.0 : 1.0;
  const auto rho = acf(alt, 5);
  CHECK(rho[0] == 1.0);
  CHECK(rho[1] == doctest::Approx(-1.0).epsilon(0.01));
  CHECK_THROWS_AS(acf(std::vector<double>(50, 3.0), 5), std::domain_error);
  CHECK_THROWS(acf(alt, 1000));

  std::mt19937_64 rng(8);
  std::normal_distribution<double> z;
  std::vector<double> noise(10000);
  for (auto& v : noise) v = z(rng);
  const auto w = acf(noise, 100);
  int inside = 0;
  for (std::size_t k = 1; k <= 100; ++k) inside += std::abs(w[k]) < 3.0 / std::sqrt(10000.0);
  CHECK(inside >= 99);

  std::vector<double> scaled(noise.size());
  for (std::size_t i = 0; i < noise.size(); ++i) scaled[i] = -4.0 * noise[i] + 17.0;
  const auto s = acf(scaled, 20);
  for (std::size_t k = 0; k <= 20; ++k) CHECK(s[k] == doctest::Approx(w[k]).epsilon(1e-9));
}

TEST_CASE("moments") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> z;
  std::vector<double> normal(1000000);
  for (auto& v : normal) v = z(rng);
  const auto m = moments(normal);
  CHECK(m.kurtosis_raw >= 2.95);
  CHECK(m.kurtosis_raw <= 3.05);
  CHECK(m.kurtosis_excess == doctest::Approx(m.kurtosis_raw - 3.0));

  std::exponential_distribution<double> e(1.0);
  std::vector<double> expo(1000000);
  for (auto& v : expo) v = e(rng);
  CHECK(std::abs(moments(expo).skewness - 2.0) < 0.05);

  std::vector<double> two(1000);
  for (std::size_t i = 0; i < two.size(); ++i) two[i] = i % 2 ? -1.0 : 1.0;
  CHECK(moments(two).skewness == doctest::Approx(0.0));

  std::vector<double> neg(expo.size());
  for (std::size_t i = 0; i < expo.size(); ++i) neg[i] = -expo[i];
  CHECK(moments(neg).skewness == doctest::Approx(-moments(expo).skewness));
  CHECK(moments(neg).kurtosis_raw == doctest::Approx(moments(expo).kurtosis_raw));

  CHECK_THROWS(moments(std::vector<double>{1, 2, 3}));
  CHECK_THROWS_AS(moments(std::vector<double>(10, 1.0)), std::domain_error);
}

TEST_CASE("volatility series") {
  const std::vector<double> c(50, -0.02);
  const auto v = volatility_series(c, 30);
  CHECK(v.size() == 21);
  for (double x : v) CHECK(x == doctest::Approx(0.02));
  const auto alt = volatility_series(std::vector<double>{1, -1, 1}, 2);
  REQUIRE(alt.size() == 2);
  CHECK(alt[0] == 1.0);
  CHECK(alt[1] == 1.0);

  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  std::vector<double> r(500);
  for (auto& x : r) x = z(rng);
  const auto vol = volatility_series(r, 7);
  for (std::size_t t = 0; t < vol.size(); ++t) {
    double biggest = 0.0;
    for (std::size_t k = 0; k < 7; ++k) biggest = std::max(biggest, std::abs(r[t + k]));
    CHECK(vol[t] >= 0.0);
    CHECK(vol[t] <= biggest);
  }
}

TEST_CASE("ccdf") {
  const auto c = ccdf(std::vector<double>{3, 1, 2});
  REQUIRE(c.size() == 3);
  CHECK(c[0].value == 1.0);
  CHECK(c[0].tail == doctest::Approx(2.0 / 3.0));
  CHECK(c[1].tail == doctest::Approx(1.0 / 3.0));
  CHECK(c[2].tail == 0.0);
  CHECK(ccdf(std::vector<double>{5, 5, 5, 6}).size() == 2);
  CHECK_THROWS(ccdf(std::vector<double>{}));

  std::mt19937_64 rng(6);
  const auto x = pareto_sample(rng, 3.0, 1.0, 50000);
  const auto pts = ccdf(x);
  // least-squares slope of log tail vs log value, away from the sparse end
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& p : pts) {
    if (p.tail < 0.01) break;
    const double lx = std::log(p.value);
    const double ly = std::log(p.tail);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly, ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-2.0).epsilon(0.05));
}

TEST_CASE("power-law fit recovers a Pareto exponent") {
  std::mt19937_64 rng(35);
  const auto x = pareto_sample(rng, 3.5, 1.0, 100000);
  const auto fit = fit_powerlaw_tail(x);
  CHECK(fit.alpha >= 3.4);
  CHECK(fit.alpha <= 3.6);
  CHECK(fit.kappa == doctest::Approx(fit.alpha - 1.0));
  CHECK(fit.n_tail >= 10);
  // the reported distance is the KS distance of the tail against the fit
  CHECK(powerlaw_ks_distance(x, fit.x_min, fit.alpha) ==
        doctest::Approx(fit.ks_distance).epsilon(1e-12));
}

TEST_CASE("power-law cutoff search finds a splice point") {
  std::mt19937_64 rng(36);
  std::uniform_real_distribution<double> body(0.1, 2.0);
  std::vector<double> x;
  for (int i = 0; i < 20000; ++i) x.push_back(body(rng));
  for (double v : pareto_sample(rng, 2.5, 2.0, 20000)) x.push_back(v);
  const auto fit = fit_powerlaw_tail(x);
  CHECK(fit.x_min >= 1.0);
  CHECK(fit.x_min <= 4.0);
  CHECK(fit.alpha == doctest::Approx(2.5).epsilon(0.05));
}

TEST_CASE("power-law fit failures") {
  CHECK_THROWS_AS(fit_powerlaw_tail(std::vector<double>(100, 2.0)), FitError);
  CHECK_THROWS(fit_powerlaw_tail(std::vector<double>(20, 2.0)));
  std::vector<double> with_zero(100, 1.0);
  with_zero[3] = 0.0;
  CHECK_THROWS_AS(fit_powerlaw_tail(with_zero), std::domain_error);
}

TEST_CASE("Pareto recovery within three standard errors") {
  std::mt19937_64 rng(37);
  int hits = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    const auto fit = fit_powerlaw_tail(pareto_sample(rng, 3.0, 1.0, 5000));
    const double se = (fit.alpha - 1.0) / std::sqrt(static_cast<double>(fit.n_tail));
    hits += std::abs(fit.alpha - 3.0) < 3.0 * se;
  }
  CHECK(hits >= 36);
}

TEST_CASE("Vuong statistic") {
  const std::vector<double> zero(50, 0.0);
  const auto r = vuong_test(zero);
  CHECK(r.R == 0.0);
  CHECK(r.p == 1.0);
  const std::vector<double> l{0.5, -0.1, 0.3, 0.2};
  const auto v = vuong_test(l);
  const double mean = 0.225;
  const double sd = std::sqrt(((0.275 * 0.275) + (0.325 * 0.325) + (0.075 * 0.075) +
                               (0.025 * 0.025)) / 4.0);
  CHECK(v.R == doctest::Approx(mean));
  CHECK(v.p == doctest::Approx(std::erfc(0.9 / (sd * std::sqrt(8.0)))));
}

TEST_CASE("likelihood ratio on power-law and lognormal tails") {
  std::mt19937_64 rng(38);
  // the truncated lognormal nests the power law as a limit, so on Pareto data
  // R hovers at zero; it must just not reject the power law
  int pl_rejected = 0;
  int ln_wins = 0;
  const int trials = 20;
  std::lognormal_distribution<double> ln(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    const auto pareto = pareto_sample(rng, 2.5, 1.0, 10000);
    const auto r = llr_powerlaw_vs_lognormal(pareto, 1.0);
    CHECK(r.p >= 0.0);
    CHECK(r.p <= 1.0);
    CHECK(std::abs(r.R) < 0.01);
    pl_rejected += r.R < 0.0 && r.p < 0.05;
    std::vector<double> l(10000);
    for (auto& v : l) v = ln(rng);
    ln_wins += llr_powerlaw_vs_lognormal(l, 1.0).R < 0.0;
  }
  CHECK(pl_rejected <= 3);
  CHECK(ln_wins >= 16);
}

TEST_CASE("truncated lognormal fit recovers its parameters") {
  std::mt19937_64 rng(39);
  std::lognormal_distribution<double> ln(0.3, 0.8);
  std::vector<double> tail;
  while (tail.size() < 50000) {
    const double v = ln(rng);
    if (v >= 1.5) tail.push_back(v);
  }
  const auto fit = fit_truncated_lognormal(tail, 1.5);
  CHECK(fit.mu == doctest::Approx(0.3).epsilon(0.1));
  CHECK(fit.sigma == doctest::Approx(0.8).epsilon(0.05));
  CHECK_THROWS_AS(llr_powerlaw_vs_lognormal(std::vector<double>(5, 2.0), 1.0), FitError);
}

TEST_CASE("Kolmogorov survival function") {
  CHECK(kolmogorov_sf(0.0) == 1.0);
  CHECK(kolmogorov_sf(1.0) == doctest::Approx(0.26999967).epsilon(1e-6));
  CHECK(kolmogorov_sf(1.36) == doctest::Approx(0.04939).epsilon(1e-3));
  CHECK(kolmogorov_sf(0.5) == doctest::Approx(0.96394).epsilon(1e-4));
  // the two series agree where they switch
  CHECK(kolmogorov_sf(1.1799999) == doctest::Approx(kolmogorov_sf(1.18)).epsilon(1e-6));
  CHECK(kolmogorov_sf(5.0) < 1e-20);
}

TEST_CASE("normal tails") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(normal_log_sf(2.0) == doctest::Approx(std::log(0.0227501319)).epsilon(1e-8));
  // both sides of the asymptotic switch
  const double below = normal_log_sf(29.999999);
  const double above = normal_log_sf(30.0);
  CHECK(above == doctest::Approx(below).epsilon(1e-6));
  CHECK(std::isfinite(normal_log_sf(200.0)));
}

TEST_CASE("lognormal KS test") {
  std::mt19937_64 rng(40);
  std::lognormal_distribution<double> ln(-5.0, 0.4);
  std::vector<double> x(10000);
  int pass = 0;
  for (int t = 0; t < 20; ++t) {
    for (auto& v : x) v = ln(rng);
    const auto r = lognormal_ks(x);
    CHECK(r.D >= 0.0);
    CHECK(r.D <= 1.0);
    pass += r.p_value > 0.05;
  }
  CHECK(pass >= 17);

  std::exponential_distribution<double> e(1.0);
  for (auto& v : x) v = e(rng);
  CHECK(lognormal_ks(x).p_value < 0.01);

  CHECK_THROWS(lognormal_ks(std::vector<double>(10, 1.0)));
  std::vector<double> bad(30, 1.0);
  bad[4] = 0.0;
  CHECK_THROWS_AS(lognormal_ks(bad), std::domain_error);
}
