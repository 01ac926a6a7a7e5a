#include <algorithm>
#include <cmath>
#include <numeric>

#include "lobsim/stats.hpp"

namespace lobsim::stats {

std::vector<double> log_returns(std::span<const double> prices, std::size_t tau) {
  if (tau < 1) throw std::invalid_argument("return lag must be >= 1");
  if (prices.size() <= tau) throw std::invalid_argument("price series shorter than the lag");
  std::vector<double> logs(prices.size());
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!(prices[i] > 0.0)) {
      throw std::domain_error("non-positive price at index " + std::to_string(i));
    }
    logs[i] = std::log(prices[i]);
  }
  std::vector<double> r(prices.size() - tau);
  for (std::size_t t = tau; t < prices.size(); ++t) r[t - tau] = logs[t] - logs[t - tau];
  return r;
}

std::vector<double> acf(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (n <= max_lag) throw std::invalid_argument("series must be longer than max_lag");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  std::vector<double> d(n);
  double denom = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = x[i] - mean;
    denom += d[i] * d[i];
  }
  if (!(denom > 0.0)) throw std::domain_error("autocorrelation of a constant series");

  std::vector<double> rho(max_lag + 1);
  rho[0] = 1.0;
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double s = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) s += d[t] * d[t + k];
    rho[k] = s / denom;
  }
  return rho;
}

Moments moments(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 4) throw std::invalid_argument("moments need at least 4 samples");
  const double nd = static_cast<double>(n);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / nd;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;
  if (!(m2 > 0.0)) throw std::domain_error("moments of a constant series");
  Moments m;
  m.mean = mean;
  m.variance = m2;
  m.skewness = m3 / std::pow(m2, 1.5);
  m.kurtosis_raw = m4 / (m2 * m2);
  m.kurtosis_excess = m.kurtosis_raw - 3.0;
  return m;
}

std::vector<double> volatility_series(std::span<const double> returns, std::size_t window) {
  if (window < 1) throw std::invalid_argument("volatility window must be >= 1");
  if (returns.size() < window) throw std::invalid_argument("fewer returns than the window");
  std::vector<double> v(returns.size() - window + 1);
  const double w = static_cast<double>(window);
  for (std::size_t t = 0; t < v.size(); ++t) {
    double s = 0.0;
    for (std::size_t k = 0; k < window; ++k) s += std::abs(returns[t + k]);
    v[t] = s / w;
  }
  return v;
}

std::vector<CcdfPoint> ccdf(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("ccdf of an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CcdfPoint> out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    out.push_back({sorted[i], static_cast<double>(sorted.size() - j) / n});
    i = j;
  }
  return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_log_sf(double z) {
  if (z < 30.0) return std::log(0.5 * std::erfc(z / std::sqrt(2.0)));
  // Mills ratio expansion
  const double z2 = z * z;
  const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
  return -0.5 * z2 - std::log(z * std::sqrt(2.0 * M_PI)) + std::log(series);
}

}  // namespace lobsim::stats
