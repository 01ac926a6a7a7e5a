#include <algorithm>
#include <cmath>

#include "lobsim/stats.hpp"

namespace lobsim::stats {

double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // small-lambda form converges fast here: P(K <= l) = sqrt(2 pi)/l sum exp(-(2j-1)^2 pi^2 / (8 l^2))
    const double w = M_PI * M_PI / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int j = 1; j <= 20; ++j) {
      const double k = 2.0 * j - 1.0;
      cdf += std::exp(-k * k * w);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * M_PI) / lambda * cdf, 0.0, 1.0);
  }
  double q = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    q += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * q, 0.0, 1.0);
}

KsResult lognormal_ks(std::span<const double> samples) {
  if (samples.size() < 20) throw std::invalid_argument("lognormal KS test needs n >= 20");
  std::vector<double> logs;
  logs.reserve(samples.size());
  for (double x : samples) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::domain_error("lognormal KS test needs positive samples");
    }
    logs.push_back(std::log(x));
  }
  std::sort(logs.begin(), logs.end());
  const double n = static_cast<double>(logs.size());
  double mu = 0.0;
  for (double v : logs) mu += v;
  mu /= n;
  double ss = 0.0;
  for (double v : logs) ss += (v - mu) * (v - mu);
  const double sigma = std::sqrt(ss / n);
  if (!(sigma > 0.0)) throw FitError("lognormal KS test of a constant sample");

  double D = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const double F = normal_cdf((logs[i] - mu) / sigma);
    D = std::max({D, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  const double rn = std::sqrt(n);
  KsResult r;
  r.D = D;
  r.p_value = kolmogorov_sf((rn + 0.12 + 0.11 / rn) * D);
  r.mu = mu;
  r.sigma = sigma;
  r.n = logs.size();
  return r;
}

}  // namespace lobsim::stats
