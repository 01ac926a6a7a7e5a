#include <algorithm>
#include <cmath>
#include <limits>

#include "lobsim/stats.hpp"
#include "nelder_mead.hpp"

namespace lobsim::stats {

namespace {

std::vector<double> tail_of(std::span<const double> samples, double x_min) {
  std::vector<double> tail;
  for (double x : samples) {
    if (x >= x_min) tail.push_back(x);
  }
  return tail;
}

// Distinct sorted values with multiplicities.
struct Distinct {
  std::vector<double> value;
  std::vector<double> log_value;
  std::vector<std::size_t> count;
};

Distinct distinct_sorted(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  Distinct d;
  for (std::size_t i = 0; i < xs.size();) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    d.value.push_back(xs[i]);
    d.log_value.push_back(std::log(xs[i]));
    d.count.push_back(j - i);
    i = j;
  }
  return d;
}

// KS distance of the distinct values from index k on against the power law
// with cutoff value[k]. Stops early once the running maximum exceeds `abandon`.
double ks_from(const Distinct& d, std::size_t k, std::size_t n_tail, double alpha,
               double abandon = std::numeric_limits<double>::infinity()) {
  const double n = static_cast<double>(n_tail);
  const double log_min = d.log_value[k];
  const double slope = alpha - 1.0;
  std::size_t cum = 0;
  double D = 0.0;
  for (std::size_t j = k; j < d.value.size(); ++j) {
    const double F = 1.0 - std::exp(-slope * (d.log_value[j] - log_min));
    const double before = static_cast<double>(cum) / n;
    cum += d.count[j];
    const double after = static_cast<double>(cum) / n;
    D = std::max({D, std::abs(before - F), std::abs(after - F)});
    if (D > abandon) return D;
  }
  return D;
}

}  // namespace

double powerlaw_alpha(std::span<const double> samples, double x_min) {
  if (!(x_min > 0.0)) throw std::domain_error("x_min must be positive");
  double s = 0.0;
  std::size_t n = 0;
  for (double x : samples) {
    if (x >= x_min) {
      s += std::log(x / x_min);
      ++n;
    }
  }
  if (n == 0 || !(s > 0.0)) throw FitError("power-law tail is empty or degenerate");
  return 1.0 + static_cast<double>(n) / s;
}

double powerlaw_ks_distance(std::span<const double> samples, double x_min, double alpha) {
  const Distinct d = distinct_sorted(tail_of(samples, x_min));
  if (d.value.empty()) throw FitError("no samples above x_min");
  std::size_t n = 0;
  for (auto c : d.count) n += c;
  // evaluate with the requested cutoff rather than the smallest tail value
  const double slope = alpha - 1.0;
  const double log_min = std::log(x_min);
  std::size_t cum = 0;
  double D = 0.0;
  for (std::size_t j = 0; j < d.value.size(); ++j) {
    const double F = 1.0 - std::exp(-slope * (d.log_value[j] - log_min));
    const double before = static_cast<double>(cum) / static_cast<double>(n);
    cum += d.count[j];
    const double after = static_cast<double>(cum) / static_cast<double>(n);
    D = std::max({D, std::abs(before - F), std::abs(after - F)});
  }
  return D;
}

TailFit fit_powerlaw_tail(std::span<const double> samples, std::size_t min_tail,
                          std::size_t max_candidates) {
  if (samples.size() < 50) throw std::invalid_argument("power-law fit needs >= 50 samples");
  for (double x : samples) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::domain_error("power-law fit needs positive finite samples");
    }
  }
  const Distinct d = distinct_sorted({samples.begin(), samples.end()});
  const std::size_t u = d.value.size();

  // suffix counts and log sums
  std::vector<std::size_t> n_above(u + 1, 0);
  std::vector<long double> log_above(u + 1, 0.0L);
  for (std::size_t k = u; k-- > 0;) {
    n_above[k] = n_above[k + 1] + d.count[k];
    log_above[k] = log_above[k + 1] + static_cast<long double>(d.count[k]) * d.log_value[k];
  }

  // cutoffs leaving >= min_tail points and at least two distinct values
  std::size_t usable = 0;
  while (usable + 1 < u && n_above[usable] >= std::max<std::size_t>(min_tail, 1)) ++usable;
  if (usable == 0) throw FitError("too few tail points for a power-law fit");

  std::vector<std::size_t> candidates;
  if (max_candidates < 2 || usable <= max_candidates) {
    for (std::size_t k = 0; k < usable; ++k) candidates.push_back(k);
  } else {
    for (std::size_t i = 0; i < max_candidates; ++i) {
      const auto k = static_cast<std::size_t>(std::llround(
          static_cast<double>(i) * static_cast<double>(usable - 1) /
          static_cast<double>(max_candidates - 1)));
      if (candidates.empty() || candidates.back() != k) candidates.push_back(k);
    }
  }

  TailFit best;
  best.ks_distance = std::numeric_limits<double>::infinity();
  for (std::size_t k : candidates) {
    const std::size_t n = n_above[k];
    const long double s =
        log_above[k] - static_cast<long double>(n) * static_cast<long double>(d.log_value[k]);
    if (!(s > 0.0L)) continue;
    const double alpha = 1.0 + static_cast<double>(static_cast<long double>(n) / s);
    const double D = ks_from(d, k, n, alpha, best.ks_distance);
    if (D < best.ks_distance) {
      best = TailFit{alpha, alpha - 1.0, d.value[k], D, n};
    }
  }
  if (!std::isfinite(best.ks_distance)) throw FitError("no admissible power-law cutoff");
  return best;
}

LlrResult vuong_test(std::span<const double> l) {
  if (l.empty()) throw std::invalid_argument("likelihood ratio test needs data");
  const double n = static_cast<double>(l.size());
  double sum = 0.0;
  for (double v : l) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : l) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);

  LlrResult r;
  r.R = mean;
  r.n_tail = l.size();
  if (sd > 0.0) {
    r.p = std::erfc(std::abs(sum) / (sd * std::sqrt(2.0 * n)));
  } else {
    r.p = sum == 0.0 ? 1.0 : 0.0;
  }
  return r;
}

LognormalFit fit_truncated_lognormal(std::span<const double> tail, double x_min) {
  if (tail.size() < 2) throw FitError("lognormal fit needs at least two points");
  const double n = static_cast<double>(tail.size());
  double s1 = 0.0;
  double s2 = 0.0;
  for (double x : tail) {
    const double lx = std::log(x);
    s1 += lx;
    s2 += lx * lx;
  }
  const double mean = s1 / n;
  const double var = std::max(s2 / n - mean * mean, 0.0);
  if (!(var > 0.0)) throw FitError("lognormal fit of a degenerate tail");
  const double log_min = std::log(x_min);

  // Negative log-likelihood without the parameter-free sum of log x.
  auto nll = [&](const std::array<double, 2>& p) {
    const double mu = p[0];
    const double sigma = std::exp(p[1]);
    const double quad = s2 - 2.0 * mu * s1 + n * mu * mu;
    const double z = (log_min - mu) / sigma;
    const double v = n * std::log(sigma) + quad / (2.0 * sigma * sigma) + n * normal_log_sf(z);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  const double sd = std::sqrt(var);
  const auto m = detail::nelder_mead<2>(nll, {mean, std::log(sd)}, {sd, 0.5});
  return {m.x[0], std::exp(m.x[1])};
}

LlrResult llr_powerlaw_vs_lognormal(std::span<const double> samples, double x_min) {
  if (!(x_min > 0.0)) throw std::domain_error("x_min must be positive");
  const std::vector<double> tail = tail_of(samples, x_min);
  if (tail.size() < 10) throw FitError("likelihood ratio needs >= 10 tail points");

  const double alpha = powerlaw_alpha(tail, x_min);
  const LognormalFit ln = fit_truncated_lognormal(tail, x_min);

  const double log_min = std::log(x_min);
  const double pl_const = std::log(alpha - 1.0) - log_min;
  const double ln_const = -std::log(ln.sigma) - 0.5 * std::log(2.0 * M_PI) -
                          normal_log_sf((log_min - ln.mu) / ln.sigma);
  std::vector<double> l(tail.size());
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double lx = std::log(tail[i]);
    const double pl = pl_const - alpha * (lx - log_min);
    const double z = (lx - ln.mu) / ln.sigma;
    const double lognormal = ln_const - lx - 0.5 * z * z;
    l[i] = pl - lognormal;
  }
  LlrResult r = vuong_test(l);
  r.lognormal_mu = ln.mu;
  r.lognormal_sigma = ln.sigma;
  return r;
}

}  // namespace lobsim::stats
