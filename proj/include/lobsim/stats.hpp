#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lobsim::stats {

/// An estimator could not produce a fit (degenerate or too little data).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// r(t) = ln P_t - ln P_{t-tau}; size() == prices.size() - tau.
/// Throws std::domain_error on a non-positive price.
std::vector<double> log_returns(std::span<const double> prices, std::size_t tau = 1);

/// Sample autocorrelation for lags 0..max_lag, normalised by the lag-0 sum of
/// squares (so rho(0) == 1). Throws std::domain_error for a constant series.
std::vector<double> acf(std::span<const double> x, std::size_t max_lag);

struct Moments {
  double mean{0.0};
  double variance{0.0};  // central, divided by n
  double skewness{0.0};
  double kurtosis_raw{0.0};  // 3 for a normal
  double kurtosis_excess{0.0};
};

/// Central sample moments. Needs n >= 4 and nonzero variance.
Moments moments(std::span<const double> x);

/// Sliding-window mean of |r| over `window` consecutive returns;
/// size() == returns.size() - window + 1.
std::vector<double> volatility_series(std::span<const double> returns, std::size_t window = 30);

struct CcdfPoint {
  double value{0.0};
  double tail{0.0};  // P(X > value)
};

/// Empirical P(X > x) at each distinct sample value, ascending in x.
std::vector<CcdfPoint> ccdf(std::span<const double> samples);

/// Continuous power-law tail p(x) ~ x^-alpha for x >= x_min.
struct TailFit {
  double alpha{0.0};  // density exponent
  double kappa{0.0};  // CCDF exponent, alpha - 1
  double x_min{0.0};
  double ks_distance{0.0};
  std::size_t n_tail{0};
};

/// Maximum-likelihood alpha for a fixed x_min, over the samples >= x_min.
double powerlaw_alpha(std::span<const double> samples, double x_min);

/// KS distance between the samples >= x_min and the power law (alpha, x_min).
double powerlaw_ks_distance(std::span<const double> samples, double x_min, double alpha);

/// Chooses x_min among the sample values by minimising the KS distance of
/// the MLE fit above it; only cutoffs leaving at least `min_tail` points are
/// candidates. At most `max_candidates` cutoffs are scanned, evenly spaced in
/// rank over the distinct values (all of them when there are fewer).
/// Needs >= 50 positive samples; throws FitError when no cutoff fits.
TailFit fit_powerlaw_tail(std::span<const double> samples, std::size_t min_tail = 10,
                          std::size_t max_candidates = 2000);

struct LlrResult {
  double R{0.0};  // (L_powerlaw - L_lognormal) / n_tail; > 0 favours the power law
  double p{1.0};  // significance of the sign of R
  std::size_t n_tail{0};
  double lognormal_mu{0.0};
  double lognormal_sigma{0.0};
};

/// Normalised log-likelihood ratio and its significance from pointwise
/// log-likelihood differences: R = mean(l), p = erfc(|sum l| / (sd(l) sqrt(2n))).
LlrResult vuong_test(std::span<const double> pointwise_differences);

struct LognormalFit {
  double mu{0.0};
  double sigma{0.0};
};

/// Lognormal MLE on samples >= x_min with the density renormalised to that
/// support.
LognormalFit fit_truncated_lognormal(std::span<const double> tail, double x_min);

/// Power law vs lognormal on the tail above x_min, both fitted on the same
/// truncated support. Needs >= 10 tail points that are not all equal.
LlrResult llr_powerlaw_vs_lognormal(std::span<const double> samples, double x_min);

struct KsResult {
  double D{0.0};
  double p_value{0.0};
  double mu{0.0};  // mean of log samples
  double sigma{0.0};  // sd of log samples (MLE)
  std::size_t n{0};
};

/// Survival function of the Kolmogorov distribution, Q(lambda) = P(K > lambda).
double kolmogorov_sf(double lambda);

/// Lognormal fit by moments of the logs, then a one-sample KS test against
/// the fitted CDF with the asymptotic p-value at (sqrt(n) + 0.12 + 0.11/sqrt(n)) D.
/// The parameters are estimated from the same data, so the p-value is
/// anti-conservative. Needs n >= 20 positive samples.
KsResult lognormal_ks(std::span<const double> samples);

/// Standard normal CDF and log survival function (accurate far in the tail).
double normal_cdf(double z);
double normal_log_sf(double z);

}  // namespace lobsim::stats
