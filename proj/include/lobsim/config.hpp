#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lobsim {

/// Invalid configuration. `key` names the offending parameter when known and
/// `line` is the 1-based config file line (0 when not from a file).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string message, std::string key = {}, int line = 0)
      : std::runtime_error(std::move(message)), key_(std::move(key)), line_(line) {}

  [[nodiscard]] const std::string& key() const { return key_; }
  [[nodiscard]] int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

struct Range {
  double lo{0.0};
  double hi{0.0};
};

struct IntRange {
  std::int64_t lo{0};
  std::int64_t hi{0};
};

/// Technical agents following one moving-average oscillator.
struct TechnicalGroupSpec {
  std::size_t slow_window{0};
  std::size_t fast_window{0};
  std::size_t count{0};
};

enum class LiquidityPolicy { abort, skip };

/// Full parameterisation of one run. Defaults reproduce the reference
/// population: 1000 fundamentals plus two technical groups of 750
/// (windows 4000/2000 and 2000/1000).
struct SimConfig {
  std::size_t n_fundamental{1000};
  std::vector<TechnicalGroupSpec> groups{{4000, 2000, 750}, {2000, 1000, 750}};
  std::int64_t steps{100000};  // recorded steps T
  std::uint64_t seed{1};
  double tick{1e-4};

  double p_active{0.15};
  Range p_f{20.0, 25.0};
  Range chi_market{0.005, 0.25};
  Range chi_opinion{0.01, 0.1};
  double sigma_dpf{0.2};
  double lambda_limit{3.0};

  double mu_news{0.0};
  double sigma_news{0.1};
  double f_news{100.0};  // mean gap between news, in steps

  double gamma{0.01};
  IntRange t_wait{0, 50};
  bool symmetric_profit_taking{false};

  std::optional<std::int64_t> warmup_steps;  // default: 2 x slowest window
  bool discard_warmup{true};
  double initial_price{22.5};
  LiquidityPolicy liquidity_failure{LiquidityPolicy::abort};
  std::int64_t max_resting_age{0};  // 0 = orders never expire

  /// Throws ConfigError naming the offending key.
  void validate() const;

  [[nodiscard]] std::int64_t effective_warmup() const;
  [[nodiscard]] std::size_t n_technical() const;
  [[nodiscard]] std::size_t max_slow_window() const;
};

/// Same run without technical agents; the warm-up length is pinned first so
/// the fundamental book build-up matches the full configuration.
SimConfig without_technicals(SimConfig config);

/// Rescales the technical population to round(ratio * n_fundamental) agents,
/// split evenly over the configured groups (remainder to the first groups).
SimConfig with_technical_ratio(SimConfig config, double ratio);

}  // namespace lobsim
