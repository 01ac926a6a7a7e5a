#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lobsim {

/// Integer count of tick units. All book comparisons happen on ticks so that
/// matching is exact and runs are bit-reproducible.
struct Price {
  std::int64_t ticks{0};

  friend constexpr auto operator<=>(Price, Price) = default;
};

constexpr Price operator+(Price p, std::int64_t d) { return Price{p.ticks + d}; }
constexpr Price operator-(Price p, std::int64_t d) { return Price{p.ticks - d}; }

/// Conversion between currency units and ticks for one run.
class TickGrid {
 public:
  explicit TickGrid(double tick_size = 1e-4) : size_(tick_size) {
    if (!(tick_size > 0.0) || !std::isfinite(tick_size)) {
      throw std::invalid_argument("tick size must be positive");
    }
    // Decimal ticks (1e-4, 5e-4, ...) convert by dividing by an exact integer
    // so that ticks -> currency matches strtod of the printed decimal.
    for (int k = 0; k <= 12; ++k) {
      const double scaled = tick_size * std::pow(10.0, k);
      if (std::abs(scaled - std::round(scaled)) < 1e-9 * scaled) {
        decimals_ = k;
        break;
      }
    }
    const double inv = 1.0 / tick_size;
    if (std::abs(inv - std::round(inv)) < 1e-9 * inv) {
      per_unit_ = std::round(inv);
    }
  }

  [[nodiscard]] double size() const { return size_; }
  [[nodiscard]] int decimals() const { return decimals_; }

  [[nodiscard]] double to_currency(Price p) const {
    if (per_unit_ > 0.0) return static_cast<double>(p.ticks) / per_unit_;
    return static_cast<double>(p.ticks) * size_;
  }

  /// Nearest tick, ties away from zero.
  [[nodiscard]] Price round(double currency) const {
    return Price{static_cast<std::int64_t>(std::llround(currency / size_))};
  }

  /// Currency value printed at tick resolution.
  [[nodiscard]] std::string format(Price p) const;

 private:
  double size_;
  double per_unit_{0.0};
  int decimals_{12};
};

}  // namespace lobsim
