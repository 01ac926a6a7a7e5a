#pragma once

#include <cstdint>
#include <optional>

#include "lobsim/rng.hpp"

namespace lobsim {

/// Exogenous news: memoryless arrivals (geometric gaps on {1, 2, ...} with
/// mean f_news steps) carrying IID N(mu_news, sigma_news^2) values.
class NewsProcess {
 public:
  /// Draws the first arrival relative to `start_step`.
  NewsProcess(double mu_news, double sigma_news, double f_news, Rng& rng,
              std::int64_t start_step = 0);

  /// Call once per step. Returns the news value when one arrives at `step`.
  std::optional<double> poll(std::int64_t step, Rng& rng);

  [[nodiscard]] std::int64_t next_arrival() const { return next_arrival_; }

  /// One inter-arrival gap.
  std::int64_t draw_gap(Rng& rng) const;

 private:
  double mu_;
  double sigma_;
  double f_news_;
  std::int64_t next_arrival_{0};
};

}  // namespace lobsim
