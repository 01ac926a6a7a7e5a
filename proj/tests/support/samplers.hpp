#pragma once

#include <cmath>
#include <random>
#include <vector>

namespace lobsim::testing {

/// Inverse-CDF draws from the continuous Pareto density
/// (alpha - 1) / x_min * (x / x_min)^-alpha on [x_min, inf).
inline std::vector<double> pareto_sample(std::mt19937_64& rng, double alpha, double x_min,
                                         std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& x : out) x = x_min * std::pow(1.0 - u(rng), -1.0 / (alpha - 1.0));
  return out;
}

}  // namespace lobsim::testing
