#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace lobsim::stats::detail {

template <std::size_t N>
struct Minimum {
  std::array<double, N> x;
  double value;
  int iterations;
};

/// Derivative-free simplex minimiser (standard reflection / expansion /
/// contraction / shrink coefficients).
template <std::size_t N, typename F>
Minimum<N> nelder_mead(F&& f, std::array<double, N> start, std::array<double, N> step,
                       double tolerance = 1e-10, int max_iterations = 4000) {
  std::array<std::array<double, N>, N + 1> pts;
  std::array<double, N + 1> vals;
  pts[0] = start;
  for (std::size_t i = 0; i < N; ++i) {
    pts[i + 1] = start;
    pts[i + 1][i] += step[i];
  }
  for (std::size_t i = 0; i <= N; ++i) vals[i] = f(pts[i]);

  auto along = [](const std::array<double, N>& from, const std::array<double, N>& to, double t) {
    std::array<double, N> out;
    for (std::size_t k = 0; k < N; ++k) out[k] = from[k] + t * (to[k] - from[k]);
    return out;
  };

  int it = 0;
  for (; it < max_iterations; ++it) {
    std::array<std::size_t, N + 1> order;
    for (std::size_t i = 0; i <= N; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order[0];
    const std::size_t worst = order[N];
    const std::size_t second = order[N - 1];

    if (std::abs(vals[worst] - vals[best]) <= tolerance * (std::abs(vals[best]) + tolerance)) {
      double spread = 0.0;
      for (std::size_t k = 0; k < N; ++k) {
        spread = std::max(spread, std::abs(pts[worst][k] - pts[best][k]));
      }
      if (spread <= 1e-9) break;
    }

    std::array<double, N> centroid{};
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < N; ++k) centroid[k] += pts[i][k] / static_cast<double>(N);
    }

    const auto reflected = along(centroid, pts[worst], -1.0);
    const double fr = f(reflected);
    if (fr < vals[best]) {
      const auto expanded = along(centroid, pts[worst], -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const auto contracted = along(centroid, outside ? reflected : pts[worst], 0.5);
    const double fc = f(contracted);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == best) continue;
      pts[i] = along(pts[best], pts[i], 0.5);
      vals[i] = f(pts[i]);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= N; ++i) {
    if (vals[i] < vals[best]) best = i;
  }
  return {pts[best], vals[best], it};
}

}  // namespace lobsim::stats::detail
