#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lobsim/stats.hpp"

namespace lobsim {

struct ReportOptions {
  std::size_t tau{1};
  std::size_t window{30};
  std::size_t max_lag{200};
  bool fundamental_only{false};  // tags the volatility section
};

struct TailReport {
  stats::TailFit fit;
  stats::LlrResult llr;
};

/// Stylized-fact statistics of one price series. Each section is computed
/// independently; a section that fails is left empty and its error message
/// is appended to `errors`.
struct StatsReport {
  std::size_t tau{1};
  std::size_t window{30};
  std::size_t n_returns{0};
  std::optional<std::vector<double>> acf;
  std::optional<std::vector<double>> abs_acf;
  std::optional<stats::Moments> moments;
  std::optional<TailReport> tail_neg;  // |r| for r < 0
  std::optional<TailReport> tail_pos;  // r for r > 0
  std::optional<stats::KsResult> vol_ks;
  bool fundamental_only{false};
  std::vector<std::string> errors;

  [[nodiscard]] bool ok() const { return errors.empty(); }
};

/// Throws only when no returns can be formed at all (too short, non-positive
/// prices).
StatsReport compute_report(std::span<const double> prices, const ReportOptions& options = {});

/// JSON document with fields tau, acf, abs_acf, skewness, kurtosis_raw,
/// kurtosis_excess, tail_neg, tail_pos, vol_ks, errors. Deterministic.
std::string render_report(const StatsReport& report);

}  // namespace lobsim
