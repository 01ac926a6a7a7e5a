#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <stdexcept>
#include <vector>

#include "lobsim/agents.hpp"
#include "lobsim/config.hpp"
#include "lobsim/news.hpp"
#include "lobsim/order_book.hpp"
#include "lobsim/rng.hpp"

namespace lobsim {

struct NewsEvent {
  std::int64_t step{0};
  double zeta{0.0};
};

struct Diagnostics {
  std::int64_t liquidity_failures{0};
  std::int64_t limit_clamps{0};
  std::int64_t self_trades{0};
  std::int64_t expired_orders{0};
  std::size_t bid_depth_after_warmup{0};
  std::size_t ask_depth_after_warmup{0};
  std::size_t final_bid_depth{0};
  std::size_t final_ask_depth{0};
};

/// Recorded output of one run. Entry i of the per-step vectors belongs to
/// simulation step `first_step + i`.
struct SeriesRecord {
  TickGrid grid{};
  std::size_t n_fundamental{0};  // agent ids below this are fundamentals
  std::int64_t first_step{0};
  std::vector<Price> close;
  std::vector<std::uint32_t> volume;
  std::vector<std::uint8_t> tech_active;
  std::vector<Trade> trades;
  std::vector<NewsEvent> news;
  Diagnostics diagnostics;

  [[nodiscard]] bool is_technical(AgentId id) const {
    return id >= 0 && static_cast<std::size_t>(id) >= n_fundamental;
  }
};

/// A market order hit an empty book side under the abort policy.
class RunAborted : public std::runtime_error {
 public:
  RunAborted(std::int64_t step, Diagnostics diagnostics);

  [[nodiscard]] std::int64_t step() const { return step_; }
  [[nodiscard]] const Diagnostics& diagnostics() const { return diagnostics_; }

 private:
  std::int64_t step_;
  Diagnostics diagnostics_;
};

struct RunOptions {
  bool trade_log{true};
};

struct Population {
  std::vector<FundamentalAgent> fundamentals;
  std::vector<TechnicalAgent> technicals;
  std::vector<MovingAverageOscillator> groups;
};

/// Draws every agent's parameters from `rng` in a fixed order: for each
/// fundamental agent p_f, chi_market, chi_opinion; then t_wait for each
/// technical agent, group by group.
Population init_population(const SimConfig& config, Rng& rng);

/// Discrete-time market. Each step runs, in order: news arrival and fundamental
/// price updates; oscillator updates on the previous close with signal
/// dispatch; collection of active agents (Bernoulli(p_active) fundamentals,
/// technicals with a due order or a profit exit on the previous close); a
/// uniform shuffle of those agents; sequential processing against the live
/// book; recording of close, volume and technical activity.
///
/// Technical agents stay dormant for the first `effective_warmup()` steps while
/// the book and the moving averages fill up.
class Simulation {
 public:
  explicit Simulation(const SimConfig& config, RunOptions options = {});

  /// Advances one step. Throws RunAborted under the abort policy.
  void step();

  /// Runs warm-up plus the recorded steps and returns the record.
  SeriesRecord run();

  /// Feeds a signal to every member of `group` at the current step, as if the
  /// oscillator had produced it. Used for scripted scenarios.
  void inject_signal(std::size_t group, Signal signal);

  [[nodiscard]] std::int64_t current_step() const { return step_; }
  [[nodiscard]] bool technicals_live() const { return step_ >= warmup_; }
  [[nodiscard]] Price last_close() const { return close_; }
  [[nodiscard]] const OrderBook& book() const { return book_; }
  [[nodiscard]] const SeriesRecord& record() const { return record_; }
  [[nodiscard]] std::span<const FundamentalAgent> fundamentals() const {
    return population_.fundamentals;
  }
  [[nodiscard]] std::span<TechnicalAgent> technicals() { return population_.technicals; }
  [[nodiscard]] std::span<const TechnicalAgent> technicals() const {
    return population_.technicals;
  }

 private:
  struct Actor {
    std::uint32_t index;  // fundamental index, or technical index
    bool technical;
    Side side;            // technical orders only
  };

  struct Expiry {
    std::int64_t step;
    OrderId id;
    Side side;
    Price price;
  };

  void expire_orders();
  void on_trade(const Trade& trade);
  void process_fundamental(std::uint32_t index);
  void process_technical(std::uint32_t index, Side side);

  SimConfig config_;
  RunOptions options_;
  TickGrid grid_;
  LimitPricing pricing_;
  RngStreams streams_;
  Population population_;
  std::vector<std::size_t> group_begin_;  // technical index range per group
  NewsProcess news_;
  OrderBook book_;
  std::int64_t warmup_;
  std::int64_t step_{0};
  Price close_;                   // previous step's closing price
  std::optional<Price> last_trade_;
  OrderId next_order_id_{1};
  std::uint32_t seq_{0};
  std::uint32_t step_volume_{0};
  bool step_tech_active_{false};
  std::vector<Actor> actors_;
  std::deque<Expiry> expiries_;
  SeriesRecord record_;
};

/// Convenience: Simulation(config, options).run().
SeriesRecord run(const SimConfig& config, RunOptions options = {});

}  // namespace lobsim
