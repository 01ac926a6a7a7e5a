#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lobsim/order_book.hpp"
#include "lobsim/price.hpp"
#include "lobsim/rng.hpp"

namespace lobsim {

struct FundamentalAgent {
  Price fundamental{};      // p_f
  double chi_market{0.0};   // market-order threshold
  double chi_opinion{0.0};  // herding tolerance
  double p_active{0.0};
};

/// What an agent sends to the book this activation.
struct Action {
  enum class Kind : std::uint8_t { market_buy, market_sell, limit_buy, limit_sell, abstain };

  Kind kind{Kind::abstain};
  Price price{};  // limit variants only

  static Action market(Side s) {
    return {s == Side::buy ? Kind::market_buy : Kind::market_sell, {}};
  }
  static Action limit(Side s, Price p) {
    return {s == Side::buy ? Kind::limit_buy : Kind::limit_sell, p};
  }
  static Action none() { return {}; }

  [[nodiscard]] bool is_market() const {
    return kind == Kind::market_buy || kind == Kind::market_sell;
  }
  [[nodiscard]] bool is_limit() const {
    return kind == Kind::limit_buy || kind == Kind::limit_sell;
  }
  [[nodiscard]] Side side() const {
    return (kind == Kind::market_buy || kind == Kind::limit_buy) ? Side::buy : Side::sell;
  }

  friend bool operator==(const Action&, const Action&) = default;
};

struct LimitPricing {
  double lambda{3.0};  // Laplace rate in 1/currency
  TickGrid grid{};
  int max_redraws{10};
};

struct LimitDraw {
  Price price{};
  bool clamped{false};
};

/// Limit price from a Laplace density centred on `mid` with rate
/// `pricing.lambda`, redrawn until it neither crosses the opposite best nor
/// drops to zero. After `max_redraws` failed draws the last draw is clamped
/// one tick inside the violated bound.
LimitDraw draw_limit_price(const LimitPricing& pricing, Price mid, Side side,
                           std::optional<Price> best_bid,
                           std::optional<Price> best_ask, Rng& rng);

/// Buy when p_f is above the best ask, sell when below the best bid, abstain
/// otherwise. Orders go to market only when the opposite quote is beaten by
/// more than chi_market; with that quote absent the agent compares against
/// `mid` and can only post a limit order.
Action fundamental_decide(const FundamentalAgent& agent, std::optional<Price> best_bid,
                          std::optional<Price> best_ask, Price mid,
                          const LimitPricing& pricing, Rng& rng,
                          bool* clamped = nullptr);

/// Pulls p_f back to within chi_opinion of `mid` (relative) when it has
/// drifted further away. Idempotent for a fixed `mid`.
void apply_opinion(FundamentalAgent& agent, Price mid, const TickGrid& grid);

/// p_f += N(zeta, sigma^2) in currency units, floored at one tick.
void apply_news(FundamentalAgent& agent, double zeta, double sigma,
                const TickGrid& grid, Rng& rng);

enum class Signal : std::uint8_t { none, buy, sell };

/// Moving-average oscillator shared by one group of technical agents.
///
/// Both windows are rolling sums over integer tick prices, so the sign of
/// fast - slow is exact. A buy (sell) signal fires when the difference turns
/// strictly positive (negative) and the last nonzero difference had the other
/// sign or there was none; touching zero is not a crossing.
class MovingAverageOscillator {
 public:
  MovingAverageOscillator(std::size_t slow_window, std::size_t fast_window);

  /// Feeds one closing price. Signals start after the first step on which
  /// both windows are full.
  Signal update(Price close);

  [[nodiscard]] std::size_t slow_window() const { return slow_; }
  [[nodiscard]] std::size_t fast_window() const { return fast_; }
  [[nodiscard]] bool primed() const { return primed_; }
  /// fast mean - slow mean in ticks (valid once both windows are full).
  [[nodiscard]] double difference() const;

 private:
  std::size_t slow_;
  std::size_t fast_;
  std::vector<std::int64_t> history_;  // ring buffer of the last slow_ prices
  std::size_t count_{0};
  std::int64_t slow_sum_{0};
  std::int64_t fast_sum_{0};
  int last_sign_{0};
  bool primed_{false};
};

struct PendingOrder {
  std::int64_t due_step{0};
  Side side{Side::buy};
};

struct TechnicalAgent {
  enum class Last : std::uint8_t { none, bought, sold };

  std::size_t group{0};
  std::int64_t t_wait{0};
  double gamma{0.01};
  Last last_action{Last::none};
  std::optional<Price> signal_price;  // P_signal, set iff last_action != none
  std::optional<PendingOrder> pending;
};

/// Schedules a market order t_wait steps after a signal opposite to the last
/// executed action. Same-direction signals are ignored; a new signal replaces
/// an order that is not yet due.
void technical_on_signal(TechnicalAgent& agent, Signal signal, std::int64_t step);

/// Long exit: a MarketSell once the price exceeds (1 + gamma) P_signal. In
/// symmetric mode a short position is also covered below (1 - gamma) P_signal.
/// Firing clears any pending order.
std::optional<Side> technical_profit_check(TechnicalAgent& agent, Price current,
                                           bool symmetric = false);

/// Bookkeeping after one of the agent's market orders executed.
void technical_on_execution(TechnicalAgent& agent, Side side, Price price);

}  // namespace lobsim
