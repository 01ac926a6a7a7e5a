#include "lobsim/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lobsim {

namespace {

bool acceptable(Price p, Side side, std::optional<Price> bid, std::optional<Price> ask) {
  if (p.ticks < 1) return false;
  if (side == Side::buy) return !ask || p < *ask;
  return !bid || p > *bid;
}

Price clamp_inside(Price p, Side side, std::optional<Price> bid, std::optional<Price> ask) {
  std::int64_t t = std::max<std::int64_t>(p.ticks, 1);
  if (side == Side::buy && ask) t = std::min(t, ask->ticks - 1);
  if (side == Side::sell && bid) t = std::max(t, bid->ticks + 1);
  return Price{std::max<std::int64_t>(t, 1)};
}

}  // namespace

LimitDraw draw_limit_price(const LimitPricing& pricing, Price mid, Side side,
                           std::optional<Price> best_bid,
                           std::optional<Price> best_ask, Rng& rng) {
  if (!(pricing.lambda > 0.0)) throw std::invalid_argument("lambda_limit must be positive");
  std::exponential_distribution<double> magnitude(pricing.lambda);
  std::bernoulli_distribution upward(0.5);
  const double centre = pricing.grid.to_currency(mid);

  Price p = mid;
  for (int attempt = 0; attempt < pricing.max_redraws; ++attempt) {
    const double offset = magnitude(rng);
    const double x = upward(rng) ? centre + offset : centre - offset;
    p = pricing.grid.round(x);
    if (acceptable(p, side, best_bid, best_ask)) return {p, false};
  }
  return {clamp_inside(p, side, best_bid, best_ask), true};
}

Action fundamental_decide(const FundamentalAgent& agent, std::optional<Price> best_bid,
                          std::optional<Price> best_ask, Price mid,
                          const LimitPricing& pricing, Rng& rng, bool* clamped) {
  const double pf = static_cast<double>(agent.fundamental.ticks);
  const bool wants_buy = best_ask ? agent.fundamental > *best_ask : agent.fundamental > mid;
  const bool wants_sell = best_bid ? agent.fundamental < *best_bid : agent.fundamental < mid;

  auto post_limit = [&](Side side) {
    const LimitDraw d = draw_limit_price(pricing, mid, side, best_bid, best_ask, rng);
    if (clamped) *clamped = d.clamped;
    return Action::limit(side, d.price);
  };

  if (wants_buy) {
    if (best_ask && pf > static_cast<double>(best_ask->ticks) * (1.0 + agent.chi_market)) {
      return Action::market(Side::buy);
    }
    return post_limit(Side::buy);
  }
  if (wants_sell) {
    if (best_bid && pf < static_cast<double>(best_bid->ticks) * (1.0 - agent.chi_market)) {
      return Action::market(Side::sell);
    }
    return post_limit(Side::sell);
  }
  return Action::none();
}

void apply_opinion(FundamentalAgent& agent, Price mid, const TickGrid& grid) {
  const double mu = grid.to_currency(mid);
  const double pf = grid.to_currency(agent.fundamental);
  if (std::abs(1.0 - pf / mu) <= agent.chi_opinion) return;
  const double target = pf >= mu ? mu * (1.0 + agent.chi_opinion) : mu * (1.0 - agent.chi_opinion);
  agent.fundamental = grid.round(target);
}

void apply_news(FundamentalAgent& agent, double zeta, double sigma,
                const TickGrid& grid, Rng& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  const double delta = zeta + sigma * unit(rng);
  const Price moved = grid.round(grid.to_currency(agent.fundamental) + delta);
  agent.fundamental = Price{std::max<std::int64_t>(moved.ticks, 1)};
}

MovingAverageOscillator::MovingAverageOscillator(std::size_t slow_window,
                                                 std::size_t fast_window)
    : slow_(slow_window), fast_(fast_window), history_(slow_window, 0) {
  if (fast_window < 1 || fast_window >= slow_window) {
    throw std::invalid_argument("moving average windows need 1 <= fast < slow");
  }
}

Signal MovingAverageOscillator::update(Price close) {
  const std::size_t pos = count_ % slow_;
  if (count_ >= slow_) slow_sum_ -= history_[pos];
  if (count_ >= fast_) fast_sum_ -= history_[(count_ - fast_) % slow_];
  history_[pos] = close.ticks;
  slow_sum_ += close.ticks;
  fast_sum_ += close.ticks;
  ++count_;
  if (count_ < slow_) return Signal::none;

  // sign(fast/nf - slow/ns) without division
  const std::int64_t lhs = fast_sum_ * static_cast<std::int64_t>(slow_);
  const std::int64_t rhs = slow_sum_ * static_cast<std::int64_t>(fast_);
  const int sign = lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);

  Signal out = Signal::none;
  if (primed_) {
    if (sign > 0 && last_sign_ <= 0) out = Signal::buy;
    if (sign < 0 && last_sign_ >= 0) out = Signal::sell;
  }
  primed_ = true;
  if (sign != 0) last_sign_ = sign;
  return out;
}

double MovingAverageOscillator::difference() const {
  return static_cast<double>(fast_sum_) / static_cast<double>(fast_) -
         static_cast<double>(slow_sum_) / static_cast<double>(slow_);
}

void technical_on_signal(TechnicalAgent& agent, Signal signal, std::int64_t step) {
  using Last = TechnicalAgent::Last;
  if (signal == Signal::buy && agent.last_action != Last::bought) {
    agent.pending = PendingOrder{step + agent.t_wait, Side::buy};
  } else if (signal == Signal::sell && agent.last_action != Last::sold) {
    agent.pending = PendingOrder{step + agent.t_wait, Side::sell};
  }
}

std::optional<Side> technical_profit_check(TechnicalAgent& agent, Price current,
                                           bool symmetric) {
  using Last = TechnicalAgent::Last;
  if (!agent.signal_price) return std::nullopt;
  const double entry = static_cast<double>(agent.signal_price->ticks);
  const double now = static_cast<double>(current.ticks);
  std::optional<Side> exit;
  if (agent.last_action == Last::bought && now > (1.0 + agent.gamma) * entry) {
    exit = Side::sell;
  } else if (symmetric && agent.last_action == Last::sold &&
             now < (1.0 - agent.gamma) * entry) {
    exit = Side::buy;
  }
  if (exit) agent.pending.reset();
  return exit;
}

void technical_on_execution(TechnicalAgent& agent, Side side, Price price) {
  agent.last_action =
      side == Side::buy ? TechnicalAgent::Last::bought : TechnicalAgent::Last::sold;
  agent.signal_price = price;
}

}  // namespace lobsim
