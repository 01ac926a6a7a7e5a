#include "lobsim/order_book.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace lobsim {

std::string TickGrid::format(Price p) const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals_, to_currency(p));
  return buf;
}

void OrderBook::Level::push(const Resting& r) {
  // Arrivals almost always come in order; keep the level sorted otherwise.
  auto pos = orders.end();
  while (pos != orders.begin() + static_cast<std::ptrdiff_t>(head) &&
         (pos - 1)->arrival > r.arrival) {
    --pos;
  }
  orders.insert(pos, r);
}

void OrderBook::Level::pop_front() {
  ++head;
  if (head == orders.size()) {
    orders.clear();
    head = 0;
  } else if (head >= 64 && head * 2 >= orders.size()) {
    orders.erase(orders.begin(), orders.begin() + static_cast<std::ptrdiff_t>(head));
    head = 0;
  }
}

const OrderBook::Level& OrderBook::Ladder::at(std::int64_t ticks) const {
  return levels_[index(ticks)];
}

void OrderBook::Ladder::reserve_for(std::int64_t ticks) {
  if (levels_.empty()) {
    levels_.resize(1024);
    base_ = std::max<std::int64_t>(1, ticks - 512);
    return;
  }
  if (ticks >= base_ && ticks < base_ + span()) return;
  // Grow geometrically towards the side that overflowed.
  const std::int64_t grow = std::max(span(), std::int64_t{1024});
  std::int64_t lo = base_;
  std::int64_t hi = base_ + span();
  if (ticks < lo) lo = std::max<std::int64_t>(1, std::min(ticks, lo - grow));
  if (ticks >= hi) hi = std::max(ticks + 1, hi + grow);
  std::vector<Level> grown(static_cast<std::size_t>(hi - lo));
  std::move(levels_.begin(), levels_.end(), grown.begin() + (base_ - lo));
  levels_ = std::move(grown);
  base_ = lo;
}

void OrderBook::Ladder::push(std::int64_t ticks, const Resting& r) {
  reserve_for(ticks);
  levels_[index(ticks)].push(r);
  if (count_ == 0 || better(ticks, best_)) best_ = ticks;
  ++count_;
}

void OrderBook::Ladder::advance_best() {
  if (count_ == 0) return;
  const std::int64_t step = descending_ ? -1 : 1;
  while (levels_[index(best_)].empty()) best_ += step;
}

OrderBook::Resting OrderBook::Ladder::pop_best() {
  Level& level = levels_[index(best_)];
  const Resting r = level.front();
  level.pop_front();
  --count_;
  advance_best();
  return r;
}

bool OrderBook::Ladder::erase(std::int64_t ticks, OrderId id) {
  if (ticks < base_ || ticks >= base_ + span()) return false;
  Level& level = levels_[index(ticks)];
  for (std::size_t i = level.head; i < level.orders.size(); ++i) {
    if (level.orders[i].id != id) continue;
    if (i == level.head) {
      level.pop_front();
    } else {
      level.orders.erase(level.orders.begin() + static_cast<std::ptrdiff_t>(i));
    }
    --count_;
    if (ticks == best_) advance_best();
    return true;
  }
  return false;
}

std::optional<Trade> OrderBook::take_best(Ladder& ladder, Side aggressor, AgentId agent,
                                          std::int64_t step) {
  if (ladder.empty()) return std::nullopt;
  Trade trade;
  trade.price = Price{ladder.best()};
  const Resting resting = ladder.pop_best();
  trade.step = step;
  trade.aggressor = aggressor;
  trade.resting_id = resting.id;
  if (aggressor == Side::buy) {
    trade.buyer = agent;
    trade.seller = resting.agent;
  } else {
    trade.buyer = resting.agent;
    trade.seller = agent;
  }
  return trade;
}

bool OrderBook::contains(OrderId id) const {
  bool found = false;
  auto scan = [&](std::int64_t, const Level& level) {
    for (std::size_t i = level.head; i < level.orders.size() && !found; ++i) {
      found = level.orders[i].id == id;
    }
  };
  bids_.for_each(scan);
  if (!found) asks_.for_each(scan);
  return found;
}

std::optional<Trade> OrderBook::submit_limit(const LimitOrder& order) {
  if (order.price.ticks <= 0) {
    throw std::invalid_argument("limit order price must be positive");
  }
  // Ids above everything seen so far are new; anything else needs a scan.
  if (any_id_ && order.id <= max_id_ && contains(order.id)) {
    throw std::invalid_argument("duplicate order id " + std::to_string(order.id));
  }
  if (!any_id_ || order.id > max_id_) max_id_ = order.id;
  any_id_ = true;

  if (order.side == Side::buy) {
    if (!asks_.empty() && order.price.ticks >= asks_.best()) {
      return take_best(asks_, Side::buy, order.agent, order.arrival.step);
    }
    bids_.push(order.price.ticks, {order.id, order.agent, order.arrival});
  } else {
    if (!bids_.empty() && order.price.ticks <= bids_.best()) {
      return take_best(bids_, Side::sell, order.agent, order.arrival.step);
    }
    asks_.push(order.price.ticks, {order.id, order.agent, order.arrival});
  }
  return std::nullopt;
}

std::optional<Trade> OrderBook::submit_market(Side side, AgentId agent, std::int64_t step) {
  if (side == Side::buy) return take_best(asks_, Side::buy, agent, step);
  return take_best(bids_, Side::sell, agent, step);
}

std::optional<Price> OrderBook::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return Price{bids_.best()};
}

std::optional<Price> OrderBook::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return Price{asks_.best()};
}

Price OrderBook::mid_spread(Price fallback) const {
  const auto bid = best_bid();
  const auto ask = best_ask();
  if (bid && ask) {
    const std::int64_t sum = bid->ticks + ask->ticks;
    std::int64_t half = sum / 2;
    if (sum % 2 != 0 && half % 2 != 0) ++half;  // tie: round to even tick
    return Price{half};
  }
  if (bid) return *bid;
  if (ask) return *ask;
  return fallback;
}

bool OrderBook::cancel(OrderId id, Side side, Price price) {
  return side == Side::buy ? bids_.erase(price.ticks, id) : asks_.erase(price.ticks, id);
}

std::vector<LimitOrder> OrderBook::snapshot(Side side) const {
  std::vector<LimitOrder> out;
  auto collect = [&](std::int64_t px, const Level& level) {
    for (std::size_t i = level.head; i < level.orders.size(); ++i) {
      const Resting& r = level.orders[i];
      out.push_back(LimitOrder{r.id, side, Price{px}, r.agent, r.arrival});
    }
  };
  (side == Side::buy ? bids_ : asks_).for_each(collect);
  return out;
}

}  // namespace lobsim
