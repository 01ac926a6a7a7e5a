#pragma once

// Reference matcher: a flat list of resting orders, searched linearly for the
// best counterparty on every submission. Slow but obviously correct.

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lobsim/order_book.hpp"

namespace lobsim::testing {

class NaiveMatcher {
 public:
  std::optional<Trade> limit(const LimitOrder& o) {
    auto best = best_opposite(o.side);
    if (best != resting_.end() &&
        (o.side == Side::buy ? o.price >= best->price : o.price <= best->price)) {
      return fill(best, o.side, o.agent, o.arrival.step);
    }
    resting_.push_back(o);
    return std::nullopt;
  }

  std::optional<Trade> market(Side side, AgentId agent, std::int64_t step) {
    auto best = best_opposite(side);
    if (best == resting_.end()) return std::nullopt;
    return fill(best, side, agent, step);
  }

  bool cancel(OrderId id) {
    auto it = std::find_if(resting_.begin(), resting_.end(),
                           [&](const LimitOrder& o) { return o.id == id; });
    if (it == resting_.end()) return false;
    resting_.erase(it);
    return true;
  }

  /// Resting orders of one side in (price, arrival) priority order.
  std::vector<LimitOrder> side(Side s) const {
    std::vector<LimitOrder> out;
    for (const auto& o : resting_) {
      if (o.side == s) out.push_back(o);
    }
    std::sort(out.begin(), out.end(), [s](const LimitOrder& a, const LimitOrder& b) {
      if (a.price != b.price) return s == Side::buy ? a.price > b.price : a.price < b.price;
      return a.arrival < b.arrival;
    });
    return out;
  }

  const std::vector<LimitOrder>& resting() const { return resting_; }

 private:
  std::vector<LimitOrder>::iterator best_opposite(Side incoming) {
    const Side want = opposite(incoming);
    auto best = resting_.end();
    for (auto it = resting_.begin(); it != resting_.end(); ++it) {
      if (it->side != want) continue;
      if (best == resting_.end()) {
        best = it;
        continue;
      }
      const bool better_price =
          want == Side::sell ? it->price < best->price : it->price > best->price;
      if (better_price || (it->price == best->price && it->arrival < best->arrival)) best = it;
    }
    return best;
  }

  Trade fill(std::vector<LimitOrder>::iterator resting, Side aggressor, AgentId agent,
             std::int64_t step) {
    Trade t;
    t.price = resting->price;
    t.step = step;
    t.aggressor = aggressor;
    t.resting_id = resting->id;
    t.buyer = aggressor == Side::buy ? agent : resting->agent;
    t.seller = aggressor == Side::buy ? resting->agent : agent;
    resting_.erase(resting);
    return t;
  }

  std::vector<LimitOrder> resting_;
};

struct ReplayOutcome {
  bool ok{true};
  std::string failure;
  std::size_t trades{0};
};

/// Feeds one random order sequence to both the book and the reference and
/// compares every result, the uncrossed invariant after every operation and
/// the final book. Arrivals are occasionally stamped out of order to exercise
/// time priority inside a level.
inline ReplayOutcome replay_against_reference(std::mt19937_64& rng, std::size_t n_ops,
                                              bool with_cancels) {
  OrderBook book;
  NaiveMatcher ref;
  ReplayOutcome out;
  std::uniform_int_distribution<std::int64_t> price(980, 1020);
  std::uniform_int_distribution<int> kind(0, 99);
  std::uniform_int_distribution<AgentId> agent(0, 9);
  std::vector<LimitOrder> submitted;
  OrderId next_id = 1;
  std::int64_t step = 0;

  auto fail = [&](std::size_t i, const std::string& what) {
    out.ok = false;
    out.failure = "op " + std::to_string(i) + ": " + what;
    return out;
  };

  for (std::size_t i = 0; i < n_ops; ++i) {
    if (kind(rng) < 30) ++step;
    const int k = kind(rng);
    const Side side = k % 2 == 0 ? Side::buy : Side::sell;
    std::optional<Trade> got;
    std::optional<Trade> want;
    if (with_cancels && k < 8 && !submitted.empty()) {
      const LimitOrder& target = submitted[static_cast<std::size_t>(rng() % submitted.size())];
      const bool a = book.cancel(target.id, target.side, target.price);
      const bool b = ref.cancel(target.id);
      if (a != b) return fail(i, "cancel disagreement");
    } else if (k < 25) {
      const AgentId who = agent(rng);
      got = book.submit_market(side, who, step);
      want = ref.market(side, who, step);
    } else {
      const std::int64_t stamp = kind(rng) < 5 && step > 0 ? step - 1 : step;
      LimitOrder o{next_id++, side, Price{price(rng)}, agent(rng),
                   {stamp, static_cast<std::uint32_t>(i)}};
      got = book.submit_limit(o);
      want = ref.limit(o);
      if (!got) submitted.push_back(o);
    }
    if (got != want) return fail(i, "trade mismatch");
    if (got) ++out.trades;
    const auto bid = book.best_bid();
    const auto ask = book.best_ask();
    if (bid && ask && !(*bid < *ask)) return fail(i, "book crossed");
  }

  for (Side s : {Side::buy, Side::sell}) {
    const auto a = book.snapshot(s);
    const auto b = ref.side(s);
    if (a.size() != b.size()) return fail(n_ops, "final depth mismatch");
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[j].id != b[j].id || a[j].price != b[j].price || a[j].agent != b[j].agent ||
          a[j].arrival != b[j].arrival) {
        return fail(n_ops, "final book mismatch");
      }
    }
  }
  return out;
}

}  // namespace lobsim::testing
