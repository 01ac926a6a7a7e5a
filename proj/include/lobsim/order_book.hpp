#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lobsim/price.hpp"

namespace lobsim {

enum class Side : std::uint8_t { buy, sell };

constexpr Side opposite(Side s) { return s == Side::buy ? Side::sell : Side::buy; }

using AgentId = std::int32_t;
using OrderId = std::uint64_t;

/// Arrival stamp: simulation step plus a within-step sequence number.
struct Arrival {
  std::int64_t step{0};
  std::uint32_t seq{0};

  friend constexpr auto operator<=>(Arrival, Arrival) = default;
};

/// Unit-volume limit order.
struct LimitOrder {
  OrderId id{0};
  Side side{Side::buy};
  Price price{};
  AgentId agent{0};
  Arrival arrival{};
};

struct Trade {
  AgentId buyer{0};
  AgentId seller{0};
  Price price{};  // always the resting order's limit price
  std::int64_t step{0};
  Side aggressor{Side::buy};
  OrderId resting_id{0};

  friend bool operator==(const Trade&, const Trade&) = default;
};

/// Double-auction limit order book with price-time priority.
///
/// Bids are kept best-first (price descending), asks best-first (price
/// ascending); within a level orders are ordered by arrival. Every order has
/// volume 1, so any submission produces at most one trade. The book is never
/// left crossed.
class OrderBook {
 public:
  struct Resting {
    OrderId id;
    AgentId agent;
    Arrival arrival;
  };

  /// Crosses against the opposite best if marketable, otherwise rests.
  /// Throws std::invalid_argument on a non-positive price or an id that is
  /// already resting in the book.
  std::optional<Trade> submit_limit(const LimitOrder& order);

  /// Executes against the opposite best order at its price. Returns nullopt
  /// (insufficient liquidity) when the opposite side is empty.
  std::optional<Trade> submit_market(Side side, AgentId agent, std::int64_t step);

  [[nodiscard]] std::optional<Price> best_bid() const;
  [[nodiscard]] std::optional<Price> best_ask() const;

  /// Midpoint of the best quotes rounded to the nearest tick (ties to even);
  /// the single present best on a one-sided book; `fallback` when empty.
  [[nodiscard]] Price mid_spread(Price fallback) const;

  [[nodiscard]] std::size_t bid_count() const { return bids_.count(); }
  [[nodiscard]] std::size_t ask_count() const { return asks_.count(); }
  [[nodiscard]] std::size_t size() const { return bid_count() + ask_count(); }
  [[nodiscard]] bool contains(OrderId id) const;

  /// Removes a resting order. Returns false if it is no longer in the book.
  bool cancel(OrderId id, Side side, Price price);

  /// Resting orders on one side in priority order.
  [[nodiscard]] std::vector<LimitOrder> snapshot(Side side) const;

 private:
  // FIFO queue of one price level; popped entries are compacted lazily.
  struct Level {
    std::vector<Resting> orders;
    std::size_t head{0};

    [[nodiscard]] bool empty() const { return head == orders.size(); }
    [[nodiscard]] const Resting& front() const { return orders[head]; }
    void push(const Resting& r);
    void pop_front();
  };

  // One side of the book as a dense array of levels indexed by tick, so a
  // submission costs O(1). Storage spans the lowest to highest price ever
  // seen on the side.
  class Ladder {
   public:
    explicit Ladder(bool descending) : descending_(descending) {}

    [[nodiscard]] bool empty() const { return count_ == 0; }
    [[nodiscard]] std::size_t count() const { return count_; }
    [[nodiscard]] std::int64_t best() const { return best_; }  // valid if !empty()
    [[nodiscard]] const Level& at(std::int64_t ticks) const;
    [[nodiscard]] bool better(std::int64_t a, std::int64_t b) const {
      return descending_ ? a > b : a < b;
    }

    void push(std::int64_t ticks, const Resting& r);
    Resting pop_best();
    bool erase(std::int64_t ticks, OrderId id);

    /// Calls f(ticks, level) for each non-empty level, best first.
    template <typename F>
    void for_each(F&& f) const {
      if (empty()) return;
      const std::int64_t step = descending_ ? -1 : 1;
      for (std::int64_t t = best_; t >= base_ && t < base_ + span(); t += step) {
        const Level& level = levels_[index(t)];
        if (!level.empty()) f(t, level);
      }
    }

   private:
    [[nodiscard]] std::int64_t span() const { return static_cast<std::int64_t>(levels_.size()); }
    [[nodiscard]] std::size_t index(std::int64_t ticks) const {
      return static_cast<std::size_t>(ticks - base_);
    }
    void reserve_for(std::int64_t ticks);
    void advance_best();

    bool descending_;
    std::vector<Level> levels_;
    std::int64_t base_{0};
    std::int64_t best_{0};
    std::size_t count_{0};
  };

  std::optional<Trade> take_best(Ladder& ladder, Side aggressor, AgentId agent,
                                 std::int64_t step);

  Ladder bids_{true};
  Ladder asks_{false};
  OrderId max_id_{0};
  bool any_id_{false};
};

}  // namespace lobsim
