#include "lobsim/engine.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace lobsim {

RunAborted::RunAborted(std::int64_t step, Diagnostics diagnostics)
    : std::runtime_error("run aborted at step " + std::to_string(step) +
                         ": market order hit an empty book side"),
      step_(step),
      diagnostics_(diagnostics) {}

Population init_population(const SimConfig& config, Rng& rng) {
  config.validate();
  const TickGrid grid(config.tick);
  Population pop;

  std::uniform_real_distribution<double> pf(config.p_f.lo, config.p_f.hi);
  std::uniform_real_distribution<double> chi_market(config.chi_market.lo, config.chi_market.hi);
  std::uniform_real_distribution<double> chi_opinion(config.chi_opinion.lo, config.chi_opinion.hi);
  pop.fundamentals.reserve(config.n_fundamental);
  for (std::size_t i = 0; i < config.n_fundamental; ++i) {
    FundamentalAgent a;
    a.fundamental = grid.round(pf(rng));
    a.chi_market = chi_market(rng);
    a.chi_opinion = chi_opinion(rng);
    a.p_active = config.p_active;
    pop.fundamentals.push_back(a);
  }

  std::uniform_int_distribution<std::int64_t> wait(config.t_wait.lo, config.t_wait.hi);
  for (std::size_t g = 0; g < config.groups.size(); ++g) {
    const auto& spec = config.groups[g];
    pop.groups.emplace_back(spec.slow_window, spec.fast_window);
    for (std::size_t k = 0; k < spec.count; ++k) {
      TechnicalAgent a;
      a.group = g;
      a.t_wait = wait(rng);
      a.gamma = config.gamma;
      pop.technicals.push_back(a);
    }
  }
  return pop;
}

Simulation::Simulation(const SimConfig& config, RunOptions options)
    : config_(config),
      options_(options),
      grid_(config.tick),
      pricing_{config.lambda_limit, TickGrid(config.tick), 10},
      streams_(config.seed),
      population_(init_population(config_, streams_.population)),
      news_(config.mu_news, config.sigma_news, config.f_news, streams_.news_arrivals),
      warmup_(config.effective_warmup()),
      close_(grid_.round(config.initial_price)) {
  std::size_t begin = 0;
  for (const auto& g : config_.groups) {
    group_begin_.push_back(begin);
    begin += g.count;
  }
  group_begin_.push_back(begin);

  record_.grid = grid_;
  record_.n_fundamental = config_.n_fundamental;
  record_.first_step = config_.discard_warmup ? warmup_ : 0;
  const auto expected = static_cast<std::size_t>(config_.steps + (config_.discard_warmup ? 0 : warmup_));
  record_.close.reserve(expected);
  record_.volume.reserve(expected);
  record_.tech_active.reserve(expected);
  actors_.reserve(config_.n_fundamental + population_.technicals.size());
}

void Simulation::inject_signal(std::size_t group, Signal signal) {
  for (std::size_t i = group_begin_.at(group); i < group_begin_.at(group + 1); ++i) {
    technical_on_signal(population_.technicals[i], signal, step_);
  }
}

void Simulation::expire_orders() {
  while (!expiries_.empty() && expiries_.front().step + config_.max_resting_age <= step_) {
    const Expiry e = expiries_.front();
    expiries_.pop_front();
    if (book_.cancel(e.id, e.side, e.price)) ++record_.diagnostics.expired_orders;
  }
}

void Simulation::on_trade(const Trade& trade) {
  last_trade_ = trade.price;
  ++step_volume_;
  if (trade.buyer == trade.seller) ++record_.diagnostics.self_trades;
  if (record_.is_technical(trade.buyer) || record_.is_technical(trade.seller)) {
    step_tech_active_ = true;
  }
  const bool recording = step_ >= record_.first_step;
  if (options_.trade_log && recording) record_.trades.push_back(trade);
}

void Simulation::process_fundamental(std::uint32_t index) {
  FundamentalAgent& agent = population_.fundamentals[index];
  const Price fallback = last_trade_.value_or(grid_.round(config_.initial_price));
  const Price mid = book_.mid_spread(fallback);
  apply_opinion(agent, mid, grid_);

  bool clamped = false;
  const Action action = fundamental_decide(agent, book_.best_bid(), book_.best_ask(), mid,
                                           pricing_, streams_.limit_prices, &clamped);
  if (clamped) ++record_.diagnostics.limit_clamps;
  const auto id = static_cast<AgentId>(index);

  if (action.is_market()) {
    // the decision only goes to market when the opposite quote exists
    if (auto trade = book_.submit_market(action.side(), id, step_)) on_trade(*trade);
  } else if (action.is_limit()) {
    const LimitOrder order{next_order_id_++, action.side(), action.price, id, {step_, seq_++}};
    if (auto trade = book_.submit_limit(order)) {
      on_trade(*trade);
    } else if (config_.max_resting_age > 0) {
      expiries_.push_back({step_, order.id, order.side, order.price});
    }
  }
}

void Simulation::process_technical(std::uint32_t index, Side side) {
  TechnicalAgent& agent = population_.technicals[index];
  const auto id = static_cast<AgentId>(config_.n_fundamental + index);
  ++seq_;
  if (auto trade = book_.submit_market(side, id, step_)) {
    technical_on_execution(agent, side, trade->price);
    on_trade(*trade);
    return;
  }
  ++record_.diagnostics.liquidity_failures;
  if (config_.liquidity_failure == LiquidityPolicy::abort) {
    record_.diagnostics.final_bid_depth = book_.bid_count();
    record_.diagnostics.final_ask_depth = book_.ask_count();
    throw RunAborted(step_, record_.diagnostics);
  }
}

void Simulation::step() {
  const std::int64_t t = step_;
  const bool live = technicals_live();
  step_volume_ = 0;
  step_tech_active_ = false;
  seq_ = 0;
  if (config_.max_resting_age > 0) expire_orders();

  // (1) news
  if (auto zeta = news_.poll(t, streams_.news_arrivals)) {
    for (auto& agent : population_.fundamentals) {
      apply_news(agent, *zeta, config_.sigma_dpf, grid_, streams_.news_response);
    }
    if (t >= record_.first_step) record_.news.push_back({t, *zeta});
  }

  // (2) oscillators on the previous close
  for (std::size_t g = 0; g < population_.groups.size(); ++g) {
    const Signal s = population_.groups[g].update(close_);
    if (live && s != Signal::none) inject_signal(g, s);
  }

  // (3) activation list
  actors_.clear();
  Rng& rng = streams_.activation;
  const auto n_fund = static_cast<std::uint32_t>(population_.fundamentals.size());
  if (config_.p_active >= 1.0) {
    for (std::uint32_t i = 0; i < n_fund; ++i) actors_.push_back({i, false, Side::buy});
  } else if (config_.p_active > 0.0) {
    // Geometric gaps between successes: same law as one Bernoulli per agent.
    std::geometric_distribution<std::uint32_t> gap(config_.p_active);
    for (std::uint64_t i = gap(rng); i < n_fund; i += 1 + static_cast<std::uint64_t>(gap(rng))) {
      actors_.push_back({static_cast<std::uint32_t>(i), false, Side::buy});
    }
  }
  if (live) {
    for (std::uint32_t i = 0; i < population_.technicals.size(); ++i) {
      TechnicalAgent& agent = population_.technicals[i];
      if (auto exit = technical_profit_check(agent, close_, config_.symmetric_profit_taking)) {
        actors_.push_back({i, true, *exit});
      } else if (agent.pending && agent.pending->due_step <= t) {
        actors_.push_back({i, true, agent.pending->side});
        agent.pending.reset();
      }
    }
  }

  // (4) + (5)
  std::shuffle(actors_.begin(), actors_.end(), rng);
  for (const Actor& a : actors_) {
    if (a.technical) {
      process_technical(a.index, a.side);
    } else {
      process_fundamental(a.index);
    }
  }

  // (6)
  if (step_volume_ > 0) close_ = *last_trade_;
  if (t >= record_.first_step) {
    record_.close.push_back(close_);
    record_.volume.push_back(step_volume_);
    record_.tech_active.push_back(step_tech_active_ ? 1 : 0);
  }
  ++step_;
  if (step_ == warmup_) {
    record_.diagnostics.bid_depth_after_warmup = book_.bid_count();
    record_.diagnostics.ask_depth_after_warmup = book_.ask_count();
  }
}

SeriesRecord Simulation::run() {
  const std::int64_t total = warmup_ + config_.steps;
  while (step_ < total) step();
  record_.diagnostics.final_bid_depth = book_.bid_count();
  record_.diagnostics.final_ask_depth = book_.ask_count();
  return record_;
}

SeriesRecord run(const SimConfig& config, RunOptions options) {
  return Simulation(config, options).run();
}

}  // namespace lobsim
