#include "lobsim/news.hpp"

#include <random>
#include <stdexcept>

namespace lobsim {

NewsProcess::NewsProcess(double mu_news, double sigma_news, double f_news, Rng& rng,
                         std::int64_t start_step)
    : mu_(mu_news), sigma_(sigma_news), f_news_(f_news) {
  if (!(sigma_news >= 0.0)) throw std::invalid_argument("sigma_news must be >= 0");
  if (!(f_news >= 1.0)) throw std::invalid_argument("f_news must be >= 1");
  next_arrival_ = start_step + draw_gap(rng);
}

std::int64_t NewsProcess::draw_gap(Rng& rng) const {
  if (f_news_ <= 1.0) return 1;
  // failures before the first success, shifted onto {1, 2, ...}: mean 1/p
  std::geometric_distribution<std::int64_t> failures(1.0 / f_news_);
  return 1 + failures(rng);
}

std::optional<double> NewsProcess::poll(std::int64_t step, Rng& rng) {
  if (step != next_arrival_) return std::nullopt;
  std::normal_distribution<double> unit(0.0, 1.0);
  const double zeta = mu_ + sigma_ * unit(rng);
  next_arrival_ = step + draw_gap(rng);
  return zeta;
}

}  // namespace lobsim
