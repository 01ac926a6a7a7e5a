#pragma once

#include <cstdint>
#include <random>

namespace lobsim {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Order-sensitive hash of a seed path, e.g. (root, sweep index, run index).
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a,
                                    std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(root) ^ a) + b);
}

/// Per-purpose substreams spawned from one root seed. Each purpose has its own
/// engine, so e.g. adding agents does not perturb the news stream.
struct RngStreams {
  enum Purpose : std::uint64_t {
    kPopulation = 1,
    kNewsArrivals = 2,
    kNewsResponse = 3,
    kActivation = 4,
    kLimitPrices = 5,
  };

  explicit RngStreams(std::uint64_t root)
      : population(derive_seed(root, kPopulation)),
        news_arrivals(derive_seed(root, kNewsArrivals)),
        news_response(derive_seed(root, kNewsResponse)),
        activation(derive_seed(root, kActivation)),
        limit_prices(derive_seed(root, kLimitPrices)) {}

  Rng population;
  Rng news_arrivals;
  Rng news_response;
  Rng activation;
  Rng limit_prices;
};

}  // namespace lobsim
