#include "flatfloor/rng.hpp"

#include <cmath>

namespace flatfloor {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                       0x9E3779B9u};
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  auto seq = make_seed_seq(seed, stream);
  engine_.seed(seq);
}

double RngStream::exponential() { return -std::log(uniform()); }

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace flatfloor
