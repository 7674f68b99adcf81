#pragma once

#include <cstdint>
#include <random>

namespace flatfloor {

/// Deterministic random stream identified by (master seed, stream index).
/// Distinct indices give independently seeded engines; the same
/// (seed, index, draw count) reproduces the same values bit for bit.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() {
    ++draws_;
    return engine_();
  }
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }
  double exponential();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t draws() const { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t draws_ = 0;
};

/// Fresh seed from the system entropy source.
std::uint64_t entropy_seed();

}  // namespace flatfloor
