#pragma once

// Reproducible random streams.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the standard.
// Uniforms are (x >> 11) * 2^-53; Gaussians use boost::random's
// normal_distribution, which has a fixed portable algorithm. A stream is
// seeded through std::seed_seq{seed_lo, seed_hi, stream_lo, stream_hi}, so
// replicate r of a study always sees the same draws regardless of threading.

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>

namespace dbp {

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() { return normal_(engine_); }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace dbp
