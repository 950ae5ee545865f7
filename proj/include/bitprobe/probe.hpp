#pragma once

#include <cstdint>
#include <random>

namespace bitprobe {

/// Seedable source of uniform probe indices for randomized queries.
class ProbeSource {
 public:
  explicit ProbeSource(std::uint64_t seed = 0) : rng_(seed) {}

  /// Uniform over [0, d).
  std::uint64_t next(std::uint64_t d) {
    return std::uniform_int_distribution<std::uint64_t>(0, d - 1)(rng_);
  }

 private:
  std::mt19937_64 rng_;
};

/// Bit reader that counts every bitmap access; used to audit probe counts.
class CountingReader {
 public:
  template <class Bits>
  bool operator()(const Bits& bits, std::uint64_t pos) {
    ++reads_;
    return bits.test(pos);
  }

  std::uint64_t reads() const noexcept { return reads_; }
  void reset() noexcept { reads_ = 0; }

 private:
  std::uint64_t reads_ = 0;
};

/// Plain reader with no bookkeeping.
struct DirectReader {
  template <class Bits>
  bool operator()(const Bits& bits, std::uint64_t pos) const {
    return bits.test(pos);
  }
};

}  // namespace bitprobe
