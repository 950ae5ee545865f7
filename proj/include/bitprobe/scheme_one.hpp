#pragma once

#include <cstdint>
#include <span>

#include "bitprobe/bitmap.hpp"
#include "bitprobe/graph.hpp"
#include "bitprobe/kwise.hpp"
#include "bitprobe/probe.hpp"
#include "bitprobe/ratio.hpp"

namespace bitprobe {

struct EncodeConfig {
  std::uint64_t n_cap = 0;         // 0: max(|A|, 1)
  std::size_t indep_k = 0;         // 0: default_indep_k(u)
  std::uint64_t master_seed = 0;
  std::uint32_t max_retries = 64;
};

/// Random stream ids derived from master_seed, one per encode stage.
inline constexpr std::uint64_t kStreamOneProbe = 1;
inline constexpr std::uint64_t kStreamTwoProbeFirst = 2;
inline constexpr std::uint64_t kStreamTwoProbeSecond = 4;
inline constexpr std::uint64_t kStreamBmrv = 3;

/// One-probe scheme with one-sided error.
///
/// The cached word is a polynomial seed defining a pseudo-random graph in
/// which no vertex outside A has ⌈εd⌉ or more probe slots inside Γ(A); the
/// main storage is the indicator of Γ(A). A query evaluates the seed once
/// and reads a single bit. Members always get `true`; a non-member gets
/// `true` with probability below ε.
class OneProbeScheme {
 public:
  /// Throws ParamError if the bitmap size differs from s.
  OneProbeScheme(SeededGraph graph, Bitmap bitmap, std::uint64_t master_seed,
                 std::uint32_t retries_used = 0);

  /// Tries seeds from stream kStreamOneProbe of cfg.master_seed until the
  /// strong-reduction scan over L \ A comes back empty.
  /// Throws ParamError for bad input and RetriesExhausted when every seed fails.
  static OneProbeScheme encode(const VertexSet& a, unsigned universe_bits, Ratio eps,
                               const EncodeConfig& cfg = {});

  const SeededGraph& graph() const noexcept { return graph_; }
  const GraphParams& params() const noexcept { return graph_.params(); }
  const PolySeed& seed() const noexcept { return graph_.seed(); }
  const Bitmap& bitmap() const noexcept { return bitmap_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  /// Number of seeds tried by encode (the accepted one included).
  std::uint32_t retries_used() const noexcept { return retries_used_; }

  std::uint64_t bitmap_bits() const noexcept { return bitmap_.size(); }
  std::uint64_t cache_bits() const noexcept { return seed().bit_size(); }

  /// Bit position read by probe i of x. Throws std::out_of_range.
  RightVertex position(LeftVertex x, std::uint64_t i) const { return graph_.neighbor(x, i); }

  template <class Reader>
  bool query_at(LeftVertex x, std::uint64_t i, Reader&& read) const {
    return read(bitmap_, position(x, i));
  }
  bool query_at(LeftVertex x, std::uint64_t i) const { return query_at(x, i, DirectReader{}); }
  bool query(LeftVertex x, ProbeSource& probes) const;

  /// Exact probability that query(x) answers true: (slots of x in the
  /// bitmap)/d. 1 for members; below ε for every non-member.
  Ratio exact_error(LeftVertex x) const;

  friend bool operator==(const OneProbeScheme& a, const OneProbeScheme& b) {
    return same_shape(a.params(), b.params()) && a.seed() == b.seed() &&
           a.bitmap_ == b.bitmap_ && a.master_seed_ == b.master_seed_;
  }

 private:
  SeededGraph graph_;
  Bitmap bitmap_;
  std::uint64_t master_seed_;
  std::uint32_t retries_used_;
};

}  // namespace bitprobe
