#pragma once

#include <cstdint>
#include <vector>

#include "bitprobe/bitmap.hpp"
#include "bitprobe/graph.hpp"
#include "bitprobe/probe.hpp"
#include "bitprobe/ratio.hpp"
#include "bitprobe/scheme_one.hpp"

namespace bitprobe {

/// Finds the first-stage misclassified set
/// W = { v ∉ A : v has ≥ ⌈εd⌉ probe slots in Γ(A) }.
/// A graph with an efficient list decoder can override the default scan.
class MisclassifiedDecoder {
 public:
  virtual ~MisclassifiedDecoder() = default;
  virtual std::vector<LeftVertex> decode(GraphView g1, const VertexSet& a, Ratio eps) const = 0;
};

/// Brute-force O(m·d) decoder.
class ScanDecoder final : public MisclassifiedDecoder {
 public:
  std::vector<LeftVertex> decode(GraphView g1, const VertexSet& a, Ratio eps) const override;
};

/// W computed by a full scan of L \ A (ascending).
std::vector<LeftVertex> compute_misclassified(GraphView g1, const VertexSet& a, Ratio eps);

struct TwoProbeStats {
  std::uint32_t stage1_attempts = 0;
  std::uint32_t stage2_attempts = 0;
  /// Vertices examined by all stage-2 reduction checks together.
  std::uint64_t stage2_vertices_examined = 0;
};

/// Two-probe scheme with one-sided error and cheap second-stage encoding.
///
/// Stage 1 labels Γ₁(A) in graph G₁ and accepts any G₁ leaving at most
/// ⌊|A|/2⌋ misclassified vertices W. Stage 2 picks a seeded G₂ in which no
/// vertex of W has ⌈εd⌉ slots inside Γ₂(A); only |W| vertices are checked
/// per candidate. A query answers true iff both probed bits are 1.
class TwoProbeScheme {
 public:
  TwoProbeScheme(SeededGraph g1, Bitmap b1, SeededGraph g2, Bitmap b2, std::uint64_t w_size,
                 std::uint64_t master_seed, TwoProbeStats stats = {});

  /// Throws RetriesExhausted naming the failing stage. A null decoder means ScanDecoder.
  static TwoProbeScheme encode(const VertexSet& a, unsigned universe_bits, Ratio eps,
                               const EncodeConfig& cfg = {},
                               const MisclassifiedDecoder* decoder = nullptr);

  const SeededGraph& g1() const noexcept { return g1_; }
  const SeededGraph& g2() const noexcept { return g2_; }
  const Bitmap& b1() const noexcept { return b1_; }
  const Bitmap& b2() const noexcept { return b2_; }
  std::uint64_t w_size() const noexcept { return w_size_; }
  Ratio eps() const noexcept { return g1_.params().eps; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  const TwoProbeStats& stats() const noexcept { return stats_; }

  std::uint64_t bitmap_bits() const noexcept { return b1_.size() + b2_.size(); }
  std::uint64_t cache_bits() const noexcept { return g1_.seed().bit_size() + g2_.seed().bit_size(); }

  /// `read(bitmap, pos)` is called once for the first probe and, unless
  /// short-circuiting on a 0, once for the second.
  template <class Reader>
  bool query_at(LeftVertex x, std::uint64_t i1, std::uint64_t i2, Reader&& read,
                bool short_circuit = true) const {
    const bool first = read(b1_, g1_.neighbor(x, i1));
    if (!first && short_circuit) {
      return false;
    }
    const bool second = read(b2_, g2_.neighbor(x, i2));
    return first && second;
  }
  bool query_at(LeftVertex x, std::uint64_t i1, std::uint64_t i2) const {
    return query_at(x, i1, i2, DirectReader{});
  }
  bool query(LeftVertex x, ProbeSource& probes) const;

  /// Exact probability that query(x) answers true:
  /// (slots₁/d₁)·(slots₂/d₂).
  Ratio exact_error(LeftVertex x) const;

  friend bool operator==(const TwoProbeScheme& a, const TwoProbeScheme& b) {
    return same_shape(a.g1_.params(), b.g1_.params()) && a.g1_.seed() == b.g1_.seed() &&
           same_shape(a.g2_.params(), b.g2_.params()) && a.g2_.seed() == b.g2_.seed() &&
           a.b1_ == b.b1_ && a.b2_ == b.b2_ && a.w_size_ == b.w_size_ &&
           a.master_seed_ == b.master_seed_;
  }

 private:
  SeededGraph g1_;
  Bitmap b1_;
  SeededGraph g2_;
  Bitmap b2_;
  std::uint64_t w_size_;
  std::uint64_t master_seed_;
  TwoProbeStats stats_;
};

}  // namespace bitprobe
