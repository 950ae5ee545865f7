#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <variant>
#include <vector>

#include "bitprobe/bitmap.hpp"
#include "bitprobe/kwise.hpp"
#include "bitprobe/ratio.hpp"

namespace bitprobe {

using LeftVertex = std::uint64_t;
using RightVertex = std::uint64_t;

/// Sorted, duplicate-free set of left vertices.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<LeftVertex> items);
  VertexSet(std::initializer_list<LeftVertex> items) : VertexSet(std::vector<LeftVertex>(items)) {}

  bool contains(LeftVertex v) const noexcept;
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  std::span<const LeftVertex> items() const noexcept { return items_; }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<LeftVertex> items_;
};

/// Shape of a left-regular bipartite graph: |L| = m, |R| = s = 2^log2_s,
/// left degree d, the target error ε and the set-size capacity n_cap.
struct GraphParams {
  std::uint64_t m = 0;
  std::uint64_t n_cap = 0;
  unsigned log2_s = 0;
  std::uint64_t d = 0;
  Ratio eps;

  std::uint64_t s() const noexcept { return std::uint64_t{1} << log2_s; }
  /// log₂ m; throws ParamError when m is not a power of two.
  unsigned universe_bits() const;

  /// Structural checks only (no sizing rule): m ≥ n_cap ≥ 1, d ≥ 1,
  /// 0 < ε < 1, log2_s ≤ 63. Throws ParamError.
  void validate() const;

  friend bool operator==(const GraphParams&, const GraphParams&) = default;
};

/// Equal m, s, d and ε. n_cap is a build-time capacity and is not part of
/// a serialized scheme, so scheme equality uses this instead of ==.
inline bool same_shape(const GraphParams& a, const GraphParams& b) noexcept {
  return a.m == b.m && a.log2_s == b.log2_s && a.d == b.d && a.eps == b.eps;
}

/// Sizing for a strong-reduction graph on a universe of 2^universe_bits:
/// d = ⌈2u/ε⌉ and s = the smallest power of two ≥ 2·d²·n_cap.
///
/// Throws ParamError on invalid input or if m·d edge indices do not fit
/// the field used for seeded evaluation.
GraphParams derive_params(unsigned universe_bits, std::uint64_t n_cap, Ratio eps,
                          const FieldSpec& field = FieldSpec::gf64());

/// Graph whose edge (v, i) ends at the low log2_s bits of poly_eval(seed, v·d + i).
class SeededGraph {
 public:
  /// Throws ParamError if m·d points or log2_s bits do not fit the seed's field.
  SeededGraph(GraphParams params, PolySeed seed);

  const GraphParams& params() const noexcept { return params_; }
  const PolySeed& seed() const noexcept { return seed_; }

  /// Throws std::out_of_range for v ≥ m or i ≥ d.
  RightVertex neighbor(LeftVertex v, std::uint64_t i) const;
  /// All d neighbors of v in probe order; out.size() must be d.
  void neighbors(LeftVertex v, std::span<RightVertex> out) const;

  friend bool operator==(const SeededGraph&, const SeededGraph&) = default;

 private:
  GraphParams params_;
  PolySeed seed_;
};

/// Graph with stored adjacency; meant for toy instances and oracles.
class ExplicitGraph {
 public:
  /// Throws ParamError if the shape is inconsistent or an entry is ≥ s.
  ExplicitGraph(GraphParams params, const std::vector<std::vector<RightVertex>>& adjacency);

  const GraphParams& params() const noexcept { return params_; }

  RightVertex neighbor(LeftVertex v, std::uint64_t i) const;
  void neighbors(LeftVertex v, std::span<RightVertex> out) const;
  std::span<const RightVertex> row(LeftVertex v) const;

  friend bool operator==(const ExplicitGraph&, const ExplicitGraph&) = default;

 private:
  GraphParams params_;
  std::vector<RightVertex> adjacency_;
};

/// Non-owning handle over either graph representation.
class GraphView {
 public:
  GraphView(const SeededGraph& g) : g_(&g) {}    // NOLINT(google-explicit-constructor)
  GraphView(const ExplicitGraph& g) : g_(&g) {}  // NOLINT(google-explicit-constructor)

  const GraphParams& params() const noexcept;
  std::uint64_t degree() const noexcept { return params().d; }
  std::uint64_t left_size() const noexcept { return params().m; }
  std::uint64_t right_size() const noexcept { return params().s(); }

  RightVertex neighbor(LeftVertex v, std::uint64_t i) const;
  void neighbors(LeftVertex v, std::span<RightVertex> out) const;

 private:
  std::variant<const SeededGraph*, const ExplicitGraph*> g_;
};

/// Indicator of Γ(A) over [0, s).
Bitmap neighborhood_bitmap(GraphView g, const VertexSet& a);

inline constexpr std::uint64_t kDefaultMaterializeBudget = std::uint64_t{1} << 24;

/// Explicit copy of a seeded graph. Throws BudgetExceeded when m·d > budget.
ExplicitGraph materialize(const SeededGraph& g, std::uint64_t budget = kDefaultMaterializeBudget);

}  // namespace bitprobe
