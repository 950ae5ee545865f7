#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bitprobe/bitmap.hpp"
#include "bitprobe/graph.hpp"
#include "bitprobe/ratio.hpp"

namespace bitprobe {

/// Outcome of a strong-reduction scan over some scope of left vertices.
struct ReductionReport {
  std::vector<LeftVertex> violating;  // ascending
  std::uint64_t threshold_count = 0;  // ⌈εd⌉
  std::uint64_t scope_size = 0;       // vertices actually examined

  bool holds() const noexcept { return violating.empty(); }
};

/// ⌈εd⌉: a vertex with this many probe slots in the marked set violates.
std::uint64_t violation_threshold(Ratio eps, std::uint64_t d);

/// Number of probe slots i < d of v that land on a marked right vertex.
/// Slots are counted with multiplicity, so this is ≥ |Γ(v) ∩ marked|.
std::uint64_t probe_overlap(GraphView g, LeftVertex v, const Bitmap& marked);

/// Scope given explicitly (e.g. the misclassified set W). Throws
/// std::invalid_argument if the scope intersects A.
ReductionReport check_strong_reduction(GraphView g, const VertexSet& a, Ratio eps,
                                       std::span<const LeftVertex> scope);

/// Scope is all of L \ A.
ReductionReport check_strong_reduction(GraphView g, const VertexSet& a, Ratio eps);

/// Vertices of L \ A with at least `threshold` slots in `marked`, ascending.
/// The full-universe scan shared by the checkers and the encoders.
std::vector<LeftVertex> scan_heavy_vertices(GraphView g, const VertexSet& a, const Bitmap& marked,
                                            std::uint64_t threshold);

/// At most ⌊|A|/2⌋ vertices of L \ A reach the violation threshold.
bool check_reduction_property(GraphView g, const VertexSet& a, Ratio eps);

}  // namespace bitprobe
