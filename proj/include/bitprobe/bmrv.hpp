#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bitprobe/bitmap.hpp"
#include "bitprobe/graph.hpp"
#include "bitprobe/kwise.hpp"
#include "bitprobe/ratio.hpp"

namespace bitprobe {

/// Right-vertex labeling produced by the alternating greedy relabeling.
struct Labeling {
  Bitmap bits;
  std::uint64_t iterations = 0;
  /// Size of the erroneous set after each round: |B|, |A'|, |B'|, ...
  std::vector<std::uint64_t> trace;
};

/// One relabeling round, reported to an optional observer.
struct RelabelRound {
  std::uint64_t round = 0;  // 1-based
  bool label = false;       // value written to Γ(relabeled)
  std::span<const LeftVertex> relabeled;
  const Bitmap* before = nullptr;
  const Bitmap* after = nullptr;
};

using RelabelObserver = std::function<void(const RelabelRound&)>;

/// 2·⌈log₂ m⌉ + 2.
std::uint64_t default_max_iters(std::uint64_t m);

/// Labels Γ(A) with 1, then alternately relabels the neighborhoods of the
/// erroneous non-members (to 0) and erroneous members (to 1) until every
/// vertex has fewer than ⌈εd⌉ wrongly-labeled probe slots.
///
/// Throws NonConvergence if vertices are still erroneous after max_iters rounds.
Labeling greedy_label(GraphView g, const VertexSet& a, Ratio eps,
                      std::optional<std::uint64_t> max_iters = std::nullopt,
                      const RelabelObserver& observer = {});

struct LabelingReport {
  Ratio max_member_error;     // worst fraction of a member's slots labeled 0
  Ratio max_nonmember_error;  // worst fraction of a non-member's slots labeled 1
  bool passed = false;        // both ≤ ε
};

LabelingReport verify_labeling(GraphView g, const VertexSet& a, Ratio eps, const Labeling& lab);

struct BmrvConfig {
  std::uint64_t n_cap = 0;         // 0: max(|A|, 1)
  std::size_t indep_k = 0;         // 0: default_indep_k(u)
  std::uint64_t master_seed = 0;
  std::uint32_t max_retries = 64;
  std::optional<std::uint64_t> max_iters;
};

/// Two-sided one-probe scheme: a seeded graph plus a greedy labeling of its right side.
class BmrvScheme {
 public:
  BmrvScheme(SeededGraph graph, Bitmap labels, std::uint64_t master_seed,
             std::uint64_t iterations = 0);

  /// Retries seeds (stream 3 of master_seed) until the labeling converges.
  /// Throws RetriesExhausted.
  static BmrvScheme encode(const VertexSet& a, unsigned universe_bits, Ratio eps,
                           const BmrvConfig& cfg = {});

  const SeededGraph& graph() const noexcept { return graph_; }
  const GraphParams& params() const noexcept { return graph_.params(); }
  const Bitmap& labels() const noexcept { return labels_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t iterations() const noexcept { return iterations_; }
  std::uint32_t retries_used() const noexcept { return retries_used_; }

  RightVertex position(LeftVertex x, std::uint64_t i) const { return graph_.neighbor(x, i); }
  bool query_at(LeftVertex x, std::uint64_t i) const { return labels_.test(position(x, i)); }

  /// Serialized identity: graph, labels and master seed.
  friend bool operator==(const BmrvScheme& a, const BmrvScheme& b) {
    return same_shape(a.params(), b.params()) && a.graph_.seed() == b.graph_.seed() &&
           a.labels_ == b.labels_ && a.master_seed_ == b.master_seed_;
  }

 private:
  SeededGraph graph_;
  Bitmap labels_;
  std::uint64_t master_seed_;
  std::uint64_t iterations_;
  std::uint32_t retries_used_ = 0;
};

}  // namespace bitprobe
