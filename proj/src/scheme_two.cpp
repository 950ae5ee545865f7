#include "bitprobe/scheme_two.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "bitprobe/error.hpp"
#include "bitprobe/reduction.hpp"
#include "encode_common.hpp"

namespace bitprobe {

std::vector<LeftVertex> ScanDecoder::decode(GraphView g1, const VertexSet& a, Ratio eps) const {
  return compute_misclassified(g1, a, eps);
}

std::vector<LeftVertex> compute_misclassified(GraphView g1, const VertexSet& a, Ratio eps) {
  return scan_heavy_vertices(g1, a, neighborhood_bitmap(g1, a),
                             violation_threshold(eps, g1.degree()));
}

TwoProbeScheme::TwoProbeScheme(SeededGraph g1, Bitmap b1, SeededGraph g2, Bitmap b2,
                               std::uint64_t w_size, std::uint64_t master_seed,
                               TwoProbeStats stats)
    : g1_(std::move(g1)),
      b1_(std::move(b1)),
      g2_(std::move(g2)),
      b2_(std::move(b2)),
      w_size_(w_size),
      master_seed_(master_seed),
      stats_(stats) {
  if (b1_.size() != g1_.params().s() || b2_.size() != g2_.params().s()) {
    throw ParamError("bitmap size differs from the right side of its graph");
  }
  if (g1_.params().m != g2_.params().m) {
    throw ParamError("both stages must share the left part");
  }
  if (g1_.params().eps != g2_.params().eps) {
    throw ParamError("both stages must use the same eps");
  }
}

TwoProbeScheme TwoProbeScheme::encode(const VertexSet& a, unsigned universe_bits, Ratio eps,
                                      const EncodeConfig& cfg,
                                      const MisclassifiedDecoder* decoder) {
  const ScanDecoder scan;
  if (decoder == nullptr) {
    decoder = &scan;
  }
  const auto plan = detail::plan_encode(a, universe_bits, eps, cfg.n_cap, cfg.indep_k);
  TwoProbeStats stats;

  // Stage 1: accept the first G₁ whose misclassified set is at most |A|/2.
  auto rng1 = make_seed_rng(cfg.master_seed, kStreamTwoProbeFirst);
  std::uint64_t fewest = std::numeric_limits<std::uint64_t>::max();
  std::optional<SeededGraph> g1;
  std::vector<LeftVertex> w;
  for (std::uint32_t attempt = 1; attempt <= cfg.max_retries && !g1; ++attempt) {
    SeededGraph candidate(plan.params, draw_seed(rng1, plan.indep_k, FieldSpec::gf64()));
    auto found = decoder->decode(candidate, a, eps);
    stats.stage1_attempts = attempt;
    if (found.size() <= a.size() / 2) {
      g1.emplace(std::move(candidate));
      w = std::move(found);
    } else {
      fewest = std::min<std::uint64_t>(fewest, found.size());
    }
  }
  if (!g1) {
    throw RetriesExhausted("two-probe stage 1", cfg.max_retries, fewest);
  }

  // Stage 2: only the vertices of W need the strong-reduction check.
  auto rng2 = make_seed_rng(cfg.master_seed, kStreamTwoProbeSecond);
  fewest = std::numeric_limits<std::uint64_t>::max();
  for (std::uint32_t attempt = 1; attempt <= cfg.max_retries; ++attempt) {
    SeededGraph g2(plan.params, draw_seed(rng2, plan.indep_k, FieldSpec::gf64()));
    const auto report = check_strong_reduction(g2, a, eps, w);
    stats.stage2_attempts = attempt;
    stats.stage2_vertices_examined += report.scope_size;
    if (report.holds()) {
      Bitmap b1 = neighborhood_bitmap(*g1, a);
      Bitmap b2 = neighborhood_bitmap(g2, a);
      return TwoProbeScheme(std::move(*g1), std::move(b1), std::move(g2), std::move(b2), w.size(),
                            cfg.master_seed, stats);
    }
    fewest = std::min<std::uint64_t>(fewest, report.violating.size());
  }
  throw RetriesExhausted("two-probe stage 2", cfg.max_retries, fewest);
}

bool TwoProbeScheme::query(LeftVertex x, ProbeSource& probes) const {
  const std::uint64_t i1 = probes.next(g1_.params().d);
  const std::uint64_t i2 = probes.next(g2_.params().d);
  return query_at(x, i1, i2);
}

Ratio TwoProbeScheme::exact_error(LeftVertex x) const {
  const std::uint64_t o1 = probe_overlap(g1_, x, b1_);
  const std::uint64_t o2 = probe_overlap(g2_, x, b2_);
  return Ratio(o1 * o2, g1_.params().d * g2_.params().d);
}

}  // namespace bitprobe
