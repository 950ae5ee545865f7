#include "bitprobe/scheme_one.hpp"

#include <algorithm>
#include <limits>

#include "bitprobe/error.hpp"
#include "bitprobe/reduction.hpp"
#include "encode_common.hpp"

namespace bitprobe {

OneProbeScheme::OneProbeScheme(SeededGraph graph, Bitmap bitmap, std::uint64_t master_seed,
                               std::uint32_t retries_used)
    : graph_(std::move(graph)),
      bitmap_(std::move(bitmap)),
      master_seed_(master_seed),
      retries_used_(retries_used) {
  if (bitmap_.size() != graph_.params().s()) {
    throw ParamError("bitmap size differs from the right side of the graph");
  }
}

OneProbeScheme OneProbeScheme::encode(const VertexSet& a, unsigned universe_bits, Ratio eps,
                                      const EncodeConfig& cfg) {
  const auto plan = detail::plan_encode(a, universe_bits, eps, cfg.n_cap, cfg.indep_k);
  const std::uint64_t threshold = violation_threshold(eps, plan.params.d);
  auto rng = make_seed_rng(cfg.master_seed, kStreamOneProbe);
  std::uint64_t fewest = std::numeric_limits<std::uint64_t>::max();
  for (std::uint32_t attempt = 1; attempt <= cfg.max_retries; ++attempt) {
    SeededGraph graph(plan.params, draw_seed(rng, plan.indep_k, FieldSpec::gf64()));
    Bitmap marked = neighborhood_bitmap(graph, a);
    const auto violating = scan_heavy_vertices(graph, a, marked, threshold);
    if (violating.empty()) {
      return OneProbeScheme(std::move(graph), std::move(marked), cfg.master_seed, attempt);
    }
    fewest = std::min<std::uint64_t>(fewest, violating.size());
  }
  throw RetriesExhausted("one-probe", cfg.max_retries, fewest);
}

bool OneProbeScheme::query(LeftVertex x, ProbeSource& probes) const {
  return query_at(x, probes.next(params().d));
}

Ratio OneProbeScheme::exact_error(LeftVertex x) const {
  return Ratio(probe_overlap(graph_, x, bitmap_), params().d);
}

}  // namespace bitprobe
