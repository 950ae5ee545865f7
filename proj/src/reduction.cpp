#include "bitprobe/reduction.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace bitprobe {

std::uint64_t violation_threshold(Ratio eps, std::uint64_t d) { return eps.ceil_times(d); }

std::uint64_t probe_overlap(GraphView g, LeftVertex v, const Bitmap& marked) {
  std::vector<RightVertex> nb(g.degree());
  g.neighbors(v, nb);
  std::uint64_t hits = 0;
  for (auto w : nb) {
    hits += marked.test(w) ? 1 : 0;
  }
  return hits;
}

std::vector<LeftVertex> scan_heavy_vertices(GraphView g, const VertexSet& a, const Bitmap& marked,
                                            std::uint64_t threshold) {
  const std::uint64_t m = g.left_size();
  std::vector<std::vector<LeftVertex>> parts(detail::chunk_count(m));
  detail::parallel_chunks(m, [&](std::uint64_t begin, std::uint64_t end, std::size_t chunk) {
    std::vector<RightVertex> nb(g.degree());
    auto& out = parts[chunk];
    for (LeftVertex v = begin; v < end; ++v) {
      if (a.contains(v)) {
        continue;
      }
      g.neighbors(v, nb);
      std::uint64_t hits = 0;
      for (auto w : nb) {
        hits += marked.test(w) ? 1 : 0;
      }
      if (hits >= threshold) {
        out.push_back(v);
      }
    }
  });
  std::vector<LeftVertex> heavy;
  for (auto& p : parts) {
    heavy.insert(heavy.end(), p.begin(), p.end());
  }
  return heavy;
}

ReductionReport check_strong_reduction(GraphView g, const VertexSet& a, Ratio eps,
                                       std::span<const LeftVertex> scope) {
  ReductionReport report;
  report.threshold_count = violation_threshold(eps, g.degree());
  const Bitmap marked = neighborhood_bitmap(g, a);
  std::vector<LeftVertex> ordered(scope.begin(), scope.end());
  std::sort(ordered.begin(), ordered.end());
  for (auto x : ordered) {
    if (a.contains(x)) {
      throw std::invalid_argument("reduction scope intersects A at vertex " + std::to_string(x));
    }
    ++report.scope_size;
    if (probe_overlap(g, x, marked) >= report.threshold_count) {
      report.violating.push_back(x);
    }
  }
  return report;
}

ReductionReport check_strong_reduction(GraphView g, const VertexSet& a, Ratio eps) {
  ReductionReport report;
  report.threshold_count = violation_threshold(eps, g.degree());
  report.violating = scan_heavy_vertices(g, a, neighborhood_bitmap(g, a), report.threshold_count);
  report.scope_size = g.left_size() - a.size();
  return report;
}

bool check_reduction_property(GraphView g, const VertexSet& a, Ratio eps) {
  return check_strong_reduction(g, a, eps).violating.size() <= a.size() / 2;
}

}  // namespace bitprobe
