#include "bitprobe/bmrv.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

#include "bitprobe/error.hpp"
#include "bitprobe/reduction.hpp"
#include "bitprobe/scheme_one.hpp"
#include "encode_common.hpp"
#include "parallel.hpp"

namespace bitprobe {

namespace {

// Vertices with ≥ threshold probe slots carrying the wrong label.
std::vector<LeftVertex> erroneous_vertices(GraphView g, const VertexSet& a, const Bitmap& bits,
                                           std::uint64_t threshold) {
  const std::uint64_t m = g.left_size();
  const std::uint64_t d = g.degree();
  std::vector<std::vector<LeftVertex>> parts(detail::chunk_count(m));
  detail::parallel_chunks(m, [&](std::uint64_t begin, std::uint64_t end, std::size_t chunk) {
    std::vector<RightVertex> nb(d);
    for (LeftVertex v = begin; v < end; ++v) {
      g.neighbors(v, nb);
      std::uint64_t ones = 0;
      for (auto w : nb) {
        ones += bits.test(w) ? 1 : 0;
      }
      const std::uint64_t wrong = a.contains(v) ? d - ones : ones;
      if (wrong >= threshold) {
        parts[chunk].push_back(v);
      }
    }
  });
  std::vector<LeftVertex> out;
  for (auto& p : parts) {
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

}  // namespace

std::uint64_t default_max_iters(std::uint64_t m) {
  const std::uint64_t log_m = m <= 1 ? 0 : static_cast<std::uint64_t>(std::bit_width(m - 1));
  return 2 * log_m + 2;
}

Labeling greedy_label(GraphView g, const VertexSet& a, Ratio eps,
                      std::optional<std::uint64_t> max_iters, const RelabelObserver& observer) {
  const std::uint64_t cap = max_iters.value_or(default_max_iters(g.left_size()));
  const std::uint64_t threshold = violation_threshold(eps, g.degree());
  Labeling lab{Bitmap(g.right_size()), 0, {}};
  if (a.empty()) {
    return lab;
  }

  std::vector<LeftVertex> current(a.begin(), a.end());
  bool label = true;
  std::vector<RightVertex> nb(g.degree());
  for (;;) {
    if (lab.iterations == cap) {
      throw NonConvergence(lab.trace, cap);
    }
    Bitmap before;
    if (observer) {
      before = lab.bits;
    }
    for (auto v : current) {
      g.neighbors(v, nb);
      for (auto w : nb) {
        lab.bits.assign(w, label);
      }
    }
    ++lab.iterations;
    if (observer) {
      observer(RelabelRound{lab.iterations, label, current, &before, &lab.bits});
    }

    auto erroneous = erroneous_vertices(g, a, lab.bits, threshold);
    lab.trace.push_back(erroneous.size());
    if (erroneous.empty()) {
      return lab;
    }
    // Writing `label` over Γ(S) can only hurt the other side, so the new
    // erroneous set lies entirely on one side.
    const bool members = a.contains(erroneous.front());
    for (auto v : erroneous) {
      if (a.contains(v) != members) {
        throw std::logic_error("greedy_label: erroneous set spans both sides");
      }
    }
    label = members;
    current = std::move(erroneous);
  }
}

LabelingReport verify_labeling(GraphView g, const VertexSet& a, Ratio eps, const Labeling& lab) {
  const std::uint64_t d = g.degree();
  std::uint64_t worst_member = 0;
  std::uint64_t worst_nonmember = 0;
  std::vector<RightVertex> nb(d);
  for (LeftVertex v = 0; v < g.left_size(); ++v) {
    g.neighbors(v, nb);
    std::uint64_t ones = 0;
    for (auto w : nb) {
      ones += lab.bits.test(w) ? 1 : 0;
    }
    if (a.contains(v)) {
      worst_member = std::max(worst_member, d - ones);
    } else {
      worst_nonmember = std::max(worst_nonmember, ones);
    }
  }
  LabelingReport report;
  report.max_member_error = Ratio(worst_member, d);
  report.max_nonmember_error = Ratio(worst_nonmember, d);
  report.passed = report.max_member_error <= eps && report.max_nonmember_error <= eps;
  return report;
}

BmrvScheme::BmrvScheme(SeededGraph graph, Bitmap labels, std::uint64_t master_seed,
                       std::uint64_t iterations)
    : graph_(std::move(graph)),
      labels_(std::move(labels)),
      master_seed_(master_seed),
      iterations_(iterations) {
  if (labels_.size() != graph_.params().s()) {
    throw ParamError("labeling size differs from the right side of the graph");
  }
}

BmrvScheme BmrvScheme::encode(const VertexSet& a, unsigned universe_bits, Ratio eps,
                              const BmrvConfig& cfg) {
  const auto plan = detail::plan_encode(a, universe_bits, eps, cfg.n_cap, cfg.indep_k);
  auto rng = make_seed_rng(cfg.master_seed, kStreamBmrv);
  std::uint64_t fewest = std::numeric_limits<std::uint64_t>::max();
  for (std::uint32_t attempt = 1; attempt <= cfg.max_retries; ++attempt) {
    SeededGraph graph(plan.params, draw_seed(rng, plan.indep_k, FieldSpec::gf64()));
    try {
      auto lab = greedy_label(graph, a, eps, cfg.max_iters);
      BmrvScheme scheme(std::move(graph), std::move(lab.bits), cfg.master_seed, lab.iterations);
      scheme.retries_used_ = attempt;
      return scheme;
    } catch (const NonConvergence& e) {
      if (!e.trace().empty()) {
        fewest = std::min(fewest, e.trace().back());
      }
    }
  }
  throw RetriesExhausted("bmrv", cfg.max_retries, fewest);
}

}  // namespace bitprobe
