#include "bitprobe/graph.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "bitprobe/error.hpp"

namespace bitprobe {

namespace {

using u128 = unsigned __int128;

void check_vertex(const GraphParams& p, LeftVertex v, std::uint64_t i) {
  if (v >= p.m) {
    throw std::out_of_range("left vertex " + std::to_string(v) + " outside [0, " +
                            std::to_string(p.m) + ")");
  }
  if (i >= p.d) {
    throw std::out_of_range("probe index " + std::to_string(i) + " outside [0, " +
                            std::to_string(p.d) + ")");
  }
}

// Edge (v, i) is evaluated at the field point v·d + i.
void check_field_fit(const GraphParams& p, const FieldSpec& field) {
  const u128 points = static_cast<u128>(p.m) * p.d;
  if (field.width() < 64 && points > (u128{1} << field.width())) {
    throw ParamError("m·d = " + std::to_string(static_cast<std::uint64_t>(points)) +
                     " edge indices do not fit GF(2^" + std::to_string(field.width()) + ")");
  }
  if (field.width() == 64 && points > (u128{1} << 64)) {
    throw ParamError("m·d edge indices do not fit GF(2^64)");
  }
  if (p.log2_s > field.width()) {
    throw ParamError("right side of 2^" + std::to_string(p.log2_s) +
                     " vertices is wider than the field");
  }
}

}  // namespace

VertexSet::VertexSet(std::vector<LeftVertex> items) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool VertexSet::contains(LeftVertex v) const noexcept {
  return std::binary_search(items_.begin(), items_.end(), v);
}

unsigned GraphParams::universe_bits() const {
  if (!std::has_single_bit(m)) {
    throw ParamError("universe size " + std::to_string(m) + " is not a power of two");
  }
  return static_cast<unsigned>(std::countr_zero(m));
}

void GraphParams::validate() const {
  if (n_cap < 1 || m < n_cap) {
    throw ParamError("need m ≥ n_cap ≥ 1 (m = " + std::to_string(m) +
                     ", n_cap = " + std::to_string(n_cap) + ")");
  }
  if (d < 1) {
    throw ParamError("left degree must be at least 1");
  }
  if (!eps.is_proper()) {
    throw ParamError("eps must satisfy 0 < eps < 1, got " + eps.to_string());
  }
  if (log2_s > 63) {
    throw ParamError("right side too large");
  }
}

GraphParams derive_params(unsigned universe_bits, std::uint64_t n_cap, Ratio eps,
                          const FieldSpec& field) {
  if (universe_bits < 1 || universe_bits > 63) {
    throw ParamError("universe_bits must be in [1, 63]");
  }
  GraphParams p;
  p.m = std::uint64_t{1} << universe_bits;
  p.n_cap = n_cap;
  p.eps = eps;
  p.d = 1;
  p.validate();

  p.d = Ratio(2 * static_cast<std::uint64_t>(universe_bits) * eps.den(), eps.num()).ceil_times(1);
  const u128 s_raw = u128{2} * p.d * p.d * n_cap;
  if (s_raw > (u128{1} << 63)) {
    throw ParamError("right side 2·d²·n exceeds 2^63");
  }
  p.log2_s = static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(s_raw) - 1));
  p.validate();
  check_field_fit(p, field);
  return p;
}

SeededGraph::SeededGraph(GraphParams params, PolySeed seed)
    : params_(params), seed_(std::move(seed)) {
  params_.validate();
  check_field_fit(params_, seed_.field());
}

RightVertex SeededGraph::neighbor(LeftVertex v, std::uint64_t i) const {
  check_vertex(params_, v, i);
  return poly_eval(seed_, v * params_.d + i) & (params_.s() - 1);
}

void SeededGraph::neighbors(LeftVertex v, std::span<RightVertex> out) const {
  check_vertex(params_, v, 0);
  if (out.size() != params_.d) {
    throw std::invalid_argument("neighbors: output span must hold d entries");
  }
  for (std::uint64_t i = 0; i < params_.d; ++i) {
    out[i] = v * params_.d + i;
  }
  poly_eval_many(seed_, out, out);
  const std::uint64_t mask = params_.s() - 1;
  for (auto& w : out) {
    w &= mask;
  }
}

ExplicitGraph::ExplicitGraph(GraphParams params,
                             const std::vector<std::vector<RightVertex>>& adjacency)
    : params_(params) {
  params_.validate();
  if (adjacency.size() != params_.m) {
    throw ParamError("adjacency must list every left vertex");
  }
  adjacency_.reserve(params_.m * params_.d);
  for (const auto& row : adjacency) {
    if (row.size() != params_.d) {
      throw ParamError("every left vertex needs exactly d neighbors");
    }
    for (auto w : row) {
      if (w >= params_.s()) {
        throw ParamError("right vertex " + std::to_string(w) + " outside [0, s)");
      }
      adjacency_.push_back(w);
    }
  }
}

RightVertex ExplicitGraph::neighbor(LeftVertex v, std::uint64_t i) const {
  check_vertex(params_, v, i);
  return adjacency_[v * params_.d + i];
}

std::span<const RightVertex> ExplicitGraph::row(LeftVertex v) const {
  check_vertex(params_, v, 0);
  return std::span<const RightVertex>(adjacency_).subspan(v * params_.d, params_.d);
}

void ExplicitGraph::neighbors(LeftVertex v, std::span<RightVertex> out) const {
  const auto r = row(v);
  if (out.size() != r.size()) {
    throw std::invalid_argument("neighbors: output span must hold d entries");
  }
  std::copy(r.begin(), r.end(), out.begin());
}

const GraphParams& GraphView::params() const noexcept {
  return std::visit([](auto* g) -> const GraphParams& { return g->params(); }, g_);
}

RightVertex GraphView::neighbor(LeftVertex v, std::uint64_t i) const {
  return std::visit([&](auto* g) { return g->neighbor(v, i); }, g_);
}

void GraphView::neighbors(LeftVertex v, std::span<RightVertex> out) const {
  std::visit([&](auto* g) { g->neighbors(v, out); }, g_);
}

Bitmap neighborhood_bitmap(GraphView g, const VertexSet& a) {
  Bitmap bm(g.right_size());
  std::vector<RightVertex> nb(g.degree());
  for (auto v : a) {
    g.neighbors(v, nb);
    for (auto w : nb) {
      bm.set(w);
    }
  }
  return bm;
}

ExplicitGraph materialize(const SeededGraph& g, std::uint64_t budget) {
  const auto& p = g.params();
  const u128 entries = static_cast<u128>(p.m) * p.d;
  if (entries > budget) {
    throw BudgetExceeded("materialize", entries > ~std::uint64_t{0} ? ~std::uint64_t{0}
                                                                     : static_cast<std::uint64_t>(entries),
                         budget);
  }
  std::vector<std::vector<RightVertex>> adjacency(p.m, std::vector<RightVertex>(p.d));
  for (LeftVertex v = 0; v < p.m; ++v) {
    g.neighbors(v, adjacency[v]);
  }
  return ExplicitGraph(p, adjacency);
}

}  // namespace bitprobe
