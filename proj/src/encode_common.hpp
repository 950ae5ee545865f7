#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "bitprobe/error.hpp"
#include "bitprobe/graph.hpp"
#include "bitprobe/kwise.hpp"

namespace bitprobe::detail {

struct EncodePlan {
  GraphParams params;
  std::size_t indep_k;
};

/// Validates A against the universe and capacity and sizes the graph.
inline EncodePlan plan_encode(const VertexSet& a, unsigned universe_bits, Ratio eps,
                              std::uint64_t n_cap, std::size_t indep_k) {
  const std::uint64_t cap = n_cap == 0 ? std::max<std::uint64_t>(a.size(), 1) : n_cap;
  if (a.size() > cap) {
    throw ParamError("set of " + std::to_string(a.size()) + " elements exceeds capacity " +
                     std::to_string(cap));
  }
  EncodePlan plan{derive_params(universe_bits, cap, eps), indep_k};
  if (!a.empty() && a.items().back() >= plan.params.m) {
    throw ParamError("element " + std::to_string(a.items().back()) + " outside universe of 2^" +
                     std::to_string(universe_bits));
  }
  if (plan.indep_k == 0) {
    plan.indep_k = default_indep_k(universe_bits);
  }
  return plan;
}

}  // namespace bitprobe::detail
