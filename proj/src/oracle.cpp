#include "bitprobe/oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "bitprobe/error.hpp"
#include "parallel.hpp"

namespace bitprobe {

namespace {

using u128 = unsigned __int128;

std::uint64_t saturate(u128 v) {
  return v > ~std::uint64_t{0} ? ~std::uint64_t{0} : static_cast<std::uint64_t>(v);
}

void check_profile_budget(const OracleBudget& budget, std::uint64_t m, std::uint64_t slots) {
  const u128 required = static_cast<u128>(m) * slots;
  const u128 allowed = budget.max_probe_evaluations != 0
                           ? u128{budget.max_probe_evaluations}
                           : (u128{1} << 20) * slots;
  if (required > allowed) {
    throw BudgetExceeded("exhaustive error profile", saturate(required), saturate(allowed));
  }
}

void check_members(const VertexSet& a, std::uint64_t m) {
  if (!a.empty() && a.items().back() >= m) {
    throw std::out_of_range("member " + std::to_string(a.items().back()) + " outside universe");
  }
}

// wrong[x] = number of enumerated probe outcomes answering wrongly for x, out of `outcomes`.
ErrorProfile summarize(const VertexSet& a, const std::vector<std::uint64_t>& wrong,
                       std::uint64_t outcomes) {
  ErrorProfile profile;
  profile.per_element.reserve(wrong.size());
  std::uint64_t worst_member = 0;
  std::uint64_t worst_nonmember = 0;
  for (LeftVertex x = 0; x < wrong.size(); ++x) {
    const Ratio err(wrong[x], outcomes);
    profile.per_element.push_back(err);
    ++profile.histogram[err];
    if (a.contains(x)) {
      ++profile.members;
      worst_member = std::max(worst_member, wrong[x]);
      if (wrong[x] != 0) {
        ++profile.false_negative_count;
      }
    } else {
      worst_nonmember = std::max(worst_nonmember, wrong[x]);
    }
  }
  profile.max_member_error = Ratio(worst_member, outcomes);
  profile.max_nonmember_error = Ratio(worst_nonmember, outcomes);
  return profile;
}

// Single-probe schemes: one stored bit per probe index, answer = bit.
ErrorProfile single_probe_profile(GraphView g, const Bitmap& bits, const VertexSet& a,
                                  const OracleBudget& budget) {
  const std::uint64_t m = g.left_size();
  const std::uint64_t d = g.degree();
  check_profile_budget(budget, m, d);
  check_members(a, m);
  std::vector<std::uint64_t> wrong(m);
  detail::parallel_chunks(m, [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
    std::vector<RightVertex> pos(d);
    for (LeftVertex x = begin; x < end; ++x) {
      g.neighbors(x, pos);
      const bool member = a.contains(x);
      std::uint64_t miss = 0;
      for (std::uint64_t i = 0; i < d; ++i) {
        const bool answer = bits.test(pos[i]);
        miss += answer != member ? 1 : 0;
      }
      wrong[x] = miss;
    }
  });
  return summarize(a, wrong, d);
}

}  // namespace

OracleBudget OracleBudget::from_env() {
  OracleBudget budget;
  if (const char* env = std::getenv("BITPROBE_BUDGET"); env != nullptr && *env != '\0') {
    std::uint64_t value = 0;
    const char* last = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, last, value);
    if (ec != std::errc{} || ptr != last || value == 0) {
      throw ParamError(std::string("BITPROBE_BUDGET must be a positive integer, got '") + env + "'");
    }
    budget.max_probe_evaluations = value;
  }
  return budget;
}

ErrorProfile error_profile(const OneProbeScheme& scheme, const VertexSet& a,
                           const OracleBudget& budget) {
  return single_probe_profile(scheme.graph(), scheme.bitmap(), a, budget);
}

ErrorProfile error_profile(GraphView g, const Bitmap& labels, const VertexSet& a,
                           const OracleBudget& budget) {
  if (labels.size() != g.right_size()) {
    throw std::invalid_argument("labeling size differs from the right side of the graph");
  }
  return single_probe_profile(g, labels, a, budget);
}

ErrorProfile error_profile(const BmrvScheme& scheme, const VertexSet& a,
                           const OracleBudget& budget) {
  return single_probe_profile(scheme.graph(), scheme.labels(), a, budget);
}

ErrorProfile error_profile(const TwoProbeScheme& scheme, const VertexSet& a,
                           const OracleBudget& budget) {
  const std::uint64_t m = scheme.g1().params().m;
  const std::uint64_t d1 = scheme.g1().params().d;
  const std::uint64_t d2 = scheme.g2().params().d;
  check_profile_budget(budget, m, d1 + d2);
  check_members(a, m);
  std::vector<std::uint64_t> wrong(m);
  detail::parallel_chunks(m, [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
    std::vector<RightVertex> pos1(d1);
    std::vector<RightVertex> pos2(d2);
    std::vector<char> bit1(d1);
    std::vector<char> bit2(d2);
    for (LeftVertex x = begin; x < end; ++x) {
      scheme.g1().neighbors(x, pos1);
      scheme.g2().neighbors(x, pos2);
      for (std::uint64_t i = 0; i < d1; ++i) bit1[i] = scheme.b1().test(pos1[i]);
      for (std::uint64_t i = 0; i < d2; ++i) bit2[i] = scheme.b2().test(pos2[i]);
      const bool member = a.contains(x);
      std::uint64_t miss = 0;
      for (std::uint64_t i1 = 0; i1 < d1; ++i1) {
        for (std::uint64_t i2 = 0; i2 < d2; ++i2) {
          // first label 0 -> "no"; both labels 1 -> "yes"; otherwise "no"
          const bool answer = bit1[i1] != 0 && bit2[i2] != 0;
          miss += answer != member ? 1 : 0;
        }
      }
      wrong[x] = miss;
    }
  });
  return summarize(a, wrong, d1 * d2);
}

bool verify_expander(const ExplicitGraph& g, std::uint64_t k_max, Ratio delta,
                     const OracleBudget& budget) {
  const auto& p = g.params();
  k_max = std::min(k_max, p.m);

  u128 subsets = 0;
  u128 binom = 1;
  for (std::uint64_t j = 1; j <= k_max; ++j) {
    binom = binom * (p.m - j + 1) / j;
    subsets += binom;
    if (subsets > budget.max_subsets) {
      throw BudgetExceeded("expander verification", saturate(subsets), budget.max_subsets);
    }
  }
  if (delta.num() >= delta.den()) {
    return true;
  }

  // |Γ(A)| ≥ (1 − δ)·d·|A|  ⇔  |Γ(A)|·den ≥ (den − num)·d·|A|
  const u128 keep = static_cast<u128>(delta.den() - delta.num()) * p.d;
  std::vector<std::uint32_t> hits(p.s(), 0);
  std::uint64_t union_size = 0;

  // Depth-first over subsets in lexicographic order, maintaining |Γ(A)|.
  auto recurse = [&](auto&& self, LeftVertex start, std::uint64_t depth) -> bool {
    for (LeftVertex v = start; v < p.m; ++v) {
      const auto row = g.row(v);
      for (auto w : row) {
        if (hits[w]++ == 0) ++union_size;
      }
      bool ok = static_cast<u128>(union_size) * delta.den() >= keep * (depth + 1);
      if (ok && depth + 1 < k_max) {
        ok = self(self, v + 1, depth + 1);
      }
      for (auto w : row) {
        if (--hits[w] == 0) --union_size;
      }
      if (!ok) {
        return false;
      }
    }
    return true;
  };
  return k_max == 0 || recurse(recurse, 0, 0);
}

bool kwise_uniformity_check(const FieldSpec& field, std::size_t indep_k,
                            std::span<const FieldElement> points, const OracleBudget& budget) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!field.contains(points[i])) {
      throw std::out_of_range("evaluation point outside the field");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] == points[j]) {
        throw std::invalid_argument("evaluation points must be distinct");
      }
    }
  }
  SeedEnumerator enumerator(field, indep_k);
  const std::uint64_t family = enumerator.family_size();
  if (family > budget.max_seeds) {
    throw BudgetExceeded("k-wise uniformity enumeration", family, budget.max_seeds);
  }
  const std::uint64_t tuple_bits = static_cast<std::uint64_t>(field.width()) * points.size();
  if (tuple_bits >= 64 || (std::uint64_t{1} << tuple_bits) > family) {
    return false;  // fewer seeds than output tuples
  }
  const std::uint64_t tuples = std::uint64_t{1} << tuple_bits;
  if (family % tuples != 0) {
    return false;
  }
  std::vector<std::uint64_t> counts(tuples, 0);
  for (std::uint64_t s = 0; s < family; ++s) {
    const PolySeed seed = draw_seed(enumerator, indep_k, field);
    std::uint64_t tuple = 0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      tuple |= poly_eval(seed, points[j]) << (field.width() * j);
    }
    ++counts[tuple];
  }
  return std::all_of(counts.begin(), counts.end(),
                     [&](std::uint64_t c) { return c == family / tuples; });
}

}  // namespace bitprobe
