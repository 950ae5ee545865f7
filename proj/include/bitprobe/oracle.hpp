#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "bitprobe/bitmap.hpp"
#include "bitprobe/bmrv.hpp"
#include "bitprobe/graph.hpp"
#include "bitprobe/kwise.hpp"
#include "bitprobe/ratio.hpp"
#include "bitprobe/scheme_one.hpp"
#include "bitprobe/scheme_two.hpp"

namespace bitprobe {

/// Hard limits for exhaustive enumeration. Exceeding one throws
/// BudgetExceeded; nothing ever falls back to sampling.
struct OracleBudget {
  /// Probe evaluations allowed per error profile; 0 means 2^20 per probe slot
  /// (i.e. m ≤ 2^20).
  std::uint64_t max_probe_evaluations = 0;
  /// Subsets allowed in verify_expander.
  std::uint64_t max_subsets = std::uint64_t{1} << 22;
  /// Seeds allowed in kwise_uniformity_check.
  std::uint64_t max_seeds = std::uint64_t{1} << 12;

  /// Reads BITPROBE_BUDGET (a probe-evaluation count) when set.
  static OracleBudget from_env();
};

/// Exact per-element error of a scheme over its whole universe. The error of
/// a member is Pr[answer false]; of a non-member, Pr[answer true].
struct ErrorProfile {
  std::vector<Ratio> per_element;        // index = element
  std::map<Ratio, std::uint64_t> histogram;  // error value -> element count
  Ratio max_member_error;
  Ratio max_nonmember_error;
  std::uint64_t false_negative_count = 0;  // members with nonzero error
  std::uint64_t members = 0;
};

/// Every probe index of every element is enumerated through the scheme's
/// bit positions and the stored bits.
ErrorProfile error_profile(const OneProbeScheme& scheme, const VertexSet& a,
                           const OracleBudget& budget = {});
/// Every (i₁, i₂) pair is pushed through the two-probe decision rule.
ErrorProfile error_profile(const TwoProbeScheme& scheme, const VertexSet& a,
                           const OracleBudget& budget = {});
ErrorProfile error_profile(GraphView g, const Bitmap& labels, const VertexSet& a,
                           const OracleBudget& budget = {});
ErrorProfile error_profile(const BmrvScheme& scheme, const VertexSet& a,
                           const OracleBudget& budget = {});

/// True iff every A ⊆ L with 1 ≤ |A| ≤ k_max has |Γ(A)| ≥ (1−δ)·d·|A|.
/// Throws BudgetExceeded if Σ_{j≤k_max} C(m, j) > budget.max_subsets.
bool verify_expander(const ExplicitGraph& g, std::uint64_t k_max, Ratio delta,
                     const OracleBudget& budget = {});

/// True iff, over every seed of the indep_k family, the tuple of values at
/// `points` hits each element of GF(2^b)^|points| equally often.
/// Throws std::invalid_argument on repeated points, BudgetExceeded on large families.
bool kwise_uniformity_check(const FieldSpec& field, std::size_t indep_k,
                            std::span<const FieldElement> points,
                            const OracleBudget& budget = {});

}  // namespace bitprobe
