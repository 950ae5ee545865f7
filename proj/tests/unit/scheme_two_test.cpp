#include <gtest/gtest.h>

#include <random>

#include "bitprobe/oracle.hpp"
#include "bitprobe/probe.hpp"
#include "bitprobe/reduction.hpp"
#include "bitprobe/scheme_two.hpp"
#include "toy_graphs.hpp"

using namespace bitprobe;
using namespace bitprobe::testing;

namespace {

EncodeConfig cfg_with_seed(std::uint64_t seed) {
  EncodeConfig c;
  c.master_seed = seed;
  return c;
}

// d = 2: A = {0}; vertex 5 lands on Γ(0) in both slots, every other vertex is disjoint.
ExplicitGraph engineered_first_stage() {
  std::vector<std::vector<RightVertex>> adj(8);
  for (std::uint64_t v = 0; v < 8; ++v) adj[v] = {2 * v, 2 * v + 1};
  adj[5] = {1, 0};
  return ExplicitGraph(toy_params(8, 4, 2), adj);
}

class FixedDecoder final : public MisclassifiedDecoder {
 public:
  mutable int calls = 0;
  std::vector<LeftVertex> decode(GraphView g1, const VertexSet& a, Ratio eps) const override {
    ++calls;
    return compute_misclassified(g1, a, eps);
  }
};

}  // namespace

TEST(Misclassified, EngineeredInstance) {
  const auto g = engineered_first_stage();
  const VertexSet a{0};
  EXPECT_EQ(compute_misclassified(g, a, Ratio(1, 2)), (std::vector<LeftVertex>{5}));
  EXPECT_EQ(ScanDecoder{}.decode(g, a, Ratio(1, 2)), (std::vector<LeftVertex>{5}));
  // |W| = 1 > ⌊1/2⌋, so this G₁ would be rejected by stage 1
  EXPECT_FALSE(check_reduction_property(g, a, Ratio(1, 2)));

  // Stage 2 only inspects W: a second graph that separates 5 from 0 passes,
  // even though vertex 3 is bad in it.
  std::vector<std::vector<RightVertex>> adj2(8);
  for (std::uint64_t v = 0; v < 8; ++v) adj2[v] = {2 * v, 2 * v + 1};
  adj2[3] = {0, 1};
  const ExplicitGraph g2(toy_params(8, 4, 2), adj2);
  const std::vector<LeftVertex> w{5};
  const auto r = check_strong_reduction(g2, a, Ratio(1, 2), w);
  EXPECT_TRUE(r.holds());
  EXPECT_EQ(r.scope_size, 1u);
  EXPECT_FALSE(check_strong_reduction(g2, a, Ratio(1, 2)).holds());
}

TEST(TwoProbe, EncodeAndExactErrors) {
  std::mt19937_64 rng(1);
  const auto a = random_set(8, 1024, rng);
  const Ratio eps(1, 4);
  const auto s = TwoProbeScheme::encode(a, 10, eps, cfg_with_seed(1));
  EXPECT_LE(s.w_size(), a.size() / 2);
  EXPECT_EQ(s.b1(), neighborhood_bitmap(s.g1(), a));
  EXPECT_EQ(s.b2(), neighborhood_bitmap(s.g2(), a));
  EXPECT_EQ(s.stats().stage2_vertices_examined, s.w_size() * s.stats().stage2_attempts);

  const auto prof = error_profile(s, a);
  EXPECT_EQ(prof.max_member_error, Ratio(0, 1));
  EXPECT_LT(prof.max_nonmember_error, eps);
  for (LeftVertex x = 0; x < 1024; ++x) {
    if (!a.contains(x)) ASSERT_EQ(prof.per_element[x], s.exact_error(x)) << x;
  }
}

TEST(TwoProbe, MisclassifiedStillBelowEps) {
  // Check every vertex of W explicitly, recomputed from G₁.
  std::mt19937_64 rng(2);
  for (int t = 0; t < 5; ++t) {
    const auto a = random_set(16, 1024, rng);
    const Ratio eps(1, 2);
    const auto s = TwoProbeScheme::encode(a, 10, eps, cfg_with_seed(100 + t));
    const auto w = compute_misclassified(s.g1(), a, eps);
    EXPECT_EQ(w.size(), s.w_size());
    for (auto x : w) EXPECT_LT(s.exact_error(x), eps);
  }
}

TEST(TwoProbe, ProbeCounts) {
  const VertexSet a{1, 2, 3};
  const auto s = TwoProbeScheme::encode(a, 8, Ratio(1, 2), cfg_with_seed(3));
  CountingReader reader;
  for (LeftVertex x = 0; x < 256; ++x) {
    reader.reset();
    s.query_at(x, 0, 0, reader);
    ASSERT_LE(reader.reads(), 2u);
    ASSERT_GE(reader.reads(), 1u);
    reader.reset();
    s.query_at(x, 1, 1, reader, false);
    ASSERT_EQ(reader.reads(), 2u);
  }
  for (auto x : a) {
    reader.reset();
    EXPECT_TRUE(s.query_at(x, 0, 0, reader));
    EXPECT_EQ(reader.reads(), 2u);
  }
}

TEST(TwoProbe, CustomDecoderIsUsed) {
  FixedDecoder dec;
  const VertexSet a{4, 8};
  const auto s1 = TwoProbeScheme::encode(a, 8, Ratio(1, 2), cfg_with_seed(4), &dec);
  EXPECT_EQ(static_cast<std::uint32_t>(dec.calls), s1.stats().stage1_attempts);
  EXPECT_EQ(s1, TwoProbeScheme::encode(a, 8, Ratio(1, 2), cfg_with_seed(4)));
}

TEST(TwoProbe, Deterministic) {
  const VertexSet a{10, 20, 30, 40};
  const auto s1 = TwoProbeScheme::encode(a, 10, Ratio(1, 8), cfg_with_seed(5));
  const auto s2 = TwoProbeScheme::encode(a, 10, Ratio(1, 8), cfg_with_seed(5));
  EXPECT_EQ(s1, s2);
  EXPECT_EQ(s1.bitmap_bits(), s1.b1().size() + s1.b2().size());
  EXPECT_EQ(s1.cache_bits(), 2u * 100u * 64u);
}

TEST(TwoProbe, StageOneExhaustion) {
  EncodeConfig c = cfg_with_seed(6);
  c.indep_k = 1;
  c.max_retries = 2;
  try {
    TwoProbeScheme::encode(VertexSet{1, 2, 3, 4}, 6, Ratio(1, 2), c);
    FAIL() << "expected RetriesExhausted";
  } catch (const RetriesExhausted& e) {
    EXPECT_EQ(e.stage(), "two-probe stage 1");
  }
}

TEST(TwoProbe, EmpiricalRateTracksExact) {
  const VertexSet a{0, 1, 2, 3};
  const auto s = TwoProbeScheme::encode(a, 8, Ratio(1, 2), cfg_with_seed(7));
  LeftVertex worst = 4;
  for (LeftVertex x = 4; x < 256; ++x) {
    if (s.exact_error(x) > s.exact_error(worst)) worst = x;
  }
  ProbeSource probes(5);
  const int trials = 20000;
  int yes = 0;
  for (int t = 0; t < trials; ++t) yes += s.query(worst, probes) ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(yes) / trials, s.exact_error(worst).to_double(), 0.02);
}
