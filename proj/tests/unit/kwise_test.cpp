#include <gtest/gtest.h>

#include <random>
#include <set>

#include "bitprobe/kwise.hpp"
#include "bitprobe/oracle.hpp"
#include "field_oracle.hpp"

using namespace bitprobe;
using bitprobe::testing::naive_mul;
using bitprobe::testing::naive_poly;

namespace {

const unsigned kWidths[] = {3, 8, 16, 32, 64};

std::uint64_t random_element(std::mt19937_64& rng, const FieldSpec& f) { return rng() & f.mask(); }

}  // namespace

TEST(FieldSpec, SupportedWidths) {
  for (unsigned w : kWidths) {
    EXPECT_EQ(FieldSpec::gf(w).width(), w);
  }
  EXPECT_EQ(FieldSpec::gf64().reduction_poly(), 0x1Bu);
  EXPECT_THROW(FieldSpec::gf(7), ParamError);
  EXPECT_THROW(FieldSpec::gf(0), ParamError);
}

TEST(FieldMul, IdentityAndAnnihilator) {
  std::mt19937_64 rng(1);
  for (unsigned w : kWidths) {
    const auto f = FieldSpec::gf(w);
    for (int i = 0; i < 100; ++i) {
      const auto a = random_element(rng, f);
      EXPECT_EQ(field_mul(a, 1, f), a);
      EXPECT_EQ(field_mul(0, a, f), 0u);
    }
  }
}

TEST(FieldMul, SmallFieldExample) {
  // (x)(x² + x) = x³ + x² ≡ x² + x + 1 modulo x³ + x + 1
  EXPECT_EQ(field_mul(2, 6, FieldSpec::gf(3)), 7u);
}

TEST(FieldMul, RejectsOversizedOperands) {
  EXPECT_THROW(field_mul(8, 1, FieldSpec::gf(3)), std::out_of_range);
  EXPECT_THROW(field_mul(1, 256, FieldSpec::gf(8)), std::out_of_range);
}

TEST(FieldMul, MatchesSchoolbookReference) {
  std::mt19937_64 rng(2);
  for (unsigned w : kWidths) {
    const auto f = FieldSpec::gf(w);
    for (int i = 0; i < 10000; ++i) {
      const auto a = random_element(rng, f);
      const auto b = random_element(rng, f);
      ASSERT_EQ(field_mul(a, b, f), naive_mul(a, b, w, f.reduction_poly())) << "width " << w;
    }
  }
}

TEST(FieldAxioms, ExhaustiveWidth3) {
  const auto f = FieldSpec::gf(3);
  for (std::uint64_t a = 0; a < 8; ++a) {
    bool has_inverse = a == 0;
    for (std::uint64_t b = 0; b < 8; ++b) {
      EXPECT_EQ(field_mul(a, b, f), field_mul(b, a, f));
      if (field_mul(a, b, f) == 1) has_inverse = true;
      for (std::uint64_t c = 0; c < 8; ++c) {
        EXPECT_EQ(field_mul(field_mul(a, b, f), c, f), field_mul(a, field_mul(b, c, f), f));
        EXPECT_EQ(field_mul(a, b ^ c, f), field_mul(a, b, f) ^ field_mul(a, c, f));
      }
    }
    EXPECT_TRUE(has_inverse) << a;
  }
}

TEST(FieldAxioms, RandomTriplesWideFields) {
  std::mt19937_64 rng(3);
  for (unsigned w : {8u, 16u, 32u, 64u}) {
    const auto f = FieldSpec::gf(w);
    for (int i = 0; i < 10000; ++i) {
      const auto a = random_element(rng, f);
      const auto b = random_element(rng, f);
      const auto c = random_element(rng, f);
      ASSERT_EQ(field_mul(a, b, f), field_mul(b, a, f));
      ASSERT_EQ(field_mul(field_mul(a, b, f), c, f), field_mul(a, field_mul(b, c, f), f));
      ASSERT_EQ(field_mul(a, b ^ c, f), field_mul(a, b, f) ^ field_mul(a, c, f));
    }
  }
}

TEST(FieldAxioms, InverseExistsWidth8) {
  const auto f = FieldSpec::gf(8);
  for (std::uint64_t a = 1; a < 256; ++a) {
    bool found = false;
    for (std::uint64_t b = 1; b < 256 && !found; ++b) found = field_mul(a, b, f) == 1;
    EXPECT_TRUE(found) << a;
  }
}

TEST(PolyEval, Examples) {
  const auto f3 = FieldSpec::gf(3);
  EXPECT_EQ(poly_eval(PolySeed(f3, {3, 1}), 5), 6u);
  for (std::uint64_t x = 0; x < 8; ++x) {
    EXPECT_EQ(poly_eval(PolySeed(f3, {5}), x), 5u);
    EXPECT_EQ(poly_eval(PolySeed(f3, {0, 1}), x), x);
  }
  const auto f64 = FieldSpec::gf64();
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto x = rng();
    EXPECT_EQ(poly_eval(PolySeed(f64, {0, 1}), x), x);
  }
  EXPECT_THROW(poly_eval(PolySeed(f3, {1}), 8), std::out_of_range);
}

TEST(PolyEval, ExhaustiveAgainstPowerSumWidth3) {
  const auto f = FieldSpec::gf(3);
  for (std::uint64_t c0 = 0; c0 < 8; ++c0) {
    for (std::uint64_t c1 = 0; c1 < 8; ++c1) {
      for (std::uint64_t c2 = 0; c2 < 8; ++c2) {
        const std::vector<std::uint64_t> c{c0, c1, c2};
        const PolySeed seed(f, c);
        for (std::uint64_t x = 0; x < 8; ++x) {
          ASSERT_EQ(poly_eval(seed, x), naive_poly(c, x, 3, f.reduction_poly()));
        }
      }
    }
  }
}

TEST(PolyEval, RandomAgainstPowerSumWidth64) {
  const auto f = FieldSpec::gf64();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    std::vector<std::uint64_t> c(1 + rng() % 12);
    for (auto& v : c) v = rng();
    const auto x = rng();
    ASSERT_EQ(poly_eval(PolySeed(f, c), x), naive_poly(c, x, 64, f.reduction_poly()));
  }
}

TEST(PolyEval, BatchedMatchesScalar) {
  std::mt19937_64 rng(6);
  for (unsigned w : kWidths) {
    const auto f = FieldSpec::gf(w);
    auto seed = draw_seed(rng, 17, f);
    for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 31u}) {
      std::vector<std::uint64_t> xs(n);
      for (auto& x : xs) x = rng() & f.mask();
      std::vector<std::uint64_t> out(n);
      poly_eval_many(seed, xs, out);
      for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(out[i], poly_eval(seed, xs[i]));
    }
  }
}

TEST(PolySeed, Validation) {
  EXPECT_THROW(PolySeed(FieldSpec::gf(3), {}), ParamError);
  EXPECT_THROW(PolySeed(FieldSpec::gf(3), {9}), ParamError);
  EXPECT_EQ(PolySeed(FieldSpec::gf(8), {1, 2, 3}).bit_size(), 24u);
}

TEST(DrawSeed, DeterministicPerMasterAndStream) {
  auto r1 = make_seed_rng(42, 1);
  auto r2 = make_seed_rng(42, 1);
  auto r3 = make_seed_rng(42, 2);
  const auto f = FieldSpec::gf64();
  for (int i = 0; i < 5; ++i) {
    const auto a = draw_seed(r1, 10, f);
    EXPECT_EQ(a, draw_seed(r2, 10, f));
    EXPECT_NE(a, draw_seed(r3, 10, f));
  }
  auto r4 = make_seed_rng(7, 0);
  EXPECT_EQ(draw_seed(r4, 1, f).indep_k(), 1u);
  EXPECT_THROW(draw_seed(r4, 0, f), ParamError);
}

TEST(DrawSeed, SuccessiveCallsDiffer) {
  auto rng = make_seed_rng(0, 1);
  std::set<std::vector<std::uint64_t>> seen;
  for (int i = 0; i < 100; ++i) {
    const auto s = draw_seed(rng, 4, FieldSpec::gf64());
    seen.emplace(s.coeffs().begin(), s.coeffs().end());
  }
  EXPECT_EQ(seen.size(), 100u);
}

TEST(DrawSeed, EnumeratorVisitsWholeFamilyOnce) {
  const auto f = FieldSpec::gf(3);
  SeedEnumerator e(f, 2);
  ASSERT_EQ(e.family_size(), 64u);
  std::set<std::vector<std::uint64_t>> seen;
  for (int i = 0; i < 64; ++i) {
    const auto s = draw_seed(e, 2, f);
    seen.emplace(s.coeffs().begin(), s.coeffs().end());
  }
  EXPECT_EQ(seen.size(), 64u);
}

TEST(DefaultIndepK, IsSquaredLogUniverse) {
  EXPECT_EQ(default_indep_k(10), 100u);
  EXPECT_EQ(default_indep_k(14), 196u);
  EXPECT_EQ(default_indep_k(1), 1u);
  EXPECT_EQ(default_indep_k(0), 1u);
}

TEST(KwiseUniformity, PolynomialFamilyOverGF8) {
  const auto f = FieldSpec::gf(3);
  for (std::size_t k = 1; k <= 3; ++k) {
    // every k-subset of evaluation points
    std::vector<std::uint64_t> pts;
    auto rec = [&](auto&& self, std::uint64_t start) -> void {
      if (pts.size() == k) {
        EXPECT_TRUE(kwise_uniformity_check(f, k, pts)) << "k=" << k;
        return;
      }
      for (std::uint64_t x = start; x < 8; ++x) {
        pts.push_back(x);
        self(self, x + 1);
        pts.pop_back();
      }
    };
    rec(rec, 0);
  }
}

TEST(KwiseUniformity, FailsBeyondIndependence) {
  const auto f = FieldSpec::gf(3);
  const std::vector<std::uint64_t> three{0, 1, 2};
  EXPECT_FALSE(kwise_uniformity_check(f, 2, three));
  const std::vector<std::uint64_t> dup{4, 4};
  EXPECT_THROW(kwise_uniformity_check(f, 2, dup), std::invalid_argument);
}
