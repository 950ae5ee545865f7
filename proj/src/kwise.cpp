#include "bitprobe/kwise.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

#if defined(__PCLMUL__)
#include <wmmintrin.h>
#endif

namespace bitprobe {

namespace {

struct Product {
  std::uint64_t lo;
  std::uint64_t hi;
};

inline Product clmul(std::uint64_t a, std::uint64_t b) noexcept {
#if defined(__PCLMUL__)
  const __m128i r = _mm_clmulepi64_si128(_mm_cvtsi64_si128(static_cast<long long>(a)),
                                         _mm_cvtsi64_si128(static_cast<long long>(b)), 0x00);
  return {static_cast<std::uint64_t>(_mm_cvtsi128_si64(r)),
          static_cast<std::uint64_t>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)))};
#else
  Product p{0, 0};
  for (unsigned bit = 0; bit < 64; ++bit) {
    if ((b >> bit) & 1u) {
      p.lo ^= a << bit;
      if (bit != 0) {
        p.hi ^= a >> (64 - bit);
      }
    }
  }
  return p;
#endif
}

constexpr std::uint64_t kPoly64 = 0x1B;  // x^4 + x^3 + x + 1

// Folds hi·x^64 back using x^64 ≡ x^4 + x^3 + x + 1. hi has degree ≤ 62, so
// the first fold spills at most 3 bits, and the second fold cannot spill.
inline std::uint64_t reduce64(Product p) noexcept {
  const std::uint64_t h = p.hi;
  const std::uint64_t spill = (h >> 63) ^ (h >> 61) ^ (h >> 60);
  const std::uint64_t folded = h ^ (h << 1) ^ (h << 3) ^ (h << 4);
  const std::uint64_t spill_folded = spill ^ (spill << 1) ^ (spill << 3) ^ (spill << 4);
  return p.lo ^ folded ^ spill_folded;
}

inline std::uint64_t mul64(std::uint64_t a, std::uint64_t b) noexcept { return reduce64(clmul(a, b)); }

// Widths ≤ 32: the raw product has at most 2b − 1 bits and fits one word.
inline std::uint64_t mul_narrow(std::uint64_t a, std::uint64_t b, unsigned width,
                                std::uint64_t poly) noexcept {
  std::uint64_t p = clmul(a, b).lo;
  const std::uint64_t full = poly | (std::uint64_t{1} << width);
  for (unsigned bit = 2 * width - 2; bit >= width; --bit) {
    if ((p >> bit) & 1u) {
      p ^= full << (bit - width);
    }
  }
  return p;
}

inline std::uint64_t mul_unchecked(std::uint64_t a, std::uint64_t b, const FieldSpec& f) noexcept {
  return f.width() == 64 ? mul64(a, b) : mul_narrow(a, b, f.width(), f.reduction_poly());
}

}  // namespace

FieldSpec FieldSpec::gf(unsigned width_bits) {
  switch (width_bits) {
    case 3:
      return FieldSpec(3, 0x3);
    case 8:
      return FieldSpec(8, 0x1B);
    case 16:
      return FieldSpec(16, 0x2B);
    case 32:
      return FieldSpec(32, 0x8D);
    case 64:
      return FieldSpec(64, kPoly64);
    default:
      throw ParamError("unsupported field width " + std::to_string(width_bits));
  }
}

FieldElement field_mul(FieldElement a, FieldElement b, const FieldSpec& field) {
  if (!field.contains(a) || !field.contains(b)) {
    throw std::out_of_range("operand outside GF(2^" + std::to_string(field.width()) + ")");
  }
  return mul_unchecked(a, b, field);
}

PolySeed::PolySeed(FieldSpec field, std::vector<FieldElement> coeffs)
    : field_(field), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw ParamError("a seed needs at least one coefficient");
  }
  for (auto c : coeffs_) {
    if (!field_.contains(c)) {
      throw ParamError("seed coefficient does not fit the field");
    }
  }
}

FieldElement poly_eval(const PolySeed& seed, FieldElement x) {
  const auto& f = seed.field();
  if (!f.contains(x)) {
    throw std::out_of_range("evaluation point outside GF(2^" + std::to_string(f.width()) + ")");
  }
  const auto c = seed.coeffs();
  FieldElement acc = c.back();
  for (std::size_t j = c.size() - 1; j-- > 0;) {
    acc = mul_unchecked(acc, x, f) ^ c[j];
  }
  return acc;
}

void poly_eval_many(const PolySeed& seed, std::span<const FieldElement> xs,
                    std::span<FieldElement> out) {
  if (xs.size() != out.size()) {
    throw std::invalid_argument("poly_eval_many: size mismatch");
  }
  const auto& f = seed.field();
  for (auto x : xs) {
    if (!f.contains(x)) {
      throw std::out_of_range("evaluation point outside GF(2^" + std::to_string(f.width()) + ")");
    }
  }
  const auto c = seed.coeffs();
  const std::size_t k = c.size();
  std::size_t base = 0;
  if (f.width() == 64) {
    constexpr std::size_t kLanes = 8;
    for (; base + kLanes <= xs.size(); base += kLanes) {
      std::array<std::uint64_t, kLanes> acc;
      std::array<std::uint64_t, kLanes> pt;
      for (std::size_t l = 0; l < kLanes; ++l) {
        acc[l] = c[k - 1];
        pt[l] = xs[base + l];
      }
      for (std::size_t j = k - 1; j-- > 0;) {
        const std::uint64_t cj = c[j];
        for (std::size_t l = 0; l < kLanes; ++l) {
          acc[l] = mul64(acc[l], pt[l]) ^ cj;
        }
      }
      std::copy(acc.begin(), acc.end(), out.begin() + static_cast<std::ptrdiff_t>(base));
    }
  }
  for (; base < xs.size(); ++base) {
    FieldElement acc = c[k - 1];
    for (std::size_t j = k - 1; j-- > 0;) {
      acc = mul_unchecked(acc, xs[base], f) ^ c[j];
    }
    out[base] = acc;
  }
}

SeedRng make_seed_rng(std::uint64_t master_seed, std::uint64_t stream) {
  // splitmix64 finalizer over (master, stream)
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  return SeedRng(z);
}

SeedEnumerator::SeedEnumerator(const FieldSpec& field, std::size_t indep_k, std::uint64_t first_index)
    : width_(field.width()), indep_k_(indep_k), index_(first_index) {
  if (indep_k == 0) {
    throw ParamError("indep_k must be at least 1");
  }
}

std::uint64_t SeedEnumerator::family_size() const {
  const std::uint64_t bits = static_cast<std::uint64_t>(width_) * indep_k_;
  if (bits >= 64) {
    throw BudgetExceeded("seed family too large to enumerate", bits, 63);
  }
  return std::uint64_t{1} << bits;
}

SeedEnumerator::result_type SeedEnumerator::operator()() {
  const std::uint64_t shift = static_cast<std::uint64_t>(width_) * digit_;
  const std::uint64_t mask = width_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width_) - 1;
  const std::uint64_t digit = shift >= 64 ? 0 : (index_ >> shift) & mask;
  if (++digit_ == indep_k_) {
    digit_ = 0;
    ++index_;
  }
  return digit;
}

std::size_t default_indep_k(unsigned universe_bits) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(universe_bits) * universe_bits);
}

}  // namespace bitprobe
