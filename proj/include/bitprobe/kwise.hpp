#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "bitprobe/error.hpp"

namespace bitprobe {

using FieldElement = std::uint64_t;

/// GF(2^b) described by its width and the low bits of an irreducible
/// reduction polynomial (the x^b term is implicit).
///
///   b = 3   x^3 + x + 1
///   b = 8   x^8 + x^4 + x^3 + x + 1
///   b = 16  x^16 + x^5 + x^3 + x + 1
///   b = 32  x^32 + x^7 + x^3 + x^2 + 1
///   b = 64  x^64 + x^4 + x^3 + x + 1
class FieldSpec {
 public:
  /// Throws ParamError for widths other than 3, 8, 16, 32, 64.
  static FieldSpec gf(unsigned width_bits);
  static FieldSpec gf64() { return gf(64); }

  unsigned width() const noexcept { return width_; }
  std::uint64_t reduction_poly() const noexcept { return poly_; }
  std::uint64_t mask() const noexcept { return width_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width_) - 1; }
  bool contains(FieldElement x) const noexcept { return (x & ~mask()) == 0; }
  /// Bytes used per element in serialized form.
  unsigned element_bytes() const noexcept { return (width_ + 7) / 8; }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  FieldSpec(unsigned width, std::uint64_t poly) : width_(width), poly_(poly) {}

  unsigned width_;
  std::uint64_t poly_;
};

/// Product in GF(2^b). Throws std::out_of_range if an operand does not fit.
FieldElement field_mul(FieldElement a, FieldElement b, const FieldSpec& field);

/// Coefficients of a polynomial over a FieldSpec; coeffs[j] multiplies x^j.
/// This is the whole "cached word" of a scheme.
class PolySeed {
 public:
  /// Throws ParamError when coeffs is empty or an element does not fit the field.
  PolySeed(FieldSpec field, std::vector<FieldElement> coeffs);

  const FieldSpec& field() const noexcept { return field_; }
  std::span<const FieldElement> coeffs() const noexcept { return coeffs_; }
  std::size_t indep_k() const noexcept { return coeffs_.size(); }
  std::uint64_t bit_size() const noexcept { return coeffs_.size() * field_.width(); }

  friend bool operator==(const PolySeed&, const PolySeed&) = default;

 private:
  FieldSpec field_;
  std::vector<FieldElement> coeffs_;
};

/// Σ coeffs[j]·x^j in the seed's field. Throws std::out_of_range if x does not fit.
FieldElement poly_eval(const PolySeed& seed, FieldElement x);

/// Batched poly_eval; out.size() must equal xs.size(). Interleaves several
/// Horner chains, which is what makes full-universe scans affordable.
void poly_eval_many(const PolySeed& seed, std::span<const FieldElement> xs, std::span<FieldElement> out);

/// The encode loops' deterministic candidate-seed generator.
using SeedRng = std::mt19937_64;

/// Independent generator for (master_seed, stream); different streams never share state.
SeedRng make_seed_rng(std::uint64_t master_seed, std::uint64_t stream);

/// Word source that walks every seed of a small family in order: consecutive
/// draw_seed calls return seed index 0, 1, 2, ... with coefficient j equal to
/// digit j of the index in base 2^b.
class SeedEnumerator {
 public:
  using result_type = std::uint64_t;

  SeedEnumerator(const FieldSpec& field, std::size_t indep_k, std::uint64_t first_index = 0);

  /// Number of distinct seeds; throws BudgetExceeded if it does not fit in 64 bits.
  std::uint64_t family_size() const;

  result_type operator()();

 private:
  unsigned width_;
  std::size_t indep_k_;
  std::uint64_t index_;
  std::size_t digit_ = 0;
};

/// Next candidate seed: indep_k words drawn from `source`, each masked to the field width.
template <class WordSource>
PolySeed draw_seed(WordSource& source, std::size_t indep_k, const FieldSpec& field) {
  if (indep_k == 0) {
    throw ParamError("indep_k must be at least 1");
  }
  std::vector<FieldElement> coeffs(indep_k);
  for (auto& c : coeffs) {
    c = static_cast<FieldElement>(source()) & field.mask();
  }
  return PolySeed(field, std::move(coeffs));
}

/// ⌈log₂ m⌉² for m = 2^universe_bits (at least 1).
std::size_t default_indep_k(unsigned universe_bits);

}  // namespace bitprobe
