#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace bitprobe {

/// Exact non-negative rational num/den, always kept in lowest terms.
///
/// Used for ε and for every error probability so that accept/reject
/// decisions never touch floating point.
class Ratio {
 public:
  constexpr Ratio() = default;

  /// Throws ParamError when den == 0.
  Ratio(std::uint64_t num, std::uint64_t den);

  /// Parses "num/den" or a bare integer.
  static Ratio parse(std::string_view text);

  std::uint64_t num() const noexcept { return num_; }
  std::uint64_t den() const noexcept { return den_; }

  /// True iff 0 < value < 1.
  bool is_proper() const noexcept { return num_ > 0 && num_ < den_; }

  /// ⌈value · k⌉.
  std::uint64_t ceil_times(std::uint64_t k) const;

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  friend bool operator==(const Ratio&, const Ratio&) = default;
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) noexcept;

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

}  // namespace bitprobe
