#include "bitprobe/ratio.hpp"

#include <charconv>
#include <numeric>

#include "bitprobe/error.hpp"

namespace bitprobe {

namespace {

using u128 = unsigned __int128;

std::uint64_t parse_u64(std::string_view text, std::string_view whole) {
  std::uint64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw ParamError("malformed rational '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Ratio::Ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) {
    throw ParamError("rational with zero denominator");
  }
  const std::uint64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Ratio Ratio::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Ratio(parse_u64(text, text), 1);
  }
  return Ratio(parse_u64(text.substr(0, slash), text), parse_u64(text.substr(slash + 1), text));
}

std::uint64_t Ratio::ceil_times(std::uint64_t k) const {
  const u128 product = static_cast<u128>(num_) * k;
  const u128 q = (product + den_ - 1) / den_;
  if (q > ~std::uint64_t{0}) {
    throw ParamError("ceil_times overflow");
  }
  return static_cast<std::uint64_t>(q);
}

std::string Ratio::to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) noexcept {
  const u128 lhs = static_cast<u128>(a.num_) * b.den_;
  const u128 rhs = static_cast<u128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace bitprobe
