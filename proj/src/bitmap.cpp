#include "bitprobe/bitmap.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace bitprobe {

Bitmap::Bitmap(std::uint64_t size_bits) : size_(size_bits), words_((size_bits + 63) / 64, 0) {}

bool Bitmap::at(std::uint64_t pos) const {
  if (pos >= size_) {
    throw std::out_of_range("bit " + std::to_string(pos) + " outside bitmap of " +
                            std::to_string(size_) + " bits");
  }
  return test(pos);
}

std::uint64_t Bitmap::count() const noexcept {
  std::uint64_t total = 0;
  for (auto w : words_) {
    total += static_cast<std::uint64_t>(std::popcount(w));
  }
  return total;
}

void Bitmap::append_bytes(std::vector<std::uint8_t>& out) const {
  const std::size_t n = byte_size();
  out.reserve(out.size() + n);
  for (std::size_t b = 0; b < n; ++b) {
    out.push_back(static_cast<std::uint8_t>(words_[b / 8] >> (8 * (b % 8))));
  }
}

Bitmap Bitmap::from_bytes(std::span<const std::uint8_t> bytes, std::uint64_t size_bits) {
  Bitmap bm(size_bits);
  if (bytes.size() != bm.byte_size()) {
    throw std::invalid_argument("bitmap byte count mismatch");
  }
  for (std::size_t b = 0; b < bytes.size(); ++b) {
    bm.words_[b / 8] |= static_cast<std::uint64_t>(bytes[b]) << (8 * (b % 8));
  }
  if (size_bits % 64 != 0 && !bm.words_.empty() &&
      (bm.words_.back() >> (size_bits % 64)) != 0) {
    throw std::invalid_argument("bitmap padding bits are set");
  }
  return bm;
}

}  // namespace bitprobe
