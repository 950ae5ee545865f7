#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bitprobe {

/// Fixed-size packed bit vector. Bit w lives in word w / 64, bit w % 64;
/// the byte image is LSB-first (bit w -> byte w / 8, bit w % 8).
class Bitmap {
 public:
  Bitmap() = default;
  explicit Bitmap(std::uint64_t size_bits);

  std::uint64_t size() const noexcept { return size_; }

  bool test(std::uint64_t pos) const noexcept { return (words_[pos >> 6] >> (pos & 63)) & 1u; }
  void set(std::uint64_t pos) noexcept { words_[pos >> 6] |= std::uint64_t{1} << (pos & 63); }
  void reset(std::uint64_t pos) noexcept { words_[pos >> 6] &= ~(std::uint64_t{1} << (pos & 63)); }
  void flip(std::uint64_t pos) noexcept { words_[pos >> 6] ^= std::uint64_t{1} << (pos & 63); }
  void assign(std::uint64_t pos, bool value) noexcept {
    if (value) {
      set(pos);
    } else {
      reset(pos);
    }
  }

  /// Bounds-checked read; throws std::out_of_range.
  bool at(std::uint64_t pos) const;

  std::uint64_t count() const noexcept;
  bool none() const noexcept { return count() == 0; }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  std::size_t byte_size() const noexcept { return static_cast<std::size_t>((size_ + 7) / 8); }
  void append_bytes(std::vector<std::uint8_t>& out) const;
  /// Throws std::invalid_argument if the byte count does not match or padding bits are set.
  static Bitmap from_bytes(std::span<const std::uint8_t> bytes, std::uint64_t size_bits);

  friend bool operator==(const Bitmap&, const Bitmap&) = default;

 private:
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace bitprobe
