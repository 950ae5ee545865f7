#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "bitprobe/bmrv.hpp"
#include "bitprobe/error.hpp"
#include "bitprobe/scheme_one.hpp"
#include "bitprobe/scheme_two.hpp"

namespace bitprobe {

// Scheme file layout, all integers little-endian:
//
//   header (40 bytes)
//     0  magic "BPS1"
//     4  u16 format_version (1)
//     6  u8  kind (1 one-probe, 2 two-probe, 3 bmrv labeling)
//     7  u32 universe_bits
//    11  u32 log2_s
//    15  u32 d
//    19  u32 eps_num
//    23  u32 eps_den
//    27  u32 indep_k
//    31  u8  field_width
//    32  u64 master_seed
//   seed section:   u32 count, then count elements of ⌈field_width/8⌉ bytes
//   bitmap section: u64 bit count, then ⌈bits/8⌉ bytes packed LSB-first
//
// Kind 2 follows the first group with a second one:
//   u32 log2_s, u32 d, u32 indep_k, u64 w_size, seed section, bitmap section.

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 40;

enum class SchemeKind : std::uint8_t { one_probe = 1, two_probe = 2, bmrv = 3 };

enum class FormatErrorCode { bad_magic, unsupported_version, truncated_section, invariant_violation };

class FormatError : public Error {
 public:
  FormatError(FormatErrorCode code, const std::string& what) : Error(what), code_(code) {}
  FormatErrorCode code() const noexcept { return code_; }

 private:
  FormatErrorCode code_;
};

using AnyScheme = std::variant<OneProbeScheme, TwoProbeScheme, BmrvScheme>;

SchemeKind kind_of(const AnyScheme& scheme) noexcept;

std::vector<std::uint8_t> save(const OneProbeScheme& scheme);
std::vector<std::uint8_t> save(const TwoProbeScheme& scheme);
std::vector<std::uint8_t> save(const BmrvScheme& scheme);
std::vector<std::uint8_t> save(const AnyScheme& scheme);

/// Validates magic, version and header invariants before reading any section.
/// Throws FormatError.
AnyScheme load(std::span<const std::uint8_t> bytes);

/// Byte ranges of the first group's sections, derived from the header alone.
struct SectionLayout {
  SchemeKind kind;
  std::size_t seed_offset;         // start of the u32 count
  std::size_t seed_payload_bytes;  // indep_k · ⌈field_width/8⌉
  std::size_t bitmap_offset;       // start of the u64 bit count
  std::size_t bitmap_payload_bytes;
};

/// Throws FormatError if the header itself is invalid.
SectionLayout section_layout(std::span<const std::uint8_t> header);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace bitprobe
