#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "bitprobe/storage.hpp"
#include "toy_graphs.hpp"

using namespace bitprobe;
using namespace bitprobe::testing;

namespace {

EncodeConfig cfg_with_seed(std::uint64_t seed) {
  EncodeConfig c;
  c.master_seed = seed;
  return c;
}

FormatErrorCode load_error(const std::vector<std::uint8_t>& bytes) {
  try {
    load(bytes);
  } catch (const FormatError& e) {
    return e.code();
  }
  ADD_FAILURE() << "load accepted corrupt bytes";
  return FormatErrorCode::bad_magic;
}

}  // namespace

TEST(Storage, OneProbeRoundTrip) {
  const VertexSet a{1, 77, 200};
  const auto s = OneProbeScheme::encode(a, 8, Ratio(1, 4), cfg_with_seed(3));
  const auto bytes = save(s);
  const auto back = load(bytes);
  ASSERT_EQ(kind_of(back), SchemeKind::one_probe);
  EXPECT_EQ(std::get<OneProbeScheme>(back), s);
  EXPECT_EQ(save(back), bytes);
}

TEST(Storage, TwoProbeRoundTrip) {
  const VertexSet a{1, 2, 3, 4, 5, 6};
  const auto s = TwoProbeScheme::encode(a, 8, Ratio(1, 2), cfg_with_seed(4));
  const auto bytes = save(s);
  const auto back = load(bytes);
  ASSERT_EQ(kind_of(back), SchemeKind::two_probe);
  EXPECT_EQ(std::get<TwoProbeScheme>(back), s);
  EXPECT_EQ(save(back), bytes);
}

TEST(Storage, BmrvRoundTrip) {
  BmrvConfig c;
  c.master_seed = 5;
  const auto s = BmrvScheme::encode(VertexSet{9, 10}, 6, Ratio(1, 2), c);
  const auto back = load(save(s));
  ASSERT_EQ(kind_of(back), SchemeKind::bmrv);
  EXPECT_EQ(std::get<BmrvScheme>(back), s);
}

TEST(Storage, HeaderFields) {
  const auto s = OneProbeScheme::encode(VertexSet{1}, 4, Ratio(1, 2), cfg_with_seed(0x0102030405060708));
  const auto b = save(s);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "BPS1");
  EXPECT_EQ(b[4], 1);
  EXPECT_EQ(b[5], 0);
  EXPECT_EQ(b[6], 1);
  EXPECT_EQ(b[7], 4);    // universe_bits
  EXPECT_EQ(b[11], 9);   // log2_s: d = 16, s = 512
  EXPECT_EQ(b[15], 16);  // d
  EXPECT_EQ(b[19], 1);
  EXPECT_EQ(b[23], 2);
  EXPECT_EQ(b[27], 16);  // indep_k = u²
  EXPECT_EQ(b[31], 64);
  EXPECT_EQ(b[32], 0x08);
  EXPECT_EQ(b[39], 0x01);
}

TEST(Storage, SectionLayoutMatchesBytes) {
  const auto s = OneProbeScheme::encode(VertexSet{1, 2}, 6, Ratio(1, 2), cfg_with_seed(1));
  const auto b = save(s);
  const auto layout = section_layout(std::span(b).first(kHeaderBytes));
  EXPECT_EQ(layout.kind, SchemeKind::one_probe);
  EXPECT_EQ(layout.seed_offset, kHeaderBytes);
  EXPECT_EQ(layout.seed_payload_bytes, 36u * 8u);
  EXPECT_EQ(layout.bitmap_offset, kHeaderBytes + 4 + layout.seed_payload_bytes);
  EXPECT_EQ(layout.bitmap_payload_bytes, s.bitmap_bits() / 8);
  EXPECT_EQ(b.size(), layout.bitmap_offset + 8 + layout.bitmap_payload_bytes);
}

TEST(Storage, ErrorCodes) {
  const auto s = OneProbeScheme::encode(VertexSet{1}, 4, Ratio(1, 2), cfg_with_seed(2));
  const auto good = save(s);

  auto bad = good;
  bad[0] = 'X';
  EXPECT_EQ(load_error(bad), FormatErrorCode::bad_magic);

  bad = good;
  bad[4] = 2;
  EXPECT_EQ(load_error(bad), FormatErrorCode::unsupported_version);

  bad.assign(good.begin(), good.end() - 1);
  EXPECT_EQ(load_error(bad), FormatErrorCode::truncated_section);

  bad.assign(good.begin(), good.begin() + 20);
  EXPECT_EQ(load_error(bad), FormatErrorCode::truncated_section);

  bad = good;
  bad[23] = 0;  // ε denominator 0
  EXPECT_EQ(load_error(bad), FormatErrorCode::invariant_violation);

  bad = good;
  bad[6] = 9;  // unknown kind
  EXPECT_EQ(load_error(bad), FormatErrorCode::invariant_violation);

  bad = good;
  bad[31] = 7;  // unsupported field width
  EXPECT_EQ(load_error(bad), FormatErrorCode::invariant_violation);

  bad = good;
  bad.push_back(0);
  EXPECT_EQ(load_error(bad), FormatErrorCode::invariant_violation);

  bad = good;
  bad[kHeaderBytes] ^= 1;  // seed count no longer matches indep_k
  EXPECT_EQ(load_error(bad), FormatErrorCode::invariant_violation);
}

TEST(Storage, Files) {
  const auto dir = std::filesystem::temp_directory_path() / "bitprobe_storage_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "s.bps";
  const std::vector<std::uint8_t> bytes{1, 2, 3, 250};
  write_file(path, bytes);
  EXPECT_EQ(read_file(path), bytes);
  EXPECT_THROW(read_file(dir / "missing.bps"), std::exception);
  std::filesystem::remove_all(dir);
}
