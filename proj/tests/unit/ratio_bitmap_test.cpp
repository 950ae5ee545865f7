#include <gtest/gtest.h>

#include <random>

#include "bitprobe/bitmap.hpp"
#include "bitprobe/error.hpp"
#include "bitprobe/ratio.hpp"

using namespace bitprobe;

TEST(Ratio, NormalizesAndCompares) {
  EXPECT_EQ(Ratio(2, 4), Ratio(1, 2));
  EXPECT_LT(Ratio(1, 3), Ratio(1, 2));
  EXPECT_GT(Ratio(3, 40), Ratio(1, 14));
  EXPECT_EQ(Ratio(0, 7), Ratio(0, 1));
  EXPECT_THROW(Ratio(1, 0), ParamError);
}

TEST(Ratio, Parse) {
  EXPECT_EQ(Ratio::parse("1/8"), Ratio(1, 8));
  EXPECT_EQ(Ratio::parse("3"), Ratio(3, 1));
  EXPECT_THROW(Ratio::parse("1/0"), ParamError);
  EXPECT_THROW(Ratio::parse("a/2"), ParamError);
  EXPECT_THROW(Ratio::parse("1/"), ParamError);
  EXPECT_THROW(Ratio::parse("-1/2"), ParamError);
}

TEST(Ratio, CeilTimes) {
  EXPECT_EQ(Ratio(1, 2).ceil_times(40), 20u);
  EXPECT_EQ(Ratio(1, 3).ceil_times(10), 4u);
  EXPECT_EQ(Ratio(1, 8).ceil_times(1), 1u);
  EXPECT_EQ(Ratio(5, 1).ceil_times(0), 0u);
}

TEST(Bitmap, SetResetCount) {
  Bitmap b(130);
  EXPECT_TRUE(b.none());
  b.set(0);
  b.set(64);
  b.set(129);
  EXPECT_EQ(b.count(), 3u);
  EXPECT_TRUE(b.test(129));
  b.reset(64);
  EXPECT_FALSE(b.test(64));
  b.flip(5);
  EXPECT_TRUE(b.at(5));
  EXPECT_THROW(b.at(130), std::out_of_range);
}

TEST(Bitmap, LsbFirstBytes) {
  Bitmap b(12);
  b.set(0);
  b.set(9);
  std::vector<std::uint8_t> bytes;
  b.append_bytes(bytes);
  ASSERT_EQ(bytes.size(), 2u);
  EXPECT_EQ(bytes[0], 0x01);
  EXPECT_EQ(bytes[1], 0x02);
}

TEST(Bitmap, BytesRoundTripProperty) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t n = rng() % 700;
    Bitmap b(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      if (rng() & 1u) b.set(i);
    }
    std::vector<std::uint8_t> bytes;
    b.append_bytes(bytes);
    EXPECT_EQ(Bitmap::from_bytes(bytes, n), b);
  }
}

TEST(Bitmap, RejectsSetPaddingBits) {
  const std::vector<std::uint8_t> bytes{0xFF};
  EXPECT_THROW(Bitmap::from_bytes(bytes, 4), std::invalid_argument);
  EXPECT_THROW(Bitmap::from_bytes(bytes, 16), std::invalid_argument);
}
