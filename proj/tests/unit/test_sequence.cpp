#include <gtest/gtest.h>

#include "dbp/error.hpp"
#include "dbp/sequence.hpp"

using namespace dbp;

TEST(BinarySequence, SegmentsSplitAtGaps) {
  const BinarySequence s({Obs::zero, Obs::zero, Obs::one, Obs::missing, Obs::missing, Obs::one, Obs::zero});
  const auto seg = s.segments();
  ASSERT_EQ(seg.size(), 2u);
  EXPECT_EQ(seg[0], (std::vector<Letter>{0, 0, 1}));
  EXPECT_EQ(seg[1], (std::vector<Letter>{1, 0}));
  EXPECT_EQ(s.observed_count(), 5u);
  EXPECT_EQ(s.count(1), 2u);
  EXPECT_TRUE(s.has_missing());
  EXPECT_THROW(s.letters(), InvalidArgument);
}

TEST(BinarySequence, FromSegmentsJoinsWithOneGap) {
  const auto s = BinarySequence::from_segments({{0, 1}, {1}});
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s.positions()[2], Obs::missing);
  EXPECT_EQ(s.segments(), (std::vector<std::vector<Letter>>{{0, 1}, {1}}));
}

TEST(BinarySequence, LeadingAndTrailingGapsProduceNoEmptySegments) {
  const BinarySequence s({Obs::missing, Obs::one, Obs::missing});
  EXPECT_EQ(s.segments(), (std::vector<std::vector<Letter>>{{1}}));
}

TEST(BinarySequence, LettersRoundTrip) {
  const std::vector<Letter> x{1, 0, 1, 1};
  const auto s = BinarySequence::from_letters(x);
  EXPECT_EQ(s.letters(), x);
  EXPECT_FALSE(s.has_missing());
}
