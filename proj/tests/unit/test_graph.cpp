#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "dbp/error.hpp"
#include "dbp/graph.hpp"

using namespace dbp;

TEST(WordLength, AcceptsOneThroughCap) {
  EXPECT_EQ(WordLength(1).value(), 1);
  EXPECT_EQ(WordLength(10).word_count(), 1024u);
  EXPECT_EQ(WordLength(3).edge_count(), 16u);
  EXPECT_THROW(WordLength(0), InvalidArgument);
  EXPECT_THROW(WordLength(11), InvalidArgument);
  EXPECT_EQ(WordLength(12, 12).value(), 12);
}

TEST(EncodeWord, PositionalNotation) {
  const std::vector<Letter> w101{1, 0, 1}, w00{0, 0}, w111{1, 1, 1};
  EXPECT_EQ(encode_word(w101, WordLength(3)).index, 5u);
  EXPECT_EQ(encode_word(w00, WordLength(2)).index, 0u);
  EXPECT_EQ(encode_word(w111, WordLength(3)).index, 7u);
}

TEST(EncodeWord, RejectsLengthMismatchAndBadLetters) {
  const std::vector<Letter> two{1, 0}, bad{1, 2};
  EXPECT_THROW(encode_word(two, WordLength(3)), InvalidArgument);
  EXPECT_THROW(encode_word(bad, WordLength(2)), InvalidArgument);
}

TEST(DecodeWord, Examples) {
  EXPECT_EQ(decode_word(make_word(5, WordLength(3))), (std::vector<Letter>{1, 0, 1}));
  EXPECT_EQ(decode_word(make_word(0, WordLength(1))), (std::vector<Letter>{0}));
  EXPECT_EQ(decode_word(make_word(6, WordLength(3))), (std::vector<Letter>{1, 1, 0}));
  EXPECT_THROW(make_word(8, WordLength(3)), InvalidArgument);
}

TEST(Successors, Examples) {
  auto [a, b] = successors(make_word(2, WordLength(2)));
  EXPECT_EQ(a.index, 0u);
  EXPECT_EQ(b.index, 1u);
  std::tie(a, b) = successors(make_word(3, WordLength(2)));
  EXPECT_EQ(a.index, 2u);
  EXPECT_EQ(b.index, 3u);
  std::tie(a, b) = successors(make_word(0, WordLength(3)));
  EXPECT_EQ(a.index, 0u);
  EXPECT_EQ(b.index, 1u);
}

TEST(GraphProperty, RoundTripAndOverlapExhaustiveUpToCap) {
  for (int mv = 1; mv <= kDefaultMaxWordLength; ++mv) {
    const WordLength m(mv);
    for (std::uint32_t i = 0; i < m.word_count(); ++i) {
      const Word w = make_word(i, m);
      const auto letters = decode_word(w);
      ASSERT_EQ(encode_word(letters, m), w);
      const auto [s0, s1] = successors(w);
      for (const auto& [succ, appended] : {std::pair{s0, Letter{0}}, std::pair{s1, Letter{1}}}) {
        const auto next = decode_word(succ);
        for (int t = 0; t + 1 < mv; ++t) ASSERT_EQ(next[t], letters[t + 1]) << "m=" << mv << " i=" << i;
        ASSERT_EQ(next[mv - 1], appended);
      }
    }
  }
}

TEST(TransitionTable, AntiClusteredLookup) {
  const auto t = make_transition_table(WordLength(2), {0.9, 0.25, 0.75, 0.1});
  EXPECT_DOUBLE_EQ(t.transition_probability(2, 0), 0.25);  // 10 -> 00
  EXPECT_DOUBLE_EQ(t.transition_probability(2, 1), 0.75);
  EXPECT_DOUBLE_EQ(t.transition_probability(0, 3), 0.0);  // not adjacent
  EXPECT_DOUBLE_EQ(t.edge_probability(0), 1.0 - 0.9);
  EXPECT_DOUBLE_EQ(t.edge_probability(7), 0.1);
}

TEST(TransitionTable, FairCoinAndValidation) {
  const auto coin = make_transition_table(WordLength(1), {0.5, 0.5});
  EXPECT_DOUBLE_EQ(coin.transition_probability(0, 1), 0.5);
  EXPECT_THROW(make_transition_table(WordLength(2), {0.9, 1.3, 0.5, 0.5}), InvalidArgument);
  EXPECT_THROW(make_transition_table(WordLength(2), {0.9, -0.1, 0.5, 0.5}), InvalidArgument);
  EXPECT_THROW(make_transition_table(WordLength(2), {0.5, 0.5}), InvalidArgument);
  EXPECT_THROW(make_transition_table(WordLength(1), {std::numeric_limits<double>::quiet_NaN(), 0.5}),
               InvalidArgument);
  EXPECT_NO_THROW(make_transition_table(WordLength(1), {0.0, 1.0}));
}

TEST(TransitionTable, RowsSumToOneWithTwoNonzerosExactly) {
  const auto t = make_transition_table(WordLength(3), {0.1, 0.7, 0.5, 0.8, 0.2, 0.5, 0.3, 0.9});
  const auto dense = t.dense_matrix();
  for (std::uint32_t i = 0; i < 8; ++i) {
    double row = 0.0;
    int nonzero = 0;
    for (std::uint32_t j = 0; j < 8; ++j) {
      row += dense[i * 8 + j];
      nonzero += dense[i * 8 + j] != 0.0;
    }
    EXPECT_EQ(row, 1.0);
    EXPECT_LE(nonzero, 2);
  }
}

TEST(Edges, IndexDecomposition) {
  const WordLength m(2);
  for (std::uint32_t k = 0; k < m.edge_count(); ++k) {
    EXPECT_EQ(edge_source(k) * 2 + edge_letter(k), k);
    EXPECT_EQ(edge_target(k, m), k % 4);
  }
}
