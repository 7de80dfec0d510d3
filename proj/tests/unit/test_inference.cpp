#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "dbp/distribution.hpp"
#include "dbp/error.hpp"
#include "dbp/inference.hpp"
#include "dbp/io.hpp"
#include "dbp/oracle.hpp"
#include "dbp/rng.hpp"

using namespace dbp;

namespace {

BinarySequence parse(const char* s) { return io::parse_sequence_text(s); }

TransitionTable anti() { return TransitionTable(WordLength(2), {0.9, 0.25, 0.75, 0.1}); }

TransitionCounts single_edge(std::uint64_t n1, std::uint64_t n0) {
  TransitionCounts c(WordLength(1));
  c.n1[0] = n1;
  c.n0[0] = n0;
  return c;
}

std::vector<Letter> random_letters(Rng& rng, std::size_t n) {
  std::vector<Letter> x(n);
  for (auto& b : x) b = rng.uniform() < 0.5 ? 1 : 0;
  return x;
}

}  // namespace

TEST(CountTransitions, HandCountedExamples) {
  const auto c = count_transitions(parse("00111"), WordLength(2));
  EXPECT_EQ(c.n1, (std::vector<std::uint64_t>{1, 1, 0, 1}));
  EXPECT_EQ(c.n0, (std::vector<std::uint64_t>{0, 0, 0, 0}));

  const auto alt = count_transitions(parse("010101"), WordLength(2));
  EXPECT_EQ(alt.n0[1], 2u);  // 01 -> 10
  EXPECT_EQ(alt.n1[2], 2u);  // 10 -> 01
  EXPECT_EQ(alt.n1[1], 0u);
  EXPECT_EQ(alt.total(), 4u);

  const auto short_segments = count_transitions(parse("01-1"), WordLength(2));
  EXPECT_EQ(short_segments.total(), 0u);
}

TEST(CountTransitions, NoTransitionCrossesAGap) {
  const auto c = count_transitions(parse("000-111"), WordLength(1));
  EXPECT_EQ(c.n0[0], 2u);
  EXPECT_EQ(c.n1[1], 2u);
  EXPECT_EQ(c.n1[0], 0u);
  EXPECT_EQ(c.total(), 4u);
}

TEST(CountProperty, ExponentFormEqualsSlidingWindow) {
  Rng rng(31, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 50);
    const auto x = random_letters(rng, n);
    for (int mv = 1; mv <= 3; ++mv) {
      const WordLength m(mv);
      const auto slide = count_transitions(BinarySequence::from_letters(x), m);
      const auto expo = oracle::exponent_form_counts(x, m);
      ASSERT_EQ(slide.n0, expo.n0);
      ASSERT_EQ(slide.n1, expo.n1);
      ASSERT_EQ(slide.total(), n > static_cast<std::size_t>(mv) ? n - mv : 0u);
    }
  }
}

TEST(LogLikelihood, Examples) {
  const auto t = anti();
  EXPECT_EQ(log_likelihood(t, TransitionCounts(WordLength(2))), 0.0);
  TransitionCounts coin_counts(WordLength(1));
  coin_counts.n0 = {3, 4};
  coin_counts.n1 = {2, 1};
  EXPECT_NEAR(log_likelihood(TransitionTable(WordLength(1), {0.5, 0.5}), coin_counts), 10 * std::log(0.5), 1e-14);
  EXPECT_NEAR(log_likelihood(t, count_transitions(parse("00111"), WordLength(2))),
              std::log(0.9) + std::log(0.25) + std::log(0.1), 1e-14);
}

TEST(LogLikelihood, ZeroProbabilityRules) {
  const TransitionTable t(WordLength(1), {1.0, 0.5});
  TransitionCounts c(WordLength(1));
  c.n1[0] = 3;
  EXPECT_NEAR(log_likelihood(t, c), 0.0, 0.0);  // zero count meets zero probability: fine
  c.n0[0] = 1;
  EXPECT_EQ(log_likelihood(t, c), -std::numeric_limits<double>::infinity());
}

TEST(LikelihoodProperty, TimesStationaryFirstWordIsJointProbability) {
  Rng rng(5, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = oracle::random_table(WordLength(1 + trial % 3), 9, trial);
    const auto pi = stationary_distribution(t);
    const auto x = random_letters(rng, 4 + trial % 20);
    const auto counts = count_transitions(BinarySequence::from_letters(x), t.word_length());
    const std::span<const Letter> first(x.data(), static_cast<std::size_t>(t.m()));
    const double lhs = std::exp(log_likelihood(t, counts)) * pi.pi[encode_word(first, t.word_length()).index];
    const double rhs = sequence_probability(t, pi, x);
    ASSERT_NEAR(lhs / rhs, 1.0, 1e-12);
  }
}

TEST(Mle, RatioAndStandardError) {
  const auto est = mle(single_edge(3, 1));
  ASSERT_TRUE(est[0].estimate);
  EXPECT_DOUBLE_EQ(*est[0].estimate, 0.75);
  EXPECT_NEAR(*est[0].std_error, std::sqrt(0.75 * 0.25 / 4), 1e-15);
  EXPECT_FALSE(est[1].estimate);
  EXPECT_FALSE(est[1].std_error);
  EXPECT_EQ(est[1].visits, 0u);
}

TEST(Mle, AllZeroCountsAreNoData) {
  for (const auto& e : mle(TransitionCounts(WordLength(3)))) EXPECT_FALSE(e.estimate);
}

TEST(MleProperty, ScalingCountsLeavesEstimatesUnchanged) {
  const auto base = count_transitions(parse("0011101001011100010111"), WordLength(2));
  for (std::uint64_t k : {2u, 5u, 17u}) {
    auto scaled = base;
    for (auto& v : scaled.n0) v *= k;
    for (auto& v : scaled.n1) v *= k;
    const auto a = mle(base), b = mle(scaled);
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_EQ(a[i].estimate.has_value(), b[i].estimate.has_value());
      if (a[i].estimate) EXPECT_DOUBLE_EQ(*a[i].estimate, *b[i].estimate);
    }
  }
}

TEST(Mle, SimulatedLength200IsCloseToTruth) {
  SimulationConfig cfg;
  cfg.n = 200;
  cfg.seed = 3;
  const auto est = mle(count_transitions(simulate(anti(), cfg), WordLength(2)));
  for (std::uint32_t i = 0; i < 4; ++i) {
    ASSERT_TRUE(est[i].estimate);
    EXPECT_LT(std::abs(*est[i].estimate - anti().p(i)), 0.1);
  }
}

TEST(ExpectedCount, FairCoinSymmetry) {
  const TransitionTable coin(WordLength(1), {0.5, 0.5});
  for (std::uint32_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(expected_transition_count(coin, 3, k), 0.5, 1e-15);
    EXPECT_NEAR(expected_transition_count_indexed(coin, 3, k), 0.5, 1e-15);
  }
}

TEST(ExpectedCount, StationaryClosedForm) {
  const TransitionTable t(WordLength(3), {0.1, 0.7, 0.5, 0.8, 0.2, 0.5, 0.3, 0.9});
  const auto pi = stationary_distribution(t);
  for (std::uint32_t k = 0; k < 16; ++k)
    EXPECT_NEAR(expected_transition_count(t, 40, k), 37 * pi.pi[edge_source(k)] * t.edge_probability(k), 1e-12);
}

TEST(ExpectedCount, ThreeLetterSelfLoopIsPi000) {
  const auto t = anti();
  const double pi000 = oracle::brute_force_distribution(t, 3)[0];
  EXPECT_NEAR(pi000, 1.0 / 92, 1e-15);  // frozen from the numpy oracle
  EXPECT_NEAR(expected_transition_count(t, 3, 0), pi000, 1e-15);
  EXPECT_NEAR(expected_transition_count_indexed(t, 3, 0), pi000, 1e-15);
  EXPECT_THROW(expected_transition_count(t, 2, 0), InvalidArgument);
}

TEST(ExpectedCountProperty, ThreeWaysAgree) {
  for (int mv = 1; mv <= 3; ++mv) {
    for (std::uint64_t trial = 0; trial < 3; ++trial) {
      const auto t = oracle::random_table(WordLength(mv), 41, trial);
      for (int n : {mv + 1, 7, 12}) {
        for (std::uint32_t k = 0; k < WordLength(mv).edge_count(); ++k) {
          const double brute = oracle::brute_force_expected_count(t, n, k);
          ASSERT_NEAR(expected_transition_count(t, n, k), brute, 1e-10);
          ASSERT_NEAR(expected_transition_count_indexed(t, n, k), brute, 1e-10);
        }
      }
    }
  }
}

TEST(Fisher, ClosedCases) {
  EXPECT_NEAR(fisher_information(anti(), 3, 0), 25.0 / 23.0, 1e-13);  // pi^3(000) / (p_00^00)^2
  const TransitionTable coin(WordLength(1), {0.5, 0.5});
  for (std::uint32_t k = 0; k < 4; ++k) EXPECT_NEAR(fisher_information(coin, 3, k), 2.0, 1e-14);
  EXPECT_THROW(fisher_information(TransitionTable(WordLength(1), {1.0, 0.5}), 3, 0), InvalidArgument);
}

TEST(FisherProperty, NonNegativeAndFreeFormIsSumOfBothEdges) {
  const TransitionTable t(WordLength(3), {0.1, 0.7, 0.5, 0.8, 0.2, 0.5, 0.3, 0.9});
  for (std::uint32_t i = 0; i < 8; ++i) {
    const double i0 = fisher_information(t, 30, 2 * i), i1 = fisher_information(t, 30, 2 * i + 1);
    EXPECT_GE(i0, 0.0);
    EXPECT_GE(i1, 0.0);
    EXPECT_NEAR(fisher_information_free(t, 30, i), i0 + i1, 1e-12);
  }
}

TEST(BetaPrior, ValidationAndBroadcast) {
  const auto p = BetaPrior::make(WordLength(2), {2.0}, {3.0});
  EXPECT_EQ(p.alpha, (std::vector<double>{2, 2, 2, 2}));
  EXPECT_EQ(p.beta, (std::vector<double>{3, 3, 3, 3}));
  EXPECT_THROW(BetaPrior::make(WordLength(2), {0.0}, {1.0}), InvalidArgument);
  EXPECT_THROW(BetaPrior::make(WordLength(2), {1.0, 1.0}, {1.0}), InvalidArgument);
  EXPECT_THROW(BetaPrior::make(WordLength(1), {1.0}, {-1.0}), InvalidArgument);
}

TEST(Posterior, ConjugateUpdate) {
  const auto flat = posterior(TransitionCounts(WordLength(1)), BetaPrior::uniform(WordLength(1)));
  EXPECT_EQ(flat.alpha[0], 1.0);
  EXPECT_EQ(flat.beta[0], 1.0);
  EXPECT_TRUE(flat.no_data[0]);
  EXPECT_FALSE(flat.mode(0));

  const auto post = posterior(single_edge(3, 1), BetaPrior::uniform(WordLength(1)));
  EXPECT_EQ(post.alpha[0], 4.0);
  EXPECT_EQ(post.beta[0], 2.0);
  EXPECT_DOUBLE_EQ(post.mean(0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*post.mode(0), 0.75);
  EXPECT_FALSE(post.no_data[0]);
  const auto [lo, hi] = post.credible_interval(0, 0.95);
  EXPECT_NEAR(lo, 0.2835820638819105, 1e-12);  // scipy beta.ppf
  EXPECT_NEAR(hi, 0.9472550494736831, 1e-12);
  EXPECT_DOUBLE_EQ(post.mean_table().p(0), 2.0 / 3.0);
}

TEST(LogEvidence, Examples) {
  const auto uni = BetaPrior::uniform(WordLength(1));
  EXPECT_EQ(log_evidence(TransitionCounts(WordLength(1)), uni), 0.0);
  EXPECT_NEAR(log_evidence(single_edge(1, 0), uni), std::log(0.5), 1e-14);
  EXPECT_NEAR(log_evidence(single_edge(2, 1), uni), std::log(1.0 / 12.0), 1e-14);
}

TEST(EvidenceProperty, ClosedFormMatchesQuadrature) {
  Rng rng(77, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const WordLength m(1 + trial % 2);
    TransitionCounts c(m);
    for (std::uint32_t i = 0; i < m.word_count(); ++i) {
      c.n0[i] = static_cast<std::uint64_t>(rng.uniform() * 21);
      c.n1[i] = static_cast<std::uint64_t>(rng.uniform() * 21);
    }
    const auto prior = BetaPrior::make(m, {1.0 + 2 * rng.uniform()}, {1.0 + 2 * rng.uniform()});
    const double closed = log_evidence(c, prior);
    const double grid = oracle::grid_log_evidence(c, prior);
    ASSERT_LT(std::abs(std::expm1(closed - grid)), 1e-6) << closed << " vs " << grid;
  }
}

TEST(BayesFactor, IdentityAndAntisymmetry) {
  const auto x = parse("0110100110010110100101101001011001101001");
  EXPECT_EQ(log_bayes_factor(x, WordLength(2), WordLength(2)), 0.0);
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b)
      EXPECT_NEAR(log_bayes_factor(x, WordLength(a), WordLength(b)),
                  -log_bayes_factor(x, WordLength(b), WordLength(a)), 1e-12);
}

TEST(BayesFactor, AntiClusteredFixtureFavoursTwo) {
  const auto x = io::parse_sequence_text(io::read_file(std::string(DBP_FIXTURE_DIR) + "/anticlustered_n200.txt"));
  for (int j = 1; j <= 10; ++j)
    if (j != 2) EXPECT_GT(log_bayes_factor(x, WordLength(2), WordLength(j)), 0.0) << "j=" << j;
}

TEST(SelectWordLength, ConstantSequenceSelectsOne) {
  const auto ones = io::parse_sequence_text(std::string(60, '1'));
  const auto rep = select_word_length(ones, 10);
  EXPECT_EQ(rep.selected, 1);
  ASSERT_EQ(rep.candidates.size(), 10u);
  for (std::size_t a = 0; a < 10; ++a)
    for (std::size_t b = 0; b < 10; ++b)
      EXPECT_NEAR(rep.log_bayes_factor[a][b], rep.log_evidence[a] - rep.log_evidence[b], 1e-12);
}

TEST(SelectWordLength, ConditionalBasisRewardsDiscardedLetters) {
  // Conditional evidences see 60 - m transitions, so fewer letters look more
  // probable and the largest m wins. This is why full_data is the default.
  const auto ones = io::parse_sequence_text(std::string(60, '1'));
  EXPECT_EQ(select_word_length(ones, 10, uniform_prior_rule(), EvidenceBasis::conditional).selected, 10);
}

TEST(SelectWordLength, FullDataEvidenceOfConstantSequence) {
  // L = 50 ones: log B(L-m+1, 1) - m log 2, frozen from an independent computation.
  const auto ones = io::parse_sequence_text(std::string(50, '1'));
  const auto rep = select_word_length(ones, 4);
  const double frozen[] = {-4.605170185988099, -5.2781146592305355, -5.950642552587732, -6.622736323949816};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(rep.log_evidence[i], frozen[i], 1e-12);
}

TEST(SelectWordLength, NothingToCompareIsAnError) {
  EXPECT_THROW(select_word_length(parse("1"), 3), DataError);
  EXPECT_THROW(select_word_length(parse("1-0-1"), 3), DataError);
}
