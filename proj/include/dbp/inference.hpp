#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dbp/graph.hpp"
#include "dbp/sequence.hpp"

namespace dbp {

/// Edge traversal counts for word length m. n1[i] counts i -> (2i+1) mod 2^m
/// (append 1), n0[i] counts i -> 2i mod 2^m (append 0).
struct TransitionCounts {
  WordLength m;
  std::vector<std::uint64_t> n0;
  std::vector<std::uint64_t> n1;

  explicit TransitionCounts(WordLength wl) : m(wl), n0(wl.word_count(), 0), n1(wl.word_count(), 0) {}

  std::uint64_t visits(std::uint32_t i) const { return n0[i] + n1[i]; }
  std::uint64_t total() const;
  /// Count of edge k = 2*source + letter.
  std::uint64_t edge(std::uint32_t k) const { return (k & 1u) ? n1[k >> 1] : n0[k >> 1]; }
};

/// Sliding window of length m+1 over each gap-free segment; a segment of
/// length L contributes max(L - m, 0) transitions.
TransitionCounts count_transitions(const BinarySequence& seq, WordLength m);

/// Log-likelihood conditional on the first word of each segment.
/// Returns -inf when a positive count meets a zero probability.
double log_likelihood(const TransitionTable& table, const TransitionCounts& counts);

struct EdgeEstimate {
  std::uint64_t visits = 0;
  std::optional<double> estimate;   // empty: edge never visited
  std::optional<double> std_error;  // sqrt(p(1-p)/visits), inverse observed information
};

std::vector<EdgeEstimate> mle(const TransitionCounts& counts);

/// E[n_k] for sequences of length n drawn from the stationary process, by
/// propagating the word distribution. Requires n >= m + 1.
double expected_transition_count(const TransitionTable& table, int n, std::uint32_t k);

/// Same quantity through the closed double sum over sequence indices
/// (pattern k inserted at every offset). Exponential in n; n <= 20.
double expected_transition_count_indexed(const TransitionTable& table, int n, std::uint32_t k);

/// I(p_k) = E[n_k] / p_k^2 for the edge-parameterized log-likelihood
/// sum_k n_k log p_k. Throws when p_k = 0.
///
/// The closed-form statement of this result elsewhere carries a 1/p_k
/// prefactor; the second derivative of n_k log p_k gives 1/p_k^2, and the
/// Monte-Carlo check in the oracle module agrees with the latter.
double fisher_information(const TransitionTable& table, int n, std::uint32_t k);

/// Information about the free parameter p_i (append-1 probability of word i)
/// with its complement tied: E[n0_i]/(1-p_i)^2 + E[n1_i]/p_i^2.
double fisher_information_free(const TransitionTable& table, int n, std::uint32_t i);

struct BetaPrior {
  std::vector<double> alpha;
  std::vector<double> beta;

  static BetaPrior uniform(WordLength m);
  /// Validated prior; scalar vectors (size 1) are broadcast to 2^m edges.
  static BetaPrior make(WordLength m, std::vector<double> alpha, std::vector<double> beta);
};

struct PosteriorSpec {
  WordLength m;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<bool> no_data;  // edge never visited; posterior equals the prior

  double mean(std::uint32_t i) const;
  /// Interior mode; empty when the density has no unique maximum in [0, 1].
  std::optional<double> mode(std::uint32_t i) const;
  double quantile(std::uint32_t i, double q) const;
  /// Equal-tailed interval at the given level, e.g. 0.95.
  std::pair<double, double> credible_interval(std::uint32_t i, double level) const;
  TransitionTable mean_table() const;
};

PosteriorSpec posterior(const TransitionCounts& counts, const BetaPrior& prior);

/// log P(X | m): sum over edges of log B(n1+a, n0+b) - log B(a, b).
double log_evidence(const TransitionCounts& counts, const BetaPrior& prior);

enum class EvidenceBasis {
  /// Evidence conditional on the first word of each segment.
  conditional,
  /// Conditional evidence times 2^-min(L, m) per segment, so every candidate
  /// m accounts for the same observed letters.
  full_data,
};

using PriorRule = std::function<BetaPrior(WordLength)>;
PriorRule uniform_prior_rule();

double log_model_evidence(const BinarySequence& seq, WordLength m, const BetaPrior& prior,
                          EvidenceBasis basis = EvidenceBasis::full_data);

/// log P(X|m1) - log P(X|m2) under equal model priors.
double log_bayes_factor(const BinarySequence& seq, WordLength m1, WordLength m2,
                        const PriorRule& prior_rule = uniform_prior_rule(),
                        EvidenceBasis basis = EvidenceBasis::full_data);

struct EvidenceReport {
  EvidenceBasis basis = EvidenceBasis::full_data;
  std::vector<int> candidates;
  std::vector<double> log_evidence;
  /// log_bayes_factor[a][b] = log_evidence[a] - log_evidence[b].
  std::vector<std::vector<double>> log_bayes_factor;
  int selected = 0;
};

inline constexpr double kSelectionTieTolerance = 1e-9;

/// Evidence for m = 1..m_max and the argmax (smallest m within
/// kSelectionTieTolerance of the maximum). Throws DataError if no candidate
/// sees a single transition.
EvidenceReport select_word_length(const BinarySequence& seq, int m_max,
                                  const PriorRule& prior_rule = uniform_prior_rule(),
                                  EvidenceBasis basis = EvidenceBasis::full_data);

}  // namespace dbp
