#pragma once

#include <cstdint>
#include <span>

#include "dbp/graph.hpp"
#include "dbp/process.hpp"
#include "dbp/sequence.hpp"

namespace dbp {

/// Joint probability of x_1..x_n under the stationary de Bruijn process:
/// the latent initial word is drawn from pi^m and every letter is a
/// transition output. Forward pass over words, O(2^m n). Works for any
/// n >= 1, including n < m.
double sequence_probability(const TransitionTable& table, std::span<const Letter> letters);
double sequence_probability(const TransitionTable& table, const StationaryDistribution& stationary,
                            std::span<const Letter> letters);

/// Natural log of sequence_probability with per-step rescaling; -inf for
/// impossible sequences.
double log_sequence_probability(const TransitionTable& table, const StationaryDistribution& stationary,
                                std::span<const Letter> letters);

/// pi^n(i) evaluated through the closed indexed product: sequence i of
/// length n (x_1 = most significant bit), summed over latent initial words j
/// with each transition located by integer division and mod 2^m arithmetic.
/// Shares no code with the forward pass. Requires i < 2^n and n <= 24.
double sequence_probability_indexed(const TransitionTable& table, const StationaryDistribution& stationary,
                                    int n, std::uint64_t i);
double sequence_probability_indexed(const TransitionTable& table, int n, std::uint64_t i);

enum class PredictionMode {
  /// P(next = 1 | observed history): exact filtering, missing positions
  /// marginalized under the chain itself.
  conditional,
  /// Positions of the conditioning word that are missing (gaps, or before the
  /// start of the history) are marginalized independently over the
  /// stationary letter marginal; observed positions are held fixed.
  paper_marginal,
};

double predict_next(const TransitionTable& table, const BinarySequence& history, PredictionMode mode);
double predict_next(const TransitionTable& table, const StationaryDistribution& stationary,
                    const BinarySequence& history, PredictionMode mode);

}  // namespace dbp
