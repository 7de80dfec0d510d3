#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dbp/graph.hpp"
#include "dbp/sequence.hpp"

namespace dbp {

struct StationaryDistribution {
  WordLength m;
  std::vector<double> pi;

  /// Probability that the newest letter of a stationary word equals b.
  double letter_marginal(Letter b) const;
};

/// Closed communicating classes of the positive-probability transition graph,
/// each sorted ascending, ordered by smallest member.
std::vector<std::vector<std::uint32_t>> closed_classes(const TransitionTable& table);

/// Unique stationary vector of the word chain. Throws NonUniqueStationary
/// (carrying the closed classes) when more than one closed class exists.
StationaryDistribution stationary_distribution(const TransitionTable& table);

enum class InitMode { stationary, fixed_word, uniform_word };

struct SimulationConfig {
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  InitMode init = InitMode::stationary;
  std::optional<Word> fixed_word;
};

/// Forward simulation. With InitMode::stationary the initial word is latent
/// and all n letters are transition outputs; with fixed_word / uniform_word
/// the first m letters are the initial word itself.
/// Draw order: one uniform for the initial word (none for fixed_word), then
/// one uniform per emitted transition.
BinarySequence simulate(const TransitionTable& table, const SimulationConfig& cfg);

/// Same as simulate, reusing a precomputed stationary distribution.
BinarySequence simulate(const TransitionTable& table, const SimulationConfig& cfg,
                        const StationaryDistribution& stationary);

}  // namespace dbp
