#pragma once

#include <cstdint>
#include <vector>

#include "dbp/inference.hpp"

namespace dbp {

struct MhConfig {
  std::size_t iterations = 20000;
  std::size_t burn_in = 2000;
  double proposal_scale = 0.05;
  std::uint64_t seed = 1;
  double credible_level = 0.95;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct EdgeChain {
  std::vector<double> samples;  // post burn-in
  double acceptance_rate = 0.0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool no_data = false;
};

struct MhResult {
  WordLength m;
  std::vector<EdgeChain> edges;
};

/// Independent random-walk Metropolis chain per edge, targeting
/// Beta(alpha + n1, beta + n0). Gaussian proposals are reflected back into
/// [0, 1], which keeps the proposal symmetric. Edge i draws from stream i of
/// the seed, so results do not depend on thread scheduling.
MhResult mh_sample_posterior(const TransitionCounts& counts, const BetaPrior& prior, const MhConfig& cfg);

/// Linear-interpolated sample quantile (type 7) of an unsorted sample.
double sample_quantile(std::vector<double> values, double q);

}  // namespace dbp
