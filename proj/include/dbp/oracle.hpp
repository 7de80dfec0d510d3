#pragma once

// Brute-force ground truth for the closed-form and dynamic-programming
// results, usable from tests and from the `verify` CLI command.
//
// Nothing here calls into the distribution module or the inference
// evidence/expectation code: stationary vectors come from a dense eigen-solve,
// joint probabilities from explicit path enumeration, and evidences from
// numerical quadrature.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dbp/graph.hpp"
#include "dbp/inference.hpp"

namespace dbp::oracle {

struct EnumerationBudget {
  int max_n = 12;  // exhaustive enumeration over 2^max_n sequences
  int max_m = 4;   // dense matrix work
};

/// Deterministic pairwise (tree) summation.
double pairwise_sum(std::span<const double> values);

/// Left eigenvector of P for the eigenvalue closest to 1, normalized.
std::vector<double> dense_stationary(const TransitionTable& table, const EnumerationBudget& budget = {});

/// pi^n for every length-n sequence, indexed with x_1 as the most significant
/// bit, by enumerating every latent initial word and every path.
std::vector<double> brute_force_distribution(const TransitionTable& table, int n,
                                             const EnumerationBudget& budget = {});

/// Sum over all 2^n sequences of (sliding-window count of edge k) * pi^n(x).
double brute_force_expected_count(const TransitionTable& table, int n, std::uint32_t k,
                                  const EnumerationBudget& budget = {});

/// Counts as the product-of-indicators exponents sum_i prod_r x or (1 - x)
/// over a gap-free sequence, one pattern at a time.
TransitionCounts exponent_form_counts(std::span<const Letter> letters, WordLength m);

/// log of the model evidence by per-edge composite Gauss-Legendre quadrature
/// (5 nodes on each of grid_points uniform panels, with geometric refinement
/// of the two end panels). The prior normalizer is integrated the same way.
double grid_log_evidence(const TransitionCounts& counts, const BetaPrior& prior, int grid_points = 400,
                         const EnumerationBudget& budget = {});

struct MonteCarloFisher {
  double observed_information = 0.0;  // mean of n_k / p_k^2
  double observed_information_se = 0.0;
  double free_score_variance = 0.0;  // Var(n1/p - n0/(1-p)) for the source word
  double free_score_variance_se = 0.0;
  std::size_t replicates = 0;
};

/// Monte-Carlo estimate of -E[d^2 log L / dp_k^2] from simulated stationary
/// sequences of length n, plus the variance of the free-parameter score.
/// Replicate r uses stream r of the seed.
MonteCarloFisher monte_carlo_fisher(const TransitionTable& table, int n, std::uint32_t k, std::size_t replicates,
                                    std::uint64_t seed);

struct Check {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerificationReport {
  int m = 0;
  int n = 0;
  std::vector<double> table;
  std::vector<Check> checks;
  bool passed() const;
};

/// Runs every oracle comparison for one table at sequence length n.
VerificationReport run_verification(const TransitionTable& table, int n, std::uint64_t seed,
                                    const EnumerationBudget& budget = {});

/// Random table with entries uniform on [lo, hi].
TransitionTable random_table(WordLength m, std::uint64_t seed, std::uint64_t stream = 0, double lo = 0.05,
                             double hi = 0.95);

}  // namespace dbp::oracle
