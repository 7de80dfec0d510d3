#include "dbp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

#include "dbp/distribution.hpp"
#include "dbp/error.hpp"
#include "dbp/parallel.hpp"
#include "dbp/process.hpp"
#include "dbp/rng.hpp"

namespace dbp::oracle {
namespace {

void require_n(int n, const EnumerationBudget& budget) {
  if (n < 1) throw InvalidArgument("sequence length must be at least 1");
  if (n > budget.max_n)
    throw BudgetExceeded("n=" + std::to_string(n) + " exceeds enumeration budget max_n=" +
                         std::to_string(budget.max_n));
}

void require_m(int m, const EnumerationBudget& budget) {
  if (m > budget.max_m)
    throw BudgetExceeded("m=" + std::to_string(m) + " exceeds dense budget max_m=" + std::to_string(budget.max_m));
}

// Five-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr double kGlNodes[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                0.9061798459386640};
constexpr double kGlWeights[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                  0.2369268850561891, 0.2369268850561891};

// log of the integral over [0, 1] of p^(a-1) (1-p)^(b-1).
double log_beta_quadrature(double a, double b, int panels) {
  // Uniform panels on [0, 1/2], with the panel touching 0 split
  // geometrically so that p^(a-1) with a fractional exponent is still
  // integrated to near machine precision; [1/2, 1] is the mirror image.
  // Each node is kept as a pair (p, 1 - p) computed without cancellation.
  constexpr int kGradedLevels = 48;
  constexpr double kGrading = 0.2;
  const int half_panels = (panels + 1) / 2;
  const double h = 0.5 / half_panels;
  std::vector<double> cuts{0.0};
  for (int j = kGradedLevels; j >= 1; --j) cuts.push_back(h * std::pow(kGrading, j));
  for (int c = 1; c <= half_panels; ++c) cuts.push_back(c * h);

  std::vector<double> logs, weights;
  logs.reserve(10 * cuts.size());
  weights.reserve(10 * cuts.size());
  auto log_kernel = [a, b](double p, double q) {
    return (a == 1.0 ? 0.0 : (a - 1.0) * std::log(p)) + (b == 1.0 ? 0.0 : (b - 1.0) * std::log(q));
  };
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double mid = 0.5 * (cuts[c] + cuts[c + 1]), half = 0.5 * (cuts[c + 1] - cuts[c]);
    for (int k = 0; k < 5; ++k) {
      const double x = mid + half * kGlNodes[k];  // distance from the nearer endpoint
      logs.push_back(log_kernel(x, 1.0 - x));
      logs.push_back(log_kernel(1.0 - x, x));
      weights.push_back(half * kGlWeights[k]);
      weights.push_back(half * kGlWeights[k]);
    }
  }
  const double peak = *std::max_element(logs.begin(), logs.end());
  std::vector<double> terms(logs.size());
  for (std::size_t k = 0; k < logs.size(); ++k) terms[k] = weights[k] * std::exp(logs[k] - peak);
  return peak + std::log(pairwise_sum(terms));
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::vector<double> dense_stationary(const TransitionTable& table, const EnumerationBudget& budget) {
  require_m(table.m(), budget);
  const auto K = static_cast<Eigen::Index>(table.word_count());
  const std::vector<double> dense = table.dense_matrix();
  Eigen::MatrixXd Pt(K, K);
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = 0; j < K; ++j) Pt(j, i) = dense[static_cast<std::size_t>(i * K + j)];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(Pt);
  const auto& values = solver.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < K; ++i)
    if (std::abs(values(i) - 1.0) < std::abs(values(best) - 1.0)) best = i;
  const Eigen::VectorXcd v = solver.eigenvectors().col(best);
  std::vector<double> pi(K);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < K; ++i) sum += (pi[i] = v(i).real());
  for (double& x : pi) x /= sum;
  return pi;
}

std::vector<double> brute_force_distribution(const TransitionTable& table, int n, const EnumerationBudget& budget) {
  require_n(n, budget);
  const std::vector<double> start = dense_stationary(table, budget);
  const std::uint32_t K = table.word_count();
  const std::uint64_t sequences = std::uint64_t{1} << n;
  std::vector<double> dist(sequences, 0.0);
  std::vector<double> by_start(K);
  for (std::uint64_t x = 0; x < sequences; ++x) {
    for (std::uint32_t j = 0; j < K; ++j) {
      double prob = start[j];
      std::uint32_t word = j;
      for (int t = 0; t < n && prob != 0.0; ++t) {
        const auto b = static_cast<std::uint32_t>((x >> (n - 1 - t)) & 1u);
        const std::uint32_t next = ((word << 1) | b) & (K - 1);
        prob *= table.transition_probability(word, next);
        word = next;
      }
      by_start[j] = prob;
    }
    dist[x] = pairwise_sum(by_start);
  }
  return dist;
}

double brute_force_expected_count(const TransitionTable& table, int n, std::uint32_t k,
                                  const EnumerationBudget& budget) {
  const int m = table.m();
  if (k >= table.word_length().edge_count()) throw InvalidArgument("edge index out of range");
  if (n < m + 1) throw InvalidArgument("expected counts need n >= m + 1");
  const std::vector<double> dist = brute_force_distribution(table, n, budget);
  const std::uint64_t window_mask = (std::uint64_t{1} << (m + 1)) - 1;
  std::vector<double> terms(dist.size());
  for (std::uint64_t x = 0; x < dist.size(); ++x) {
    int hits = 0;
    for (int t = 0; t + m + 1 <= n; ++t)
      if (((x >> (n - m - 1 - t)) & window_mask) == k) ++hits;
    terms[x] = hits * dist[x];
  }
  return pairwise_sum(terms);
}

TransitionCounts exponent_form_counts(std::span<const Letter> letters, WordLength m) {
  TransitionCounts counts(m);
  const int len = m.value();
  const auto n = static_cast<int>(letters.size());
  for (std::uint32_t k = 0; k < m.edge_count(); ++k) {
    std::uint64_t exponent = 0;
    for (int i = 0; i + len < n; ++i) {
      std::uint64_t term = 1;
      for (int r = 0; r <= len; ++r) {
        const Letter pattern_bit = static_cast<Letter>((k >> (len - r)) & 1u);
        const Letter x = letters[i + r];
        term *= pattern_bit ? x : static_cast<Letter>(1 - x);
      }
      exponent += term;
    }
    if (k & 1u) counts.n1[k >> 1] = exponent;
    else counts.n0[k >> 1] = exponent;
  }
  return counts;
}

double grid_log_evidence(const TransitionCounts& counts, const BetaPrior& prior, int grid_points,
                         const EnumerationBudget& budget) {
  require_m(counts.m.value(), budget);
  if (grid_points < 200) throw InvalidArgument("grid evidence needs at least 200 panels");
  double total = 0.0;
  for (std::size_t i = 0; i < counts.n0.size(); ++i) {
    const double a = prior.alpha.at(i), b = prior.beta.at(i);
    total += log_beta_quadrature(a + static_cast<double>(counts.n1[i]), b + static_cast<double>(counts.n0[i]),
                                 grid_points) -
             log_beta_quadrature(a, b, grid_points);
  }
  return total;
}

MonteCarloFisher monte_carlo_fisher(const TransitionTable& table, int n, std::uint32_t k, std::size_t replicates,
                                    std::uint64_t seed) {
  if (replicates < 10'000) throw InvalidArgument("Monte-Carlo Fisher needs at least 10^4 replicates");
  if (k >= table.word_length().edge_count()) throw InvalidArgument("edge index out of range");
  const WordLength m = table.word_length();
  const std::uint32_t source = edge_source(k);
  const double p_edge = table.edge_probability(k);
  const double p_one = table.p(source);
  const bool interior = p_one > 0.0 && p_one < 1.0;
  const StationaryDistribution stationary = stationary_distribution(table);

  std::vector<double> info(replicates), score_sq(replicates);
  parallel_for(replicates, [&](std::size_t r) {
    SimulationConfig cfg;
    cfg.n = static_cast<std::size_t>(n);
    cfg.seed = seed;
    cfg.stream = r;
    const TransitionCounts c = count_transitions(simulate(table, cfg, stationary), m);
    const auto nk = static_cast<double>(c.edge(k));
    info[r] = p_edge > 0.0 ? nk / (p_edge * p_edge) : 0.0;
    if (interior) {
      const double score = static_cast<double>(c.n1[source]) / p_one -
                           static_cast<double>(c.n0[source]) / (1.0 - p_one);
      score_sq[r] = score * score;
    } else {
      score_sq[r] = 0.0;
    }
  });

  const auto R = static_cast<double>(replicates);
  auto mean_and_se = [R](std::vector<double>& v) {
    const double mean = pairwise_sum(v) / R;
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = (v[i] - mean) * (v[i] - mean);
    const double var = pairwise_sum(dev) / (R - 1.0);
    return std::pair{mean, std::sqrt(var / R)};
  };
  MonteCarloFisher out;
  out.replicates = replicates;
  std::tie(out.observed_information, out.observed_information_se) = mean_and_se(info);
  // E[score] = 0 exactly, so the mean square is the variance.
  std::tie(out.free_score_variance, out.free_score_variance_se) = mean_and_se(score_sq);
  return out;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

VerificationReport run_verification(const TransitionTable& table, int n, std::uint64_t seed,
                                    const EnumerationBudget& budget) {
  require_n(n, budget);
  require_m(table.m(), budget);
  VerificationReport report;
  report.m = table.m();
  report.n = n;
  report.table = table.append_one();
  auto add = [&](std::string name, double error, double tol) {
    report.checks.push_back(Check{std::move(name), error, tol, error <= tol});
  };

  const StationaryDistribution stationary = stationary_distribution(table);
  const std::vector<double> eig = dense_stationary(table, budget);
  double err = 0.0;
  for (std::size_t i = 0; i < eig.size(); ++i) err = std::max(err, std::abs(eig[i] - stationary.pi[i]));
  add("stationary vs dense eigenvector", err, 1e-12);

  const std::vector<double> brute = brute_force_distribution(table, n, budget);
  add("brute-force total probability", std::abs(pairwise_sum(brute) - 1.0), 1e-12);

  double forward_err = 0.0, indexed_err = 0.0, forward_sum = 0.0;
  std::vector<Letter> letters(n);
  for (std::uint64_t x = 0; x < brute.size(); ++x) {
    for (int t = 0; t < n; ++t) letters[t] = static_cast<Letter>((x >> (n - 1 - t)) & 1u);
    const double fwd = sequence_probability(table, stationary, letters);
    forward_sum += fwd;
    forward_err = std::max(forward_err, std::abs(fwd - brute[x]));
    indexed_err = std::max(indexed_err, std::abs(sequence_probability_indexed(table, stationary, n, x) - brute[x]));
  }
  add("forward pass normalization", std::abs(forward_sum - 1.0), 1e-12);
  add("forward pass vs brute force", forward_err, 1e-12);
  add("indexed form vs brute force", indexed_err, 1e-12);

  if (n >= table.m() + 1) {
    double dp_err = 0.0, idx_err = 0.0;
    for (std::uint32_t k = 0; k < table.word_length().edge_count(); ++k) {
      const double truth = brute_force_expected_count(table, n, k, budget);
      dp_err = std::max(dp_err, std::abs(expected_transition_count(table, n, k) - truth));
      idx_err = std::max(idx_err, std::abs(expected_transition_count_indexed(table, n, k) - truth));
    }
    add("expected counts (propagation) vs brute force", dp_err, 1e-10);
    add("expected counts (indexed sum) vs brute force", idx_err, 1e-10);
  }

  SimulationConfig cfg;
  cfg.n = static_cast<std::size_t>(std::max(n, 20));
  cfg.seed = seed;
  const TransitionCounts counts = count_transitions(simulate(table, cfg, stationary), table.word_length());
  const BetaPrior prior = BetaPrior::uniform(table.word_length());
  const double closed = log_evidence(counts, prior);
  add("evidence closed form vs quadrature (relative)",
      std::abs(std::expm1(closed - grid_log_evidence(counts, prior, 400, budget))), 1e-6);
  return report;
}

TransitionTable random_table(WordLength m, std::uint64_t seed, std::uint64_t stream, double lo, double hi) {
  Rng rng(seed, stream);
  std::vector<double> p(m.word_count());
  for (double& x : p) x = lo + (hi - lo) * rng.uniform();
  return TransitionTable(m, std::move(p));
}

}  // namespace dbp::oracle
