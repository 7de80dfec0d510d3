#include "dbp/distribution.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "dbp/error.hpp"

namespace dbp {
namespace {

void check_letters(std::span<const Letter> letters) {
  if (letters.empty()) throw InvalidArgument("sequence must contain at least one letter");
  for (Letter b : letters)
    if (b > 1) throw InvalidArgument("letter must be 0 or 1");
}

void check_stationary(const TransitionTable& table, const StationaryDistribution& stationary) {
  if (!(stationary.m == table.word_length()) || stationary.pi.size() != table.word_count())
    throw InvalidArgument("stationary distribution does not match the table");
}

// One forward step: emit letter b (or either letter when b is missing).
void forward_step(const TransitionTable& table, std::vector<double>& alpha, std::vector<double>& next, Obs b) {
  const std::uint32_t mask = table.word_length().mask();
  std::fill(next.begin(), next.end(), 0.0);
  for (std::uint32_t w = 0; w < alpha.size(); ++w) {
    if (alpha[w] == 0.0) continue;
    const std::uint32_t base = (w << 1) & mask;
    if (b != Obs::one) next[base] += alpha[w] * (1.0 - table.p(w));
    if (b != Obs::zero) next[base | 1u] += alpha[w] * table.p(w);
  }
  alpha.swap(next);
}

}  // namespace

double sequence_probability(const TransitionTable& table, std::span<const Letter> letters) {
  return sequence_probability(table, stationary_distribution(table), letters);
}

double sequence_probability(const TransitionTable& table, const StationaryDistribution& stationary,
                            std::span<const Letter> letters) {
  check_letters(letters);
  check_stationary(table, stationary);
  std::vector<double> alpha = stationary.pi, next(alpha.size());
  for (Letter b : letters) forward_step(table, alpha, next, to_obs(b));
  return std::accumulate(alpha.begin(), alpha.end(), 0.0);
}

double log_sequence_probability(const TransitionTable& table, const StationaryDistribution& stationary,
                                std::span<const Letter> letters) {
  check_letters(letters);
  check_stationary(table, stationary);
  std::vector<double> alpha = stationary.pi, next(alpha.size());
  double log_scale = 0.0;
  for (Letter b : letters) {
    forward_step(table, alpha, next, to_obs(b));
    const double s = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    if (s == 0.0) return -std::numeric_limits<double>::infinity();
    for (double& a : alpha) a /= s;
    log_scale += std::log(s);
  }
  return log_scale;
}

double sequence_probability_indexed(const TransitionTable& table, int n, std::uint64_t i) {
  return sequence_probability_indexed(table, stationary_distribution(table), n, i);
}

double sequence_probability_indexed(const TransitionTable& table, const StationaryDistribution& stationary,
                                    int n, std::uint64_t i) {
  check_stationary(table, stationary);
  if (n < 1 || n > 24) throw InvalidArgument("indexed form requires 1 <= n <= 24");
  if (i >= (std::uint64_t{1} << n)) throw InvalidArgument("sequence index out of range for n=" + std::to_string(n));

  const int m = table.m();
  const std::uint64_t K = table.word_count();
  const auto pow2 = [](int e) { return std::uint64_t{1} << e; };
  // floor(i / 2^e) mod 2^m, i.e. the m letters ending at x_{n-e}.
  const auto window = [&](int e) { return (i / pow2(e)) % K; };

  double total = 0.0;
  for (std::uint64_t j = 0; j < K; ++j) {
    double prod = stationary.pi[j];
    // Transitions still overlapping the latent initial word j.
    for (int k = 0; k < std::min(m, n) && prod != 0.0; ++k) {
      const std::uint64_t source = pow2(k) * (j % pow2(m - k)) + window(n - k) % K;
      const std::uint64_t target = pow2(k + 1) * (j % pow2(m - k - 1)) + window(n - k - 1);
      prod *= table.transition_probability(static_cast<std::uint32_t>(source % K),
                                           static_cast<std::uint32_t>(target % K));
    }
    // Transitions entirely inside the observed letters.
    for (int s = m; s < n && prod != 0.0; ++s)
      prod *= table.transition_probability(static_cast<std::uint32_t>(window(n - s)),
                                           static_cast<std::uint32_t>(window(n - s - 1)));
    total += prod;
  }
  return total;
}

double predict_next(const TransitionTable& table, const BinarySequence& history, PredictionMode mode) {
  return predict_next(table, stationary_distribution(table), history, mode);
}

double predict_next(const TransitionTable& table, const StationaryDistribution& stationary,
                    const BinarySequence& history, PredictionMode mode) {
  check_stationary(table, stationary);
  const int m = table.m();
  const auto& pos = history.positions();

  if (mode == PredictionMode::conditional) {
    if (pos.size() < static_cast<std::size_t>(m))
      throw InvalidArgument("conditional prediction needs at least m=" + std::to_string(m) + " history positions");
    bool tail_observed = true;
    std::uint32_t word = 0;
    for (std::size_t t = pos.size() - m; t < pos.size(); ++t) {
      if (pos[t] == Obs::missing) tail_observed = false;
      word = (word << 1) | (pos[t] == Obs::one ? 1u : 0u);
    }
    if (tail_observed) return table.p(word);

    std::vector<double> alpha = stationary.pi, next(alpha.size());
    for (Obs o : pos) {
      forward_step(table, alpha, next, o);
      const double s = std::accumulate(alpha.begin(), alpha.end(), 0.0);
      if (s == 0.0) throw DataError("history has probability zero under the table");
      for (double& a : alpha) a /= s;
    }
    double num = 0.0;
    for (std::uint32_t w = 0; w < alpha.size(); ++w) num += alpha[w] * table.p(w);
    return num;
  }

  if (pos.empty()) throw InvalidArgument("paper-marginal prediction needs a non-empty history");
  // Conditioning word positions, oldest first; before-start counts as missing.
  std::vector<Obs> word_pos(m, Obs::missing);
  for (int t = 0; t < m; ++t) {
    const auto back = static_cast<std::size_t>(m - t);
    if (back <= pos.size()) word_pos[t] = pos[pos.size() - back];
  }
  std::vector<int> free_slots;
  std::uint32_t fixed = 0;
  for (int t = 0; t < m; ++t) {
    if (word_pos[t] == Obs::missing) free_slots.push_back(m - 1 - t);
    else if (word_pos[t] == Obs::one) fixed |= 1u << (m - 1 - t);
  }
  const double pi1 = stationary.letter_marginal(1);
  double result = 0.0;
  for (std::uint32_t fill = 0; fill < (1u << free_slots.size()); ++fill) {
    std::uint32_t word = fixed;
    double weight = 1.0;
    for (std::size_t s = 0; s < free_slots.size(); ++s) {
      const bool one = (fill >> s) & 1u;
      if (one) word |= 1u << free_slots[s];
      weight *= one ? pi1 : 1.0 - pi1;
    }
    result += weight * table.p(word);
  }
  return result;
}

}  // namespace dbp
