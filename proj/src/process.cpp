#include "dbp/process.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "dbp/error.hpp"
#include "dbp/rng.hpp"

namespace dbp {
namespace {

constexpr double kPowerTolerance = 1e-13;
constexpr long kPowerMaxIterations = 1'000'000;
constexpr double kSolveResidual = 1e-10;

double max_residual(const TransitionTable& table, const std::vector<double>& pi) {
  const std::uint32_t K = table.word_count();
  const std::uint32_t mask = table.word_length().mask();
  std::vector<double> next(K, 0.0);
  for (std::uint32_t i = 0; i < K; ++i) {
    const std::uint32_t base = (i << 1) & mask;
    next[base] += pi[i] * (1.0 - table.p(i));
    next[base | 1u] += pi[i] * table.p(i);
  }
  double r = 0.0;
  for (std::uint32_t i = 0; i < K; ++i) r = std::max(r, std::abs(next[i] - pi[i]));
  return r;
}

bool normalize_nonnegative(std::vector<double>& pi) {
  double sum = 0.0;
  for (double& v : pi) {
    if (!std::isfinite(v) || v < -1e-12) return false;
    v = std::max(v, 0.0);
    sum += v;
  }
  if (!(sum > 0.0)) return false;
  for (double& v : pi) v /= sum;
  return true;
}

std::vector<double> solve_direct(const TransitionTable& table) {
  const auto K = static_cast<Eigen::Index>(table.word_count());
  const std::uint32_t mask = table.word_length().mask();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K + 1, K);
  for (Eigen::Index i = 0; i < K; ++i) {
    const auto base = static_cast<Eigen::Index>((static_cast<std::uint32_t>(i) << 1) & mask);
    // Row j of (P^T - I) collects inflow into word j.
    A(base, i) += 1.0 - table.p(static_cast<std::uint32_t>(i));
    A(base + 1, i) += table.p(static_cast<std::uint32_t>(i));
    A(i, i) -= 1.0;
  }
  A.row(K).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(K + 1);
  b(K) = 1.0;
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
  return std::vector<double>(x.data(), x.data() + K);
}

std::vector<double> solve_power(const TransitionTable& table) {
  // Lazy chain (P + I) / 2 has the same stationary vector and is aperiodic.
  const std::uint32_t K = table.word_count();
  const std::uint32_t mask = table.word_length().mask();
  std::vector<double> pi(K, 1.0 / K), next(K);
  for (long it = 0; it < kPowerMaxIterations; ++it) {
    for (std::uint32_t i = 0; i < K; ++i) next[i] = 0.5 * pi[i];
    for (std::uint32_t i = 0; i < K; ++i) {
      const std::uint32_t base = (i << 1) & mask;
      next[base] += 0.5 * pi[i] * (1.0 - table.p(i));
      next[base | 1u] += 0.5 * pi[i] * table.p(i);
    }
    double diff = 0.0;
    for (std::uint32_t i = 0; i < K; ++i) diff = std::max(diff, std::abs(next[i] - pi[i]));
    pi.swap(next);
    if (diff < kPowerTolerance) break;
  }
  return pi;
}

}  // namespace

double StationaryDistribution::letter_marginal(Letter b) const {
  double s = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i)
    if ((i & 1u) == b) s += pi[i];
  return s;
}

std::vector<std::vector<std::uint32_t>> closed_classes(const TransitionTable& table) {
  const std::uint32_t K = table.word_count();
  const std::uint32_t mask = table.word_length().mask();
  auto out_edges = [&](std::uint32_t i) {
    std::vector<std::uint32_t> e;
    const std::uint32_t base = (i << 1) & mask;
    if (table.p(i) < 1.0) e.push_back(base);
    if (table.p(i) > 0.0) e.push_back(base | 1u);
    return e;
  };

  // Tarjan's SCC, iterative.
  std::vector<int> index(K, -1), low(K, 0), comp(K, -1);
  std::vector<bool> on_stack(K, false);
  std::vector<std::uint32_t> stack;
  int counter = 0, n_comp = 0;
  for (std::uint32_t root = 0; root < K; ++root) {
    if (index[root] != -1) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      const auto edges = out_edges(v);
      if (pos < edges.size()) {
        const std::uint32_t w = edges[pos++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = n_comp;
        } while (w != v);
        ++n_comp;
      }
      const std::uint32_t finished = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
    }
  }

  std::vector<bool> closed(n_comp, true);
  for (std::uint32_t i = 0; i < K; ++i)
    for (std::uint32_t j : out_edges(i))
      if (comp[j] != comp[i]) closed[comp[i]] = false;

  std::vector<std::vector<std::uint32_t>> classes(n_comp);
  for (std::uint32_t i = 0; i < K; ++i) classes[comp[i]].push_back(i);
  std::vector<std::vector<std::uint32_t>> result;
  for (int c = 0; c < n_comp; ++c)
    if (closed[c]) result.push_back(classes[c]);
  std::sort(result.begin(), result.end());
  return result;
}

StationaryDistribution stationary_distribution(const TransitionTable& table) {
  auto classes = closed_classes(table);
  if (classes.size() > 1) {
    std::string msg = "stationary distribution is not unique: " + std::to_string(classes.size()) + " closed classes {";
    for (std::size_t c = 0; c < classes.size(); ++c) {
      msg += c ? "}, {" : "";
      for (std::size_t j = 0; j < classes[c].size(); ++j) msg += (j ? "," : "") + std::to_string(classes[c][j]);
    }
    throw NonUniqueStationary(msg + "}", std::move(classes));
  }

  std::vector<double> pi = solve_direct(table);
  if (!normalize_nonnegative(pi) || max_residual(table, pi) > kSolveResidual) {
    pi = solve_power(table);
    normalize_nonnegative(pi);
  }
  return StationaryDistribution{table.word_length(), std::move(pi)};
}

BinarySequence simulate(const TransitionTable& table, const SimulationConfig& cfg) {
  if (cfg.init == InitMode::stationary) return simulate(table, cfg, stationary_distribution(table));
  return simulate(table, cfg, StationaryDistribution{table.word_length(), {}});
}

BinarySequence simulate(const TransitionTable& table, const SimulationConfig& cfg,
                        const StationaryDistribution& stationary) {
  if (cfg.n < 1) throw InvalidArgument("simulation length n must be at least 1");
  const WordLength m = table.word_length();
  const std::uint32_t mask = m.mask();
  Rng rng(cfg.seed, cfg.stream);

  std::vector<Obs> out;
  out.reserve(cfg.n);
  std::uint32_t word = 0;
  switch (cfg.init) {
    case InitMode::stationary: {
      if (stationary.pi.size() != m.word_count())
        throw InvalidArgument("stationary distribution does not match the table");
      const double u = rng.uniform();
      double acc = 0.0;
      // If rounding leaves u above the running total, fall back to the last
      // word that actually carries mass.
      word = m.word_count() - 1;
      while (word > 0 && stationary.pi[word] <= 0.0) --word;
      for (std::uint32_t i = 0; i < m.word_count(); ++i) {
        acc += stationary.pi[i];
        if (u < acc) {
          word = i;
          break;
        }
      }
      break;
    }
    case InitMode::fixed_word:
      if (!cfg.fixed_word) throw InvalidArgument("fixed_word init requires an initial word");
      if (!(cfg.fixed_word->m == m)) throw InvalidArgument("initial word length does not match the table");
      word = cfg.fixed_word->index;
      break;
    case InitMode::uniform_word:
      word = static_cast<std::uint32_t>(rng.uniform() * m.word_count());
      break;
  }

  if (cfg.init != InitMode::stationary) {
    for (Letter b : decode_word(Word{word, m})) {
      if (out.size() == cfg.n) break;
      out.push_back(to_obs(b));
    }
  }
  while (out.size() < cfg.n) {
    const Letter b = rng.uniform() < table.p(word) ? 1 : 0;
    out.push_back(to_obs(b));
    word = ((word << 1) | b) & mask;
  }
  return BinarySequence(std::move(out));
}

}  // namespace dbp
