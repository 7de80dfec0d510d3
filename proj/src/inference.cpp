#include "dbp/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/distributions/beta.hpp>

#include "dbp/distribution.hpp"
#include "dbp/error.hpp"
#include "dbp/process.hpp"

namespace dbp {
namespace {

void require_same_m(WordLength a, WordLength b) {
  if (!(a == b))
    throw InvalidArgument("word length mismatch: " + std::to_string(a.value()) + " vs " + std::to_string(b.value()));
}

void require_edge(const TransitionTable& table, std::uint32_t k) {
  if (k >= table.word_length().edge_count())
    throw InvalidArgument("edge index " + std::to_string(k) + " out of range for m=" + std::to_string(table.m()));
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

std::uint64_t TransitionCounts::total() const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < n0.size(); ++i) s += n0[i] + n1[i];
  return s;
}

TransitionCounts count_transitions(const BinarySequence& seq, WordLength m) {
  TransitionCounts counts(m);
  const int len = m.value();
  const std::uint32_t mask = m.mask();
  for (const auto& segment : seq.segments()) {
    if (segment.size() <= static_cast<std::size_t>(len)) continue;
    std::uint32_t word = 0;
    for (int t = 0; t < len; ++t) word = (word << 1) | segment[t];
    for (std::size_t t = len; t < segment.size(); ++t) {
      if (segment[t]) ++counts.n1[word];
      else ++counts.n0[word];
      word = ((word << 1) | segment[t]) & mask;
    }
  }
  return counts;
}

double log_likelihood(const TransitionTable& table, const TransitionCounts& counts) {
  require_same_m(table.word_length(), counts.m);
  double ll = 0.0;
  for (std::uint32_t i = 0; i < table.word_count(); ++i) {
    const double p = table.p(i);
    if (counts.n1[i] > 0) {
      if (p == 0.0) return -std::numeric_limits<double>::infinity();
      ll += static_cast<double>(counts.n1[i]) * std::log(p);
    }
    if (counts.n0[i] > 0) {
      if (p == 1.0) return -std::numeric_limits<double>::infinity();
      ll += static_cast<double>(counts.n0[i]) * std::log1p(-p);
    }
  }
  return ll;
}

std::vector<EdgeEstimate> mle(const TransitionCounts& counts) {
  std::vector<EdgeEstimate> out(counts.n0.size());
  for (std::uint32_t i = 0; i < out.size(); ++i) {
    const std::uint64_t v = counts.visits(i);
    out[i].visits = v;
    if (v == 0) continue;
    const double p = static_cast<double>(counts.n1[i]) / static_cast<double>(v);
    out[i].estimate = p;
    out[i].std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(v));
  }
  return out;
}

double expected_transition_count(const TransitionTable& table, int n, std::uint32_t k) {
  require_edge(table, k);
  const int m = table.m();
  if (n < m + 1) throw InvalidArgument("expected counts need n >= m + 1");
  const std::uint32_t mask = table.word_length().mask();
  const std::uint32_t source = edge_source(k);
  const double edge_p = table.edge_probability(k);

  // dist = distribution of the current word after s emitted letters.
  std::vector<double> dist = stationary_distribution(table).pi, next(dist.size());
  double expected = 0.0;
  for (int s = 0; s < n; ++s) {
    if (s >= m) expected += dist[source] * edge_p;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint32_t w = 0; w < dist.size(); ++w) {
      const std::uint32_t base = (w << 1) & mask;
      next[base] += dist[w] * (1.0 - table.p(w));
      next[base | 1u] += dist[w] * table.p(w);
    }
    dist.swap(next);
  }
  return expected;
}

double expected_transition_count_indexed(const TransitionTable& table, int n, std::uint32_t k) {
  require_edge(table, k);
  const int m = table.m();
  if (n < m + 1) throw InvalidArgument("expected counts need n >= m + 1");
  if (n > 20) throw InvalidArgument("indexed expected counts are limited to n <= 20");
  const StationaryDistribution stationary = stationary_distribution(table);
  const std::uint64_t block = std::uint64_t{1} << (m + 1);
  double total = 0.0;
  for (int i = 0; i <= n - m - 1; ++i) {
    const std::uint64_t low = std::uint64_t{1} << i;
    for (std::uint64_t j = 0; j < (std::uint64_t{1} << (n - m - 1)); ++j) {
      const std::uint64_t index = block * j + low * k - (block - 1) * (j % low);
      total += sequence_probability_indexed(table, stationary, n, index);
    }
  }
  return total;
}

double fisher_information(const TransitionTable& table, int n, std::uint32_t k) {
  require_edge(table, k);
  const double p = table.edge_probability(k);
  if (p == 0.0) throw InvalidArgument("Fisher information undefined for a zero-probability edge");
  return expected_transition_count(table, n, k) / (p * p);
}

double fisher_information_free(const TransitionTable& table, int n, std::uint32_t i) {
  if (i >= table.word_count()) throw InvalidArgument("word index out of range");
  const double p = table.p(i);
  const double e1 = expected_transition_count(table, n, 2 * i + 1);
  const double e0 = expected_transition_count(table, n, 2 * i);
  double info = 0.0;
  if (e1 > 0.0) info += e1 / (p * p);
  if (e0 > 0.0) info += e0 / ((1.0 - p) * (1.0 - p));
  return info;
}

BetaPrior BetaPrior::uniform(WordLength m) {
  return BetaPrior{std::vector<double>(m.word_count(), 1.0), std::vector<double>(m.word_count(), 1.0)};
}

BetaPrior BetaPrior::make(WordLength m, std::vector<double> alpha, std::vector<double> beta) {
  const std::size_t K = m.word_count();
  auto broadcast = [K](std::vector<double>& v, const char* name) {
    if (v.size() == 1) v.assign(K, v[0]);
    if (v.size() != K)
      throw InvalidArgument(std::string("prior ") + name + " needs 1 or " + std::to_string(K) + " values, got " +
                            std::to_string(v.size()));
    for (double x : v)
      if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument(std::string("prior ") + name + " must be positive");
  };
  broadcast(alpha, "alpha");
  broadcast(beta, "beta");
  return BetaPrior{std::move(alpha), std::move(beta)};
}

double PosteriorSpec::mean(std::uint32_t i) const { return alpha.at(i) / (alpha.at(i) + beta.at(i)); }

std::optional<double> PosteriorSpec::mode(std::uint32_t i) const {
  const double a = alpha.at(i), b = beta.at(i);
  if (a >= 1.0 && b >= 1.0 && a + b > 2.0) return (a - 1.0) / (a + b - 2.0);
  return std::nullopt;
}

double PosteriorSpec::quantile(std::uint32_t i, double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("quantile level must lie in [0, 1]");
  return boost::math::quantile(boost::math::beta_distribution<double>(alpha.at(i), beta.at(i)), q);
}

std::pair<double, double> PosteriorSpec::credible_interval(std::uint32_t i, double level) const {
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("credible level must lie in (0, 1)");
  const double tail = 0.5 * (1.0 - level);
  return {quantile(i, tail), quantile(i, 1.0 - tail)};
}

TransitionTable PosteriorSpec::mean_table() const {
  std::vector<double> p(alpha.size());
  for (std::uint32_t i = 0; i < p.size(); ++i) p[i] = mean(i);
  return TransitionTable(m, std::move(p));
}

PosteriorSpec posterior(const TransitionCounts& counts, const BetaPrior& prior) {
  const std::size_t K = counts.m.word_count();
  if (prior.alpha.size() != K || prior.beta.size() != K) throw InvalidArgument("prior size does not match m");
  PosteriorSpec post{counts.m, prior.alpha, prior.beta, std::vector<bool>(K, false)};
  for (std::size_t i = 0; i < K; ++i) {
    post.alpha[i] += static_cast<double>(counts.n1[i]);
    post.beta[i] += static_cast<double>(counts.n0[i]);
    post.no_data[i] = counts.n0[i] + counts.n1[i] == 0;
  }
  return post;
}

double log_evidence(const TransitionCounts& counts, const BetaPrior& prior) {
  const std::size_t K = counts.m.word_count();
  if (prior.alpha.size() != K || prior.beta.size() != K) throw InvalidArgument("prior size does not match m");
  double total = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    if (counts.n0[i] + counts.n1[i] == 0) continue;  // factor is exactly 1
    const double a = prior.alpha[i], b = prior.beta[i];
    total += log_beta(static_cast<double>(counts.n1[i]) + a, static_cast<double>(counts.n0[i]) + b) - log_beta(a, b);
  }
  return total;
}

PriorRule uniform_prior_rule() {
  return [](WordLength m) { return BetaPrior::uniform(m); };
}

double log_model_evidence(const BinarySequence& seq, WordLength m, const BetaPrior& prior, EvidenceBasis basis) {
  double ev = log_evidence(count_transitions(seq, m), prior);
  if (basis == EvidenceBasis::full_data) {
    std::size_t conditioned = 0;
    for (const auto& segment : seq.segments()) conditioned += std::min<std::size_t>(segment.size(), m.value());
    ev -= static_cast<double>(conditioned) * std::numbers::ln2;
  }
  return ev;
}

double log_bayes_factor(const BinarySequence& seq, WordLength m1, WordLength m2, const PriorRule& prior_rule,
                        EvidenceBasis basis) {
  if (m1 == m2) return 0.0;
  return log_model_evidence(seq, m1, prior_rule(m1), basis) - log_model_evidence(seq, m2, prior_rule(m2), basis);
}

EvidenceReport select_word_length(const BinarySequence& seq, int m_max, const PriorRule& prior_rule,
                                  EvidenceBasis basis) {
  const WordLength cap(m_max);  // validates m_max
  EvidenceReport report;
  report.basis = basis;
  bool any_transition = false;
  for (int m = 1; m <= cap.value(); ++m) {
    const WordLength wl(m);
    any_transition = any_transition || count_transitions(seq, wl).total() > 0;
    report.candidates.push_back(m);
    report.log_evidence.push_back(log_model_evidence(seq, wl, prior_rule(wl), basis));
  }
  if (!any_transition) throw DataError("sequence has no transitions at any candidate word length");

  const std::size_t C = report.candidates.size();
  report.log_bayes_factor.assign(C, std::vector<double>(C, 0.0));
  for (std::size_t a = 0; a < C; ++a)
    for (std::size_t b = 0; b < C; ++b)
      report.log_bayes_factor[a][b] = a == b ? 0.0 : report.log_evidence[a] - report.log_evidence[b];

  const double best = *std::max_element(report.log_evidence.begin(), report.log_evidence.end());
  for (std::size_t a = 0; a < C; ++a) {
    if (report.log_evidence[a] >= best - kSelectionTieTolerance) {
      report.selected = report.candidates[a];
      break;
    }
  }
  return report;
}

}  // namespace dbp
