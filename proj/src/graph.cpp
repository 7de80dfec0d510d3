#include "dbp/graph.hpp"

#include <string>

#include "dbp/error.hpp"

namespace dbp {

WordLength::WordLength(int m, int cap) : m_(m) {
  if (cap < 1 || cap > 30) throw InvalidArgument("word length cap must lie in [1, 30]");
  if (m < 1 || m > cap)
    throw InvalidArgument("word length " + std::to_string(m) + " outside [1, " + std::to_string(cap) + "]");
}

Word make_word(std::uint32_t index, WordLength m) {
  if (index >= m.word_count())
    throw InvalidArgument("word index " + std::to_string(index) + " out of range for m=" + std::to_string(m.value()));
  return Word{index, m};
}

Word encode_word(std::span<const Letter> letters, WordLength m) {
  if (letters.size() != static_cast<std::size_t>(m.value()))
    throw InvalidArgument("expected " + std::to_string(m.value()) + " letters, got " + std::to_string(letters.size()));
  std::uint32_t index = 0;
  for (Letter b : letters) {
    if (b > 1) throw InvalidArgument("letter must be 0 or 1");
    index = (index << 1) | b;
  }
  return Word{index, m};
}

std::vector<Letter> decode_word(const Word& w) {
  const int m = w.m.value();
  std::vector<Letter> letters(m);
  for (int t = 0; t < m; ++t) letters[t] = static_cast<Letter>((w.index >> (m - 1 - t)) & 1u);
  return letters;
}

std::pair<Word, Word> successors(const Word& w) {
  const std::uint32_t shifted = (w.index << 1) & w.m.mask();
  return {Word{shifted, w.m}, Word{shifted | 1u, w.m}};
}

TransitionTable::TransitionTable(WordLength m, std::vector<double> append_one) : m_(m), p_(std::move(append_one)) {
  if (p_.size() != m_.word_count())
    throw InvalidArgument("transition table for m=" + std::to_string(m_.value()) + " needs " +
                          std::to_string(m_.word_count()) + " probabilities, got " + std::to_string(p_.size()));
  for (std::size_t i = 0; i < p_.size(); ++i) {
    // NaN fails both comparisons.
    if (!(p_[i] >= 0.0 && p_[i] <= 1.0))
      throw InvalidArgument("transition probability p[" + std::to_string(i) + "] = " + std::to_string(p_[i]) +
                            " outside [0, 1]");
  }
}

double TransitionTable::transition_probability(std::uint32_t source, std::uint32_t target) const {
  if (source >= word_count() || target >= word_count()) throw InvalidArgument("word index out of range");
  const std::uint32_t base = (source << 1) & m_.mask();
  if (target == base) return 1.0 - p_[source];
  if (target == (base | 1u)) return p_[source];
  return 0.0;
}

std::vector<double> TransitionTable::dense_matrix() const {
  const std::uint32_t K = word_count();
  std::vector<double> P(static_cast<std::size_t>(K) * K, 0.0);
  for (std::uint32_t i = 0; i < K; ++i) {
    const std::uint32_t base = (i << 1) & m_.mask();
    P[static_cast<std::size_t>(i) * K + base] = 1.0 - p_[i];
    P[static_cast<std::size_t>(i) * K + (base | 1u)] = p_[i];
  }
  return P;
}

TransitionTable make_transition_table(WordLength m, std::vector<double> append_one) {
  return TransitionTable(m, std::move(append_one));
}

}  // namespace dbp
