#pragma once

// Binary de Bruijn words, the successor structure, and transition tables.
//
// A word of length m is stored as an integer in [0, 2^m) with the oldest
// letter in the most significant bit, so "10" == 2 and appending letter b to
// word i gives (2i + b) mod 2^m.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace dbp {

using Letter = std::uint8_t;

inline constexpr int kDefaultMaxWordLength = 10;

class WordLength {
 public:
  /// Throws InvalidArgument unless 1 <= m <= cap.
  explicit WordLength(int m, int cap = kDefaultMaxWordLength);

  int value() const noexcept { return m_; }
  std::uint32_t word_count() const noexcept { return std::uint32_t{1} << m_; }
  std::uint32_t edge_count() const noexcept { return std::uint32_t{2} << m_; }
  std::uint32_t mask() const noexcept { return word_count() - 1; }

  friend bool operator==(WordLength a, WordLength b) noexcept { return a.m_ == b.m_; }

 private:
  int m_;
};

struct Word {
  std::uint32_t index;
  WordLength m;

  friend bool operator==(const Word& a, const Word& b) noexcept { return a.index == b.index && a.m == b.m; }
};

/// Checked constructor for a word index.
Word make_word(std::uint32_t index, WordLength m);

Word encode_word(std::span<const Letter> letters, WordLength m);
std::vector<Letter> decode_word(const Word& w);

/// Append-0 and append-1 successors of w.
std::pair<Word, Word> successors(const Word& w);

// Edges are numbered k = 2*source + appended_letter, k in [0, 2^(m+1)).
inline std::uint32_t edge_source(std::uint32_t k) noexcept { return k >> 1; }
inline Letter edge_letter(std::uint32_t k) noexcept { return static_cast<Letter>(k & 1u); }
inline std::uint32_t edge_target(std::uint32_t k, WordLength m) noexcept { return k & m.mask(); }

class TransitionTable {
 public:
  TransitionTable(WordLength m, std::vector<double> append_one);

  WordLength word_length() const noexcept { return m_; }
  int m() const noexcept { return m_.value(); }
  std::uint32_t word_count() const noexcept { return m_.word_count(); }

  /// Probability of appending letter 1 after word i.
  double p(std::uint32_t i) const { return p_.at(i); }
  double letter_probability(std::uint32_t word, Letter letter) const {
    return letter ? p_[word] : 1.0 - p_[word];
  }
  const std::vector<double>& append_one() const noexcept { return p_; }

  /// p[i], 1 - p[i], or 0 when target is not a successor of source.
  double transition_probability(std::uint32_t source, std::uint32_t target) const;
  double edge_probability(std::uint32_t k) const { return letter_probability(edge_source(k), edge_letter(k)); }

  /// Dense row-stochastic matrix, row-major, for small m only.
  std::vector<double> dense_matrix() const;

 private:
  WordLength m_;
  std::vector<double> p_;
};

TransitionTable make_transition_table(WordLength m, std::vector<double> append_one);

}  // namespace dbp
