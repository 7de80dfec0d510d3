#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dbp/graph.hpp"

namespace dbp {

/// One position of an observed series: a letter or a missing observation.
enum class Obs : std::uint8_t { zero = 0, one = 1, missing = 2 };

inline Obs to_obs(Letter b) { return b ? Obs::one : Obs::zero; }

/// Ordered binary observations with missing positions. Segments are the
/// maximal runs without missing positions; transitions never cross a gap.
class BinarySequence {
 public:
  BinarySequence() = default;
  explicit BinarySequence(std::vector<Obs> positions) : positions_(std::move(positions)) {}

  static BinarySequence from_letters(std::span<const Letter> letters);
  /// Segments joined by a single missing position each.
  static BinarySequence from_segments(const std::vector<std::vector<Letter>>& segments);

  const std::vector<Obs>& positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }
  std::size_t observed_count() const;
  std::size_t count(Letter b) const;
  bool has_missing() const;

  std::vector<std::vector<Letter>> segments() const;
  /// Letters of a gap-free sequence; throws InvalidArgument if anything is missing.
  std::vector<Letter> letters() const;

  void push_back(Obs o) { positions_.push_back(o); }

  friend bool operator==(const BinarySequence&, const BinarySequence&) = default;

 private:
  std::vector<Obs> positions_;
};

}  // namespace dbp
