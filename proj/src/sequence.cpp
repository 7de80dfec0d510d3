#include "dbp/sequence.hpp"

#include <algorithm>

#include "dbp/error.hpp"

namespace dbp {

BinarySequence BinarySequence::from_letters(std::span<const Letter> letters) {
  std::vector<Obs> out;
  out.reserve(letters.size());
  for (Letter b : letters) {
    if (b > 1) throw InvalidArgument("letter must be 0 or 1");
    out.push_back(to_obs(b));
  }
  return BinarySequence(std::move(out));
}

BinarySequence BinarySequence::from_segments(const std::vector<std::vector<Letter>>& segments) {
  BinarySequence seq;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (s > 0) seq.push_back(Obs::missing);
    for (Letter b : segments[s]) {
      if (b > 1) throw InvalidArgument("letter must be 0 or 1");
      seq.push_back(to_obs(b));
    }
  }
  return seq;
}

std::size_t BinarySequence::observed_count() const {
  return static_cast<std::size_t>(
      std::count_if(positions_.begin(), positions_.end(), [](Obs o) { return o != Obs::missing; }));
}

std::size_t BinarySequence::count(Letter b) const {
  return static_cast<std::size_t>(std::count(positions_.begin(), positions_.end(), to_obs(b)));
}

bool BinarySequence::has_missing() const {
  return std::find(positions_.begin(), positions_.end(), Obs::missing) != positions_.end();
}

std::vector<std::vector<Letter>> BinarySequence::segments() const {
  std::vector<std::vector<Letter>> out;
  std::vector<Letter> current;
  for (Obs o : positions_) {
    if (o == Obs::missing) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(static_cast<Letter>(o));
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::vector<Letter> BinarySequence::letters() const {
  std::vector<Letter> out;
  out.reserve(positions_.size());
  for (Obs o : positions_) {
    if (o == Obs::missing) throw InvalidArgument("sequence contains missing observations");
    out.push_back(static_cast<Letter>(o));
  }
  return out;
}

}  // namespace dbp
