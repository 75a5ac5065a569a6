#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace redpath {

/// A generator e_i (sign +1) or its inverse e_i^{-1} (sign -1), 1-based index.
class Letter {
 public:
  constexpr Letter() = default;
  /// Throws std::invalid_argument on index < 1 or sign not in {+1, -1}.
  Letter(int index, int sign);

  constexpr int index() const { return index_; }
  constexpr int sign() const { return sign_; }
  constexpr Letter inverse() const { return Letter(index_, -sign_, Unchecked{}); }
  constexpr bool cancels(const Letter& other) const {
    return index_ == other.index_ && sign_ == -other.sign_;
  }

  /// Dense code in [0, 2d): 2*(index-1) for e_i, 2*(index-1)+1 for e_i^{-1}.
  constexpr int code() const { return 2 * (index_ - 1) + (sign_ < 0 ? 1 : 0); }
  static constexpr Letter from_code(int code) {
    return Letter(code / 2 + 1, (code % 2) ? -1 : 1, Unchecked{});
  }

  friend constexpr bool operator==(const Letter&, const Letter&) = default;

  /// "e2" or "e2^-1".
  std::string str() const;

 private:
  struct Unchecked {};
  constexpr Letter(int index, int sign, Unchecked) : index_(index), sign_(sign) {}

  int index_ = 1;
  int sign_ = 1;
};

Letter gen(int index);
Letter inv(int index);

/// Throws std::invalid_argument if any letter has index > d or d < 1.
void validate_letters(std::span<const Letter> letters, int d);

/// A freely reduced word. Construction from arbitrary letters goes through reduce().
class ReducedWord {
 public:
  ReducedWord() = default;

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::span<const Letter> letters() const { return letters_; }
  const Letter& back() const { return letters_.back(); }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }

  /// In-place form of push_step. Returns +1 if the word grew, -1 if it shrank.
  int push(Letter x);

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;

  std::string str() const;

 private:
  friend ReducedWord reduce(std::span<const Letter> steps);
  std::vector<Letter> letters_;
};

ReducedWord reduce(std::span<const Letter> steps);
ReducedWord push_step(ReducedWord w, Letter x);

/// Number of adjacent positions whose generator indices differ.
std::size_t turn_count(const ReducedWord& w);

enum class MatchMode { by_letter, by_index };

struct Pattern {
  std::vector<Letter> letters;
  MatchMode mode = MatchMode::by_letter;

  /// Throws std::invalid_argument on an empty letter list.
  Pattern(std::vector<Letter> letters, MatchMode mode);
};

/// Overlapping occurrences, counting each position once if any pattern in
/// the set matches there.
std::size_t pattern_count(const ReducedWord& w, std::span<const Pattern> patterns);

/// The family {(e_i, e_j) : i != j} under by-index matching.
std::vector<Pattern> turn_patterns(int d);

/// One axis-parallel piece r * e_index; the sign of r gives the direction.
template <typename Scalar>
struct BasicAxisSegment {
  Scalar r{};
  int index = 1;
  friend bool operator==(const BasicAxisSegment&, const BasicAxisSegment&) = default;
};

using AxisSegment = BasicAxisSegment<double>;

using AxisPath = std::vector<AxisSegment>;

/// Merge adjacent same-index segments and drop zero ones until a fixpoint.
AxisPath reduce_axis(std::span<const AxisSegment> path);

bool is_reduced_axis(std::span<const AxisSegment> path);

/// The path run backwards: reversed segment order, negated displacements.
AxisPath reverse_axis(std::span<const AxisSegment> path);

/// Signed sum of displacements per index, entries 0..d-1.
std::vector<double> axis_endpoint(std::span<const AxisSegment> path, int d);

}  // namespace redpath
