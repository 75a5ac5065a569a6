#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "redpath/free_group.hpp"

namespace redpath {

inline constexpr int kMaxLetters = 15;
inline constexpr int kMaxDepth = 16;
/// Longest square-free word the inversion search will enumerate.
inline constexpr int kMaxInversionLength = 13;

/// A word e_{i_1} ... e_{i_k} packed four bits per letter, first letter most
/// significant. Letters are nonzero, so the packing is injective and the
/// empty word is 0.
class Word {
 public:
  constexpr Word() = default;
  /// Throws std::invalid_argument on letters outside [1, 15] or more than 16 letters.
  explicit Word(std::span<const int> indices);
  Word(std::initializer_list<int> indices) : Word(std::span<const int>(indices.begin(), indices.size())) {}

  static constexpr Word from_key(std::uint64_t key) {
    Word w;
    w.key_ = key;
    while (key != 0) {
      ++w.size_;
      key >>= 4;
    }
    return w;
  }

  constexpr std::uint64_t key() const { return key_; }
  constexpr int size() const { return size_; }
  constexpr bool empty() const { return size_ == 0; }
  constexpr int operator[](int k) const { return static_cast<int>((key_ >> (4 * (size_ - 1 - k))) & 0xF); }

  constexpr Word concat(const Word& v) const {
    Word w;
    w.key_ = (key_ << (4 * v.size_)) | v.key_;
    w.size_ = size_ + v.size_;
    return w;
  }
  constexpr Word push(int index) const {
    Word w;
    w.key_ = (key_ << 4) | static_cast<std::uint64_t>(index);
    w.size_ = size_ + 1;
    return w;
  }

  std::vector<int> indices() const;
  bool square_free() const;
  /// Space-separated 1-based indices; "" for the empty word.
  std::string str() const;
  /// Inverse of str(). Throws std::invalid_argument on malformed text.
  static Word parse(const std::string& text);

  /// Shortlex: by length, then lexicographically.
  friend constexpr bool operator<(const Word& a, const Word& b) {
    return a.size_ != b.size_ ? a.size_ < b.size_ : a.key_ < b.key_;
  }
  friend constexpr bool operator==(const Word&, const Word&) = default;

 private:
  std::uint64_t key_ = 0;
  int size_ = 0;
};

/// Truncated element of the free tensor algebra over d letters: a sparse
/// table word -> coefficient for words of length <= depth.
template <typename Scalar>
class TensorSeries {
 public:
  using Terms = std::unordered_map<std::uint64_t, Scalar>;

  /// The zero series. Throws std::invalid_argument for d outside [1, 15] or
  /// depth outside [0, 16].
  TensorSeries(int d, int depth) : d_(d), depth_(depth) {
    if (d < 1 || d > kMaxLetters) throw std::invalid_argument("d must lie in [1, 15]");
    if (depth < 0 || depth > kMaxDepth) throw std::invalid_argument("depth must lie in [0, 16]");
  }

  static TensorSeries unit(int d, int depth) {
    TensorSeries s(d, depth);
    s.terms_[0] = Scalar(1);
    return s;
  }

  int dim() const { return d_; }
  int depth() const { return depth_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// Stored value or zero. Throws std::out_of_range for words longer than the
  /// truncation depth, std::invalid_argument for letters outside [1, d].
  Scalar coefficient(const Word& w) const {
    check_word(w);
    auto it = terms_.find(w.key());
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void set(const Word& w, Scalar value) {
    check_word(w);
    if (value == Scalar(0)) {
      terms_.erase(w.key());
    } else {
      terms_[w.key()] = std::move(value);
    }
  }

  void add(const Word& w, const Scalar& value) {
    check_word(w);
    terms_[w.key()] += value;
  }

  /// Stored words in shortlex order.
  std::vector<Word> words() const {
    std::vector<Word> out;
    out.reserve(terms_.size());
    for (const auto& kv : terms_) out.push_back(Word::from_key(kv.first));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void check_word(const Word& w) const {
    if (w.size() > depth_) {
      throw std::out_of_range("word of length " + std::to_string(w.size()) + " exceeds truncation depth " +
                              std::to_string(depth_));
    }
    for (int k = 0; k < w.size(); ++k) {
      if (w[k] > d_) throw std::invalid_argument("word letter " + std::to_string(w[k]) + " exceeds d");
    }
  }

  int d_;
  int depth_;
  Terms terms_;
};

template <typename Scalar>
TensorSeries<Scalar> ts_unit(int d, int depth) {
  return TensorSeries<Scalar>::unit(d, depth);
}

/// Concatenation product truncated at the common depth:
/// C_{AB}(w) = sum over splits w = uv of C_A(u) C_B(v).
template <typename Scalar>
TensorSeries<Scalar> ts_mul(const TensorSeries<Scalar>& a, const TensorSeries<Scalar>& b) {
  if (a.dim() != b.dim() || a.depth() != b.depth()) {
    throw std::invalid_argument("ts_mul needs series with equal d and depth");
  }
  const int depth = a.depth();
  // Bucket the right factor by length so the truncation test is one comparison.
  std::vector<std::vector<std::pair<Word, const Scalar*>>> right(static_cast<std::size_t>(depth) + 1);
  for (const auto& [key, c] : b.terms()) {
    const auto v = Word::from_key(key);
    right[static_cast<std::size_t>(v.size())].emplace_back(v, &c);
  }
  typename TensorSeries<Scalar>::Terms out;
  out.reserve(a.size() * 2);
  for (const auto& [ukey, ca] : a.terms()) {
    const auto u = Word::from_key(ukey);
    for (int len = 0; len + u.size() <= depth; ++len) {
      for (const auto& [v, cb] : right[static_cast<std::size_t>(len)]) out[u.concat(v).key()] += ca * *cb;
    }
  }
  TensorSeries<Scalar> result(a.dim(), depth);
  for (auto& [key, c] : out) {
    if (c != Scalar(0)) result.set(Word::from_key(key), std::move(c));
  }
  return result;
}

/// exp(r e_i): coefficient r^k / k! on e_i^k for k <= depth.
template <typename Scalar>
TensorSeries<Scalar> exp_segment(int d, int depth, int index, const Scalar& r) {
  if (index < 1 || index > d) throw std::invalid_argument("segment index out of range");
  auto s = TensorSeries<Scalar>::unit(d, depth);
  Scalar term(1);
  Word w;
  for (int k = 1; k <= depth; ++k) {
    term = term * r / Scalar(k);
    w = w.push(index);
    s.set(w, term);
  }
  return s;
}

/// Ordered product of segment exponentials (Chen). The empty path maps to the unit.
template <typename Scalar>
TensorSeries<Scalar> signature(std::span<const BasicAxisSegment<Scalar>> path, int d, int depth) {
  auto x = TensorSeries<Scalar>::unit(d, depth);
  for (const auto& seg : path) x = ts_mul(x, exp_segment<Scalar>(d, depth, seg.index, seg.r));
  return x;
}

inline TensorSeries<double> signature(const AxisPath& path, int d, int depth) {
  return signature<double>(std::span<const AxisSegment>(path), d, depth);
}

/// Largest |C_A(w) - C_B(w)| over the union of stored words.
template <typename Scalar>
Scalar max_abs_difference(const TensorSeries<Scalar>& a, const TensorSeries<Scalar>& b) {
  using std::abs;
  Scalar worst(0);
  for (const auto& [key, c] : a.terms()) {
    auto it = b.terms().find(key);
    const Scalar diff = abs(c - (it == b.terms().end() ? Scalar(0) : it->second));
    if (diff > worst) worst = diff;
  }
  for (const auto& [key, c] : b.terms()) {
    if (!a.terms().contains(key) && abs(c) > worst) worst = abs(c);
  }
  return worst;
}

class InversionError : public std::runtime_error {
 public:
  enum class Kind { not_unique, too_shallow, search_too_large };
  InversionError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Recovers the reduced axis path from its signature. Enumerates square-free
/// words depth-first up to the truncation depth, keeps the longest ones with
/// |C(w)| > tol, requires exactly one, and reads r_k = 2 C(w_k) / C(w) where
/// w_k doubles the k-th letter of w.
/// Throws InversionError when the longest word is not unique, when it already
/// uses the full depth (no room for w_k), or when depth exceeds kMaxInversionLength.
template <typename Scalar>
std::vector<BasicAxisSegment<Scalar>> invert(const TensorSeries<Scalar>& x, const Scalar& tol) {
  using std::abs;
  const int depth = x.depth();
  if (depth > kMaxInversionLength) {
    throw InversionError(InversionError::Kind::search_too_large,
                         "inversion search limited to depth " + std::to_string(kMaxInversionLength));
  }
  int best_len = 0;
  std::vector<Word> best;
  std::function<void(const Word&)> visit = [&](const Word& w) {
    if (!w.empty() && abs(x.coefficient(w)) > tol) {
      if (w.size() > best_len) {
        best_len = w.size();
        best.clear();
      }
      if (w.size() == best_len) best.push_back(w);
    }
    if (w.size() == depth) return;
    const int last = w.empty() ? 0 : w[w.size() - 1];
    for (int i = 1; i <= x.dim(); ++i) {
      if (i != last) visit(w.push(i));
    }
  };
  visit(Word{});

  if (best.empty()) return {};
  if (best.size() > 1) {
    throw InversionError(InversionError::Kind::not_unique,
                         "longest square-free words '" + best[0].str() + "' and '" + best[1].str() +
                             "' both exceed the tolerance");
  }
  const Word shape = best.front();
  if (shape.size() + 1 > depth) {
    throw InversionError(InversionError::Kind::too_shallow,
                         "shape of length " + std::to_string(shape.size()) + " needs depth >= " +
                             std::to_string(shape.size() + 1));
  }
  const Scalar c_shape = x.coefficient(shape);
  std::vector<BasicAxisSegment<Scalar>> path;
  path.reserve(static_cast<std::size_t>(shape.size()));
  for (int k = 0; k < shape.size(); ++k) {
    Word doubled;
    for (int j = 0; j < shape.size(); ++j) {
      doubled = doubled.push(shape[j]);
      if (j == k) doubled = doubled.push(shape[j]);
    }
    path.push_back({Scalar(2) * x.coefficient(doubled) / c_shape, shape[k]});
  }
  return path;
}

inline constexpr double kDefaultInversionTol = 1e-9;

inline AxisPath invert(const TensorSeries<double>& x, double tol = kDefaultInversionTol) {
  return invert<double>(x, tol);
}

}  // namespace redpath
