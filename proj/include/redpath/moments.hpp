#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace redpath {

/// Streaming mean and central moments up to order 4, mergeable in any order
/// (pairwise update of Chan/Pebay).
class RunningMoments {
 public:
  void add(double x) {
    RunningMoments one;
    one.count_ = 1;
    one.mean_ = x;
    merge(one);
  }

  void merge(const RunningMoments& o) {
    if (o.count_ == 0) return;
    if (count_ == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(o.count_);
    const double n = na + nb;
    const double delta = o.mean_ - mean_;
    const double d_n = delta / n;
    const double d_n2 = d_n * d_n;

    const double m2 = m2_ + o.m2_ + delta * d_n * na * nb;
    const double m3 = m3_ + o.m3_ + delta * d_n2 * na * nb * (na - nb) +
                      3.0 * d_n * (na * o.m2_ - nb * m2_);
    const double m4 = m4_ + o.m4_ + delta * d_n2 * d_n * na * nb * (na * na - na * nb + nb * nb) +
                      6.0 * d_n2 * (na * na * o.m2_ + nb * nb * m2_) +
                      4.0 * d_n * (na * o.m3_ - nb * m3_);

    mean_ += d_n * nb;
    m2_ = m2;
    m3_ = m3;
    m4_ = m4;
    count_ += o.count_;
  }

  std::int64_t count() const { return count_; }
  double mean() const { return count_ > 0 ? mean_ : std::numeric_limits<double>::quiet_NaN(); }

  /// Unbiased sample variance; NaN with fewer than two observations.
  double variance() const {
    if (count_ < 2) return std::numeric_limits<double>::quiet_NaN();
    return std::max(0.0, m2_ / static_cast<double>(count_ - 1));
  }
  double std_error() const { return std::sqrt(variance() / static_cast<double>(count_)); }

  /// Population central moments.
  double central_moment2() const { return count_ > 0 ? m2_ / static_cast<double>(count_) : std::numeric_limits<double>::quiet_NaN(); }
  double central_moment3() const { return count_ > 0 ? m3_ / static_cast<double>(count_) : std::numeric_limits<double>::quiet_NaN(); }
  double central_moment4() const { return count_ > 0 ? m4_ / static_cast<double>(count_) : std::numeric_limits<double>::quiet_NaN(); }

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

}  // namespace redpath
