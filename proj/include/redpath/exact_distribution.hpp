#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace redpath {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// P(L_n = l) for l = 0..n.
struct LengthLaw {
  int d = 2;
  std::int64_t n = 0;
  std::vector<double> q;

  double mean() const;
  double variance() const;
  double total() const;
};

/// P(T_n = t) for t = 0..max(n-1, 0).
struct TurnLaw {
  int d = 2;
  std::int64_t n = 0;
  std::vector<double> p;

  double mean() const;
  double total() const;
  /// P(T_n >= t).
  double upper_tail(std::int64_t t) const;
};

/// Forward evolution of the reflected length chain, one step at a time.
class LengthChain {
 public:
  explicit LengthChain(int d);

  void advance();
  std::int64_t n() const { return n_; }
  const std::vector<double>& probabilities() const { return q_; }
  LengthLaw law() const { return {d_, n_, q_}; }

 private:
  int d_;
  std::int64_t n_ = 0;
  double up_, down_;
  std::vector<double> q_, next_;
};

/// Throws std::invalid_argument for d < 2 or n < 0.
LengthLaw length_law(int d, std::int64_t n);

/// Number of step sequences with L_n = l, for l = 0..n; sums to (2d)^n.
std::vector<BigInt> length_counts(int d, std::int64_t n);

/// Throws std::invalid_argument for d < 2 or n < 1.
TurnLaw turn_law(int d, std::int64_t n);
TurnLaw turn_law(const LengthLaw& law);

struct ExactMoments {
  std::int64_t n = 0;
  double mean_L = 0.0;
  double var_L = 0.0;
  double mean_T = 0.0;
  double var_T = 0.0;
  double p_L0 = 0.0;
};

/// Uses T_n = 0 on {L_n = 0} and T_n | L_n = l ~ Binomial(l - 1, p) otherwise.
ExactMoments exact_moments(const LengthLaw& law);
ExactMoments exact_moments(int d, std::int64_t n);

/// Moments for every n in 1..n_max (one O(n_max^2) pass).
std::vector<ExactMoments> exact_moment_table(int d, std::int64_t n_max);

/// E w^{L_n} via x_k = a x_{k-1} + b p_{k-1}, x_1 = w. For w below
/// 1/sqrt(2d-1) the recursion cancels catastrophically, so it is carried out
/// in MPFR with enough bits to absorb the (a / growth)^n amplification.
/// Throws std::invalid_argument for w <= 0, n < 1, d < 2.
double laplace_L(int d, std::int64_t n, double w);
/// log E w^{L_n}; finite where laplace_L overflows (e.g. w = 2, n = 5000).
double log_laplace_L(int d, std::int64_t n, double w);

/// Sum_l P(L_n = l) w^l over the double-precision law. Probabilities below
/// the double range are lost, so this is only a check for moderate n.
double laplace_direct(const LengthLaw& law, double w);
double log_laplace_direct(const LengthLaw& law, double w);

/// Bits of working precision laplace_L uses for (d, n, w).
int laplace_precision_bits(int d, std::int64_t n, double w);

/// E exp(theta T_n), evaluated in log space.
double mgf_T(int d, std::int64_t n, double theta);
double log_mgf_T(const LengthLaw& law, double theta);

struct JointKey {
  std::int64_t L = 0, T = 0, D = 0, R_prev = 0;
  friend auto operator<=>(const JointKey&, const JointKey&) = default;
};

struct JointCounts {
  int d = 2;
  std::int64_t n = 0;
  std::map<JointKey, BigInt> counts;

  BigInt total() const;
};

inline constexpr std::uint64_t kEnumerationLimit = 100'000'000;

/// Exhaustive walk over all (2d)^n step sequences. Throws std::length_error
/// when (2d)^n exceeds kEnumerationLimit, std::invalid_argument for d < 2 or n < 1.
JointCounts enumerate_oracle(int d, std::int64_t n);

}  // namespace redpath
