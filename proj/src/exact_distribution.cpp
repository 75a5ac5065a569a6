#include "redpath/exact_distribution.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "redpath/walk_simulator.hpp"

namespace redpath {

namespace {

void require_d(int d) {
  if (d < 2) throw std::invalid_argument("d must be >= 2, got " + std::to_string(d));
}

double turn_probability(int d) { return (2.0 * d - 2.0) / (2.0 * d - 1.0); }

double log_sum_exp(const std::vector<double>& terms) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double t : terms) hi = std::max(hi, t);
  if (!std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - hi);
  return hi + std::log(s);
}

/// Minimal RAII handle over an MPFR number of fixed precision.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t bits, double v = 0.0) {
    mpfr_init2(x_, bits);
    mpfr_set_d(x_, v, MPFR_RNDN);
  }
  Mpfr(const Mpfr& o) {
    mpfr_init2(x_, mpfr_get_prec(o.x_));
    mpfr_set(x_, o.x_, MPFR_RNDN);
  }
  Mpfr& operator=(const Mpfr& o) {
    if (this != &o) mpfr_set(x_, o.x_, MPFR_RNDN);
    return *this;
  }
  ~Mpfr() { mpfr_clear(x_); }

  mpfr_ptr get() { return x_; }
  mpfr_srcptr get() const { return x_; }
  double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }

 private:
  mpfr_t x_;
};

/// P(L_k = 0) for k = 0..n-1 at the given precision. States above n-1-k can
/// no longer reach 0 before time n-1 and are dropped.
std::vector<Mpfr> zero_probabilities(int d, std::int64_t n, mpfr_prec_t bits) {
  Mpfr up(bits, 2.0 * d - 1.0), down(bits, 1.0), tmp(bits);
  mpfr_div_ui(up.get(), up.get(), static_cast<unsigned long>(2 * d), MPFR_RNDN);
  mpfr_div_ui(down.get(), down.get(), static_cast<unsigned long>(2 * d), MPFR_RNDN);

  const auto horizon = static_cast<std::size_t>(n);
  std::vector<Mpfr> q(horizon + 2, Mpfr(bits)), next(horizon + 2, Mpfr(bits));
  mpfr_set_ui(q[0].get(), 1, MPFR_RNDN);
  std::vector<Mpfr> p0;
  p0.reserve(horizon);
  p0.push_back(q[0]);
  for (std::int64_t k = 1; k < n; ++k) {
    // Live states at time k satisfy l <= min(k, n - 1 - k).
    const auto cap = static_cast<std::size_t>(std::min<std::int64_t>(k, n - 1 - k));
    const auto prev_cap = static_cast<std::size_t>(std::min<std::int64_t>(k - 1, n - k));
    for (std::size_t l = 0; l <= cap + 1; ++l) mpfr_set_ui(next[l].get(), 0, MPFR_RNDN);
    for (auto l = static_cast<std::size_t>((k - 1) % 2); l <= prev_cap; l += 2) {
      if (l == 0) {
        if (cap >= 1) mpfr_add(next[1].get(), next[1].get(), q[0].get(), MPFR_RNDN);
        continue;
      }
      if (l + 1 <= cap) {
        mpfr_mul(tmp.get(), q[l].get(), up.get(), MPFR_RNDN);
        mpfr_add(next[l + 1].get(), next[l + 1].get(), tmp.get(), MPFR_RNDN);
      }
      mpfr_mul(tmp.get(), q[l].get(), down.get(), MPFR_RNDN);
      mpfr_add(next[l - 1].get(), next[l - 1].get(), tmp.get(), MPFR_RNDN);
    }
    std::swap(q, next);
    p0.push_back(q[0]);
  }
  return p0;
}

/// Returns log x_n. The iterate is stored as x e^{-shift} so large n cannot overflow.
double laplace_recursion_double(int d, std::int64_t n, double w) {
  const double a = (2.0 * d - 1.0) * w / (2.0 * d) + 1.0 / (2.0 * d * w);
  const double b = (w - 1.0 / w) / (2.0 * d);
  LengthChain chain(d);
  chain.advance();
  double x = w, shift = 0.0;
  for (std::int64_t k = 2; k <= n; ++k) {
    const double p0 = chain.probabilities()[0];
    x = a * x + (p0 > 0.0 ? b * std::exp(std::log(p0) - shift) : 0.0);
    if (x > 1e150 || (x < 1e-150 && x > 0.0)) {
      shift += std::log(x);
      x = 1.0;
    }
    chain.advance();
  }
  return shift + std::log(x);
}

double laplace_recursion_mpfr(int d, std::int64_t n, double w, int bits) {
  const auto p0 = zero_probabilities(d, n, bits);
  Mpfr W(bits, w), a(bits), b(bits), t(bits), x(bits, w);
  // a = ((2d-1) w + 1/w) / (2d), b = (w - 1/w) / (2d)
  Mpfr inv_w(bits, 1.0);
  mpfr_div(inv_w.get(), inv_w.get(), W.get(), MPFR_RNDN);
  mpfr_mul_ui(a.get(), W.get(), static_cast<unsigned long>(2 * d - 1), MPFR_RNDN);
  mpfr_add(a.get(), a.get(), inv_w.get(), MPFR_RNDN);
  mpfr_div_ui(a.get(), a.get(), static_cast<unsigned long>(2 * d), MPFR_RNDN);
  mpfr_sub(b.get(), W.get(), inv_w.get(), MPFR_RNDN);
  mpfr_div_ui(b.get(), b.get(), static_cast<unsigned long>(2 * d), MPFR_RNDN);
  for (std::int64_t k = 2; k <= n; ++k) {
    mpfr_mul(x.get(), x.get(), a.get(), MPFR_RNDN);
    mpfr_mul(t.get(), b.get(), p0[static_cast<std::size_t>(k - 1)].get(), MPFR_RNDN);
    mpfr_add(x.get(), x.get(), t.get(), MPFR_RNDN);
  }
  mpfr_log(x.get(), x.get(), MPFR_RNDN);
  return x.to_double();
}

}  // namespace

double LengthLaw::total() const {
  double s = 0.0;
  for (double v : q) s += v;
  return s;
}

double LengthLaw::mean() const {
  double m = 0.0;
  for (std::size_t l = 0; l < q.size(); ++l) m += static_cast<double>(l) * q[l];
  return m;
}

double LengthLaw::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t l = 0; l < q.size(); ++l) v += (static_cast<double>(l) - m) * (static_cast<double>(l) - m) * q[l];
  return v;
}

double TurnLaw::total() const {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

double TurnLaw::mean() const {
  double m = 0.0;
  for (std::size_t t = 0; t < p.size(); ++t) m += static_cast<double>(t) * p[t];
  return m;
}

double TurnLaw::upper_tail(std::int64_t t) const {
  double s = 0.0;
  for (auto k = static_cast<std::size_t>(std::max<std::int64_t>(t, 0)); k < p.size(); ++k) s += p[k];
  return s;
}

LengthChain::LengthChain(int d)
    : d_(d), up_((2.0 * d - 1.0) / (2.0 * d)), down_(1.0 / (2.0 * d)), q_{1.0} {
  require_d(d);
}

void LengthChain::advance() {
  next_.assign(q_.size() + 1, 0.0);
  for (auto l = static_cast<std::size_t>(n_ % 2); l < q_.size(); l += 2) {
    const double mass = q_[l];
    if (l == 0) {
      next_[1] += mass;
    } else {
      next_[l + 1] += up_ * mass;
      next_[l - 1] += down_ * mass;
    }
  }
  std::swap(q_, next_);
  ++n_;
}

LengthLaw length_law(int d, std::int64_t n) {
  require_d(d);
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  LengthChain chain(d);
  for (std::int64_t k = 0; k < n; ++k) chain.advance();
  return chain.law();
}

std::vector<BigInt> length_counts(int d, std::int64_t n) {
  require_d(d);
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  std::vector<BigInt> c{1};
  for (std::int64_t k = 0; k < n; ++k) {
    std::vector<BigInt> next(c.size() + 1);
    for (std::size_t l = 0; l < c.size(); ++l) {
      if (c[l] == 0) continue;
      if (l == 0) {
        next[1] += c[0] * (2 * d);
      } else {
        next[l + 1] += c[l] * (2 * d - 1);
        next[l - 1] += c[l];
      }
    }
    c = std::move(next);
  }
  return c;
}

TurnLaw turn_law(const LengthLaw& law) {
  if (law.n < 1) throw std::invalid_argument("turn law needs n >= 1");
  const double p = turn_probability(law.d);
  // Horner form of sum_m P((L-1)^+ = m) Binomial(m, p): walking m downwards,
  // convolve the accumulated law with one Bernoulli(p) trial, then add the
  // atom at m. Every operation is a convex combination of nonnegative terms,
  // so nothing overflows and small terms underflow harmlessly to zero.
  const std::size_t trials_max = static_cast<std::size_t>(law.n - 1);
  TurnLaw out{law.d, law.n, std::vector<double>(trials_max + 1, 0.0)};
  auto& v = out.p;
  std::size_t top = 0;  // v[t] == 0 for t > top
  for (std::size_t m = trials_max + 1; m-- > 0;) {
    if (top > 0 || v[0] != 0.0) {
      const std::size_t new_top = std::min(top + 1, trials_max);
      if (new_top > top) v[new_top] = 0.0;
      for (std::size_t t = new_top; t > 0; --t) v[t] = v[t] * (1.0 - p) + v[t - 1] * p;
      v[0] *= 1.0 - p;
      top = new_top;
    }
    const double atom = m == 0 ? law.q[0] + law.q[1] : law.q[m + 1];
    v[0] += atom;
  }
  return out;
}

TurnLaw turn_law(int d, std::int64_t n) {
  require_d(d);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return turn_law(length_law(d, n));
}

ExactMoments exact_moments(const LengthLaw& law) {
  const double p = turn_probability(law.d);
  // m = (L - 1)^+ is the number of binomial trials for T given L.
  double mean_m = 0.0;
  for (std::size_t l = 1; l < law.q.size(); ++l) mean_m += static_cast<double>(l - 1) * law.q[l];
  double var_m = law.q[0] * mean_m * mean_m;
  for (std::size_t l = 1; l < law.q.size(); ++l) {
    const double dev = static_cast<double>(l - 1) - mean_m;
    var_m += dev * dev * law.q[l];
  }
  ExactMoments m;
  m.n = law.n;
  m.mean_L = law.mean();
  m.var_L = law.variance();
  m.mean_T = p * mean_m;
  m.var_T = p * (1.0 - p) * mean_m + p * p * var_m;
  m.p_L0 = law.q[0];
  return m;
}

ExactMoments exact_moments(int d, std::int64_t n) {
  require_d(d);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return exact_moments(length_law(d, n));
}

std::vector<ExactMoments> exact_moment_table(int d, std::int64_t n_max) {
  require_d(d);
  if (n_max < 1) throw std::invalid_argument("n must be >= 1");
  std::vector<ExactMoments> rows;
  rows.reserve(static_cast<std::size_t>(n_max));
  LengthChain chain(d);
  for (std::int64_t k = 1; k <= n_max; ++k) {
    chain.advance();
    rows.push_back(exact_moments(chain.law()));
  }
  return rows;
}

double log_laplace_direct(const LengthLaw& law, double w) {
  if (!(w > 0.0)) throw std::invalid_argument("w must be positive");
  std::vector<double> terms;
  terms.reserve(law.q.size());
  for (std::size_t l = 0; l < law.q.size(); ++l) {
    if (law.q[l] > 0.0) terms.push_back(std::log(law.q[l]) + static_cast<double>(l) * std::log(w));
  }
  return log_sum_exp(terms);
}

double laplace_direct(const LengthLaw& law, double w) { return std::exp(log_laplace_direct(law, w)); }

int laplace_precision_bits(int d, std::int64_t n, double w) {
  require_d(d);
  const double a = (2.0 * d - 1.0) * w / (2.0 * d) + 1.0 / (2.0 * d * w);
  const double w_star = 1.0 / std::sqrt(2.0 * d - 1.0);
  // x_n grows like a^n above w_star and like the flat value below it; the gap
  // is what the recursion loses to cancellation.
  const double growth = w >= w_star ? a : std::sqrt(2.0 * d - 1.0) / d;
  const double lost = static_cast<double>(n) * std::log2(std::max(1.0, a / growth));
  if (lost < 1.0) return 53;
  return 96 + static_cast<int>(std::ceil(lost + 2.0 * std::log2(static_cast<double>(n) + 1.0)));
}

double log_laplace_L(int d, std::int64_t n, double w) {
  require_d(d);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(w > 0.0)) throw std::invalid_argument("w must be positive");
  const int bits = laplace_precision_bits(d, n, w);
  // P(L_k = 0) decays like (sqrt(2d-1)/d)^k; once it leaves the double range
  // the doubles chain would drop it, so MPFR also serves for its exponent range.
  const bool p0_in_range = static_cast<double>(n) * std::log(std::sqrt(2.0 * d - 1.0) / d) > -650.0;
  if (bits == 53 && p0_in_range) return laplace_recursion_double(d, n, w);
  return laplace_recursion_mpfr(d, n, w, std::max(bits, 64));
}

double laplace_L(int d, std::int64_t n, double w) { return std::exp(log_laplace_L(d, n, w)); }

double log_mgf_T(const LengthLaw& law, double theta) {
  const double w = (1.0 + 2.0 * (law.d - 1.0) * std::exp(theta)) / (2.0 * law.d - 1.0);
  const double log_w = std::log(w);
  std::vector<double> terms;
  terms.reserve(law.q.size());
  for (std::size_t l = 0; l < law.q.size(); ++l) {
    if (law.q[l] <= 0.0) continue;
    const double trials = l == 0 ? 0.0 : static_cast<double>(l - 1);
    terms.push_back(std::log(law.q[l]) + trials * log_w);
  }
  return log_sum_exp(terms);
}

double mgf_T(int d, std::int64_t n, double theta) {
  require_d(d);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return std::exp(log_mgf_T(length_law(d, n), theta));
}

BigInt JointCounts::total() const {
  BigInt t = 0;
  for (const auto& [key, c] : counts) t += c;
  return t;
}

JointCounts enumerate_oracle(int d, std::int64_t n) {
  require_d(d);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  std::uint64_t size = 1;
  for (std::int64_t k = 0; k < n; ++k) {
    size *= static_cast<std::uint64_t>(2 * d);
    if (size > kEnumerationLimit) {
      throw std::length_error("enumeration of (2d)^n = (" + std::to_string(2 * d) + ")^" + std::to_string(n) +
                              " sequences exceeds the limit of 1e8");
    }
  }

  std::map<JointKey, std::uint64_t> tally;
  // Depth-first over step sequences; each level keeps its own walker copy.
  std::vector<Walker> stack(static_cast<std::size_t>(n) + 1, Walker(d));
  auto visit = [&](auto&& self, std::int64_t depth) -> void {
    if (depth == n) {
      const auto c = stack[static_cast<std::size_t>(depth)].state();
      ++tally[JointKey{c.L, c.T, c.D, c.R_prev}];
      return;
    }
    for (int code = 0; code < 2 * d; ++code) {
      stack[static_cast<std::size_t>(depth) + 1] = stack[static_cast<std::size_t>(depth)];
      stack[static_cast<std::size_t>(depth) + 1].step(Letter::from_code(code));
      self(self, depth + 1);
    }
  };
  visit(visit, 0);

  JointCounts out{d, n, {}};
  for (const auto& [key, c] : tally) out.counts.emplace(key, BigInt(c));
  return out;
}

}  // namespace redpath
