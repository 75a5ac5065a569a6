#include "redpath/limit_laws.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "redpath/moments.hpp"
#include "redpath/walk_simulator.hpp"

namespace redpath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_d(int d) {
  if (d < 2) throw std::invalid_argument("d must be >= 2, got " + std::to_string(d));
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double log_h(int d, double theta, RateKind which) {
  switch (which) {
    case RateKind::T: return std::log(h_T(d, theta));
    case RateKind::L: return std::log(h_L(d, theta));
    case RateKind::S: {
      // log((2d-1)/(2d) e^t + 1/(2d) e^-t) without overflow at large |t|
      const double a = std::log((2.0 * d - 1.0) / (2.0 * d)) + theta;
      const double b = -std::log(2.0 * d) - theta;
      const double hi = std::max(a, b);
      return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
    }
  }
  return 0.0;
}

bool in_domain(double x, RateKind which) {
  switch (which) {
    case RateKind::T: return x >= 0.0 && x < 1.0;
    case RateKind::L: return x >= 0.0 && x <= 1.0;
    case RateKind::S: return x >= -1.0 && x <= 1.0;
  }
  return false;
}

double drift(int d, RateKind which) {
  const auto c = constants(d);
  switch (which) {
    case RateKind::T: return c.drift_T;
    case RateKind::L:
    case RateKind::S: return c.drift_L;
  }
  return 0.0;
}

}  // namespace

LimitConstants constants(int d) {
  require_d(d);
  const double D = d;
  const double two_d1 = 2.0 * D - 1.0;
  LimitConstants c;
  c.d = d;
  c.drift_L = (D - 1.0) / D;
  c.offset_L = two_d1 / (2.0 * D * (D - 1.0));
  c.varslope_L = two_d1 / (D * D);
  c.drift_T = 2.0 * (D - 1.0) * (D - 1.0) / (D * two_d1);
  c.offset_T = -(2.0 * D * D - 4.0 * D + 1.0) / (D * two_d1);
  c.varslope_T = 2.0 * (D - 1.0) * (D - 1.0) * (5.0 * D - 2.0) / (D * D * two_d1 * two_d1);
  c.p_turn = (2.0 * D - 2.0) / two_d1;
  c.mean_D = two_d1 / (2.0 * D * (D - 1.0));
  c.var_D = two_d1 * (4.0 * D * D - 6.0 * D + 3.0) / (4.0 * D * D * (D - 1.0) * (D - 1.0));
  c.w_star = 1.0 / std::sqrt(two_d1);
  c.theta_star_T = std::log((std::sqrt(two_d1) - 1.0) / (2.0 * (D - 1.0)));
  c.theta_star_L = -0.5 * std::log(two_d1);
  c.flat_value = std::sqrt(two_d1) / D;
  c.u_upper = 2.0 * D * D * two_d1 * (D * D + 2.0 * D - 1.0) / std::pow(D - 1.0, 5);
  return c;
}

double turn_weight(int d, double theta) {
  require_d(d);
  return (1.0 + 2.0 * (d - 1.0) * std::exp(theta)) / (2.0 * d - 1.0);
}

double h_T_branch(int d, double theta) {
  require_d(d);
  const double e = 2.0 * (d - 1.0) * std::exp(theta);
  return (e + (2.0 * d - 1.0) / (1.0 + e) + 1.0) / (2.0 * d);
}

double h_T(int d, double theta) {
  const auto c = constants(d);
  return theta >= c.theta_star_T ? h_T_branch(d, theta) : c.flat_value;
}

double h_S(int d, double theta) {
  require_d(d);
  return (2.0 * d - 1.0) / (2.0 * d) * std::exp(theta) + std::exp(-theta) / (2.0 * d);
}

double h_L(int d, double theta) {
  const auto c = constants(d);
  return theta >= c.theta_star_L ? h_S(d, theta) : c.flat_value;
}

double laplace_limit(int d, double w) {
  if (!(w > 0.0)) throw std::invalid_argument("w must be positive");
  return h_L(d, std::log(w));
}

double cramer_J(int d, double alpha) {
  require_d(d);
  if (!(alpha >= -1.0 && alpha <= 1.0)) return kInf;
  const double two_d1 = 2.0 * d - 1.0;
  return 0.5 * (xlogx(1.0 + alpha) + xlogx(1.0 - alpha)) - 0.5 * alpha * std::log(two_d1) -
         std::log(std::sqrt(two_d1) / d);
}

AlphaStar alpha_star(int d, double w) {
  require_d(d);
  if (!(w > 0.0)) throw std::invalid_argument("w must be positive");
  const double s = (2.0 * d - 1.0) * w * w;
  const double alpha = (s - 1.0) / (s + 1.0);
  return {alpha, (2.0 * d - 1.0) * w / (2.0 * d) + 1.0 / (2.0 * d * w)};
}

RatePoint rate_function(int d, double x, RateKind which) {
  require_d(d);
  if (!in_domain(x, which)) return {x, kInf, 0.0, true};

  auto objective = [&](double theta) { return theta * x - log_h(d, theta, which); };
  // Golden-section search; the objective is concave in theta.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -kThetaBound, hi = kThetaBound;
  double a = hi - inv_phi * (hi - lo), b = lo + inv_phi * (hi - lo);
  double fa = objective(a), fb = objective(b);
  while (hi - lo > 1e-10) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = objective(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = objective(a);
    }
  }
  const double theta = 0.5 * (lo + hi);
  double best = objective(theta);
  // The flat branches make the objective constant or linear, so also compare the ends.
  for (double edge : {-kThetaBound, kThetaBound}) best = std::max(best, objective(edge));
  const bool boundary = std::abs(std::abs(theta) - kThetaBound) < 1e-6;
  return {x, std::max(0.0, best), theta, boundary};
}

std::vector<RatePoint> rate_table(int d, double x_start, double x_stop, double x_step, RateKind which) {
  if (!(x_step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (x_stop < x_start) throw std::invalid_argument("grid stop must be >= start");
  std::vector<RatePoint> out;
  const auto count = static_cast<std::int64_t>(std::floor((x_stop - x_start) / x_step + 1e-12));
  for (std::int64_t k = 0; k <= count; ++k) {
    out.push_back(rate_function(d, x_start + static_cast<double>(k) * x_step, which));
  }
  return out;
}

double upper_tail_rate(int d, double x, RateKind which) {
  if (x <= drift(d, which)) return 0.0;
  return rate_function(d, x, which).rate;
}

UEstimate estimate_u(int d, std::int64_t n_max, std::int64_t replicates, std::uint64_t seed, int threads) {
  const auto c = constants(d);
  if (replicates < 2) throw std::invalid_argument("estimate_u needs at least 2 replicates");
  const auto sample = sample_endpoints(d, n_max, replicates, seed, threads);
  RunningMoments u;
  const double centre = c.drift_L * static_cast<double>(n_max);
  for (std::size_t i = 0; i < sample.S.size(); ++i) {
    u.add(-(static_cast<double>(sample.S[i]) - centre) * static_cast<double>(sample.D[i]));
  }
  UEstimate e;
  e.n = n_max;
  e.replicates = replicates;
  e.estimate = u.mean();
  e.std_error = u.std_error();
  e.upper = c.u_upper;
  e.in_bracket = e.estimate >= -3.0 * e.std_error && e.estimate <= c.u_upper + 3.0 * e.std_error;
  return e;
}

double u_from_variance_offset(int d, double beta) { return 0.5 * (constants(d).var_D - beta); }

}  // namespace redpath
