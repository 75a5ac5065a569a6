#pragma once

#include <cstdint>
#include <vector>

namespace redpath {

/// Closed-form asymptotic constants for generator count d >= 2.
struct LimitConstants {
  int d = 2;
  double drift_L = 0.0;       // E L_n / n
  double offset_L = 0.0;      // lim E L_n - drift_L n
  double varslope_L = 0.0;    // Var L_n / n
  double drift_T = 0.0;       // E T_n / n
  double offset_T = 0.0;      // lim E T_n - drift_T n
  double varslope_T = 0.0;    // sigma^2
  double p_turn = 0.0;        // success probability of T | L
  double mean_D = 0.0;        // lim E D_n
  double var_D = 0.0;         // lim Var D_n
  double w_star = 0.0;        // Laplace-transform kink of L
  double theta_star_T = 0.0;  // flat threshold of h_T
  double theta_star_L = 0.0;  // flat threshold of h_L
  double flat_value = 0.0;    // sqrt(2d-1)/d
  double u_upper = 0.0;       // upper bracket of the S/D covariance constant u(d)
};

/// Throws std::invalid_argument for d < 2.
LimitConstants constants(int d);

/// Turn-probability generating parameter: E[w^{L-1}] with w(theta) = (1 + 2(d-1)e^theta)/(2d-1).
double turn_weight(int d, double theta);

/// Limit of (E e^{theta T_n})^{1/n}: smooth branch above theta_star_T, flat below.
double h_T(int d, double theta);
/// The smooth branch alone, for any theta.
double h_T_branch(int d, double theta);

/// Limit of (E e^{theta L_n})^{1/n}.
double h_L(int d, double theta);
/// (2d-1)/(2d) e^theta + 1/(2d) e^{-theta}: the log-MGF base of one increment X.
double h_S(int d, double theta);

/// Limit of (E w^{L_n})^{1/n} as a function of w > 0.
double laplace_limit(int d, double w);

/// Cramer rate of S_n / n; +infinity outside [-1, 1].
double cramer_J(int d, double alpha);

struct AlphaStar {
  double alpha = 0.0;
  double value = 0.0;  // f_w(alpha*) = w^alpha* exp(-J(alpha*))
};

/// Throws std::invalid_argument for w <= 0.
AlphaStar alpha_star(int d, double w);

enum class RateKind { T, L, S };

struct RatePoint {
  double x = 0.0;
  double rate = 0.0;
  double theta = 0.0;           // maximizing theta (clamped to the search box)
  bool at_boundary = false;     // the supremum sits at the edge of [-40, 40]
};

inline constexpr double kThetaBound = 40.0;

/// sup_theta [theta x - log h(theta)] by golden-section search over
/// [-kThetaBound, kThetaBound]. Returns +inf outside the effective domain:
/// [0, 1) for T, [0, 1] for L, [-1, 1] for S.
RatePoint rate_function(int d, double x, RateKind which);

std::vector<RatePoint> rate_table(int d, double x_start, double x_stop, double x_step, RateKind which);

/// inf_{y >= x} I(y).
double upper_tail_rate(int d, double x, RateKind which);

struct UEstimate {
  std::int64_t n = 0;
  std::int64_t replicates = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double upper = 0.0;
  bool in_bracket = false;  // estimate within 3 SE of [0, upper]
};

/// Monte Carlo of -E[(S_n - drift_L n) D_n] at n = n_max.
UEstimate estimate_u(int d, std::int64_t n_max, std::int64_t replicates, std::uint64_t seed, int threads = 1);

/// u(d) implied by an exact variance offset beta = lim Var L_n - varslope_L n.
double u_from_variance_offset(int d, double beta);

}  // namespace redpath
