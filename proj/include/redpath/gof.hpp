#pragma once

#include <functional>
#include <span>
#include <string_view>

namespace redpath {

struct KsResult {
  double statistic = 0.0;
  /// Asymptotic Kolmogorov tail probability at sqrt(n) * statistic.
  double p_value = 1.0;
};

using Cdf = std::function<double(double)>;

double standard_normal_cdf(double x);

/// Named references: "normal" (standard normal), "uniform" (on [0,1]),
/// "half-normal" (law of |Z|). Throws std::invalid_argument otherwise.
Cdf reference_cdf(std::string_view name);

/// Two-sided sup_x |F_emp(x) - F_ref(x)|. Throws on empty input.
KsResult ks_test(std::span<const double> samples, const Cdf& reference);
KsResult ks_test(std::span<const double> samples, std::string_view reference);

/// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_tail(double lambda);

}  // namespace redpath
