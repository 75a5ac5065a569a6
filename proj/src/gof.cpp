#include "redpath/gof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace redpath {

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

Cdf reference_cdf(std::string_view name) {
  if (name == "normal") return standard_normal_cdf;
  if (name == "uniform") return [](double x) { return std::clamp(x, 0.0, 1.0); };
  if (name == "half-normal") {
    return [](double x) { return x <= 0.0 ? 0.0 : std::erf(x / std::sqrt(2.0)); };
  }
  throw std::invalid_argument("unknown reference distribution '" + std::string(name) + "'");
}

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;  // series converges slowly; Q is 1 to double precision here
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> samples, const Cdf& reference) {
  if (samples.empty()) throw std::invalid_argument("ks_test needs at least one sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());

  // Ties are grouped so the empirical CDF is evaluated on both sides of each jump.
  double stat = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    const double f = reference(x[i]);
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(j) / n;
    stat = std::max({stat, std::abs(f - below), std::abs(above - f)});
    i = j;
  }
  return {stat, kolmogorov_tail(std::sqrt(n) * stat)};
}

KsResult ks_test(std::span<const double> samples, std::string_view reference) {
  return ks_test(samples, reference_cdf(reference));
}

}  // namespace redpath
