#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "redpath/gof.hpp"

using namespace redpath;

TEST_CASE("normal cdf") {
  CHECK(standard_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(standard_normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(standard_normal_cdf(-1.0) + standard_normal_cdf(1.0) == doctest::Approx(1.0));
}

TEST_CASE("kolmogorov tail") {
  CHECK(kolmogorov_tail(0.0) == 1.0);
  CHECK(kolmogorov_tail(1.3580986393225507) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(kolmogorov_tail(1.2238478702170823) == doctest::Approx(0.10).epsilon(1e-6));
  CHECK(kolmogorov_tail(5.0) < 1e-20);
  for (double x = 0.1; x < 3.0; x += 0.1) CHECK(kolmogorov_tail(x) >= kolmogorov_tail(x + 0.1));
}

TEST_CASE("ks statistic by hand") {
  // Uniform reference, samples {0.1, 0.4, 0.7}: D = max(1/3 - 0.1, 2/3 - 0.4, 1 - 0.7, 0.4 - 1/3, 0.7 - 2/3) = 0.3.
  const std::vector<double> x{0.7, 0.1, 0.4};
  CHECK(ks_test(x, "uniform").statistic == doctest::Approx(0.3).epsilon(1e-12));

  // Ties: all mass at 0.5 gives D = 0.5.
  const std::vector<double> tied{0.5, 0.5, 0.5, 0.5};
  CHECK(ks_test(tied, "uniform").statistic == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(ks_test(std::vector<double>{}, "normal"), std::invalid_argument);
  CHECK_THROWS_AS(reference_cdf("cauchy"), std::invalid_argument);
}

TEST_CASE("ks on exact samples") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> z;
  std::vector<double> normal(20000), half(20000), shifted(20000);
  for (std::size_t i = 0; i < normal.size(); ++i) {
    normal[i] = z(rng);
    half[i] = std::abs(z(rng));
    shifted[i] = z(rng) + 0.1;
  }
  const auto a = ks_test(normal, "normal");
  CHECK(a.statistic < 1.63 / std::sqrt(20000.0));  // 1% critical value
  CHECK(a.p_value > 0.01);
  CHECK(ks_test(half, "half-normal").p_value > 0.01);
  CHECK(ks_test(shifted, "normal").p_value < 1e-6);
}
