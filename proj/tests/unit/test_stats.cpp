#include "doctest.h"
#include "hiercons/error.hpp"
#include "hiercons/random.hpp"
#include "hiercons/stats.hpp"

using namespace hiercons;

TEST_CASE("normal quantile against table values") {
  // Standard normal quantiles to 12 significant digits.
  const std::pair<double, double> table[] = {
      {0.5, 0.0},
      {0.975, 1.95996398454},
      {0.95, 1.64485362695},
      {0.05, -1.64485362695},
      {0.1, -1.28155156554},
      {0.01, -2.32634787404},
      {1e-6, -4.75342430882},
      {0.999, 3.09023230617},
  };
  for (const auto& [p, z] : table) CHECK(std::abs(normal_quantile(p) - z) < 1e-10);
  CHECK(std::isinf(normal_quantile(0.0)));
  CHECK(std::isinf(normal_quantile(1.0)));
  CHECK_THROWS_AS(normal_quantile(1.5), DomainError);
}

TEST_CASE("normal quantile inverts the cdf") {
  for (int k = 1; k < 1000; ++k) {
    const double p = k / 1000.0;
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) < 1e-12);
  }
}

TEST_CASE("compensated sum recovers small terms") {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
}

TEST_CASE("derived seeds are distinct and deterministic") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(uniform_below(rng, 7) < 7);
  }
}
