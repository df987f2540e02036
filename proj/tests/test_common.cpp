#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hololab/common.hpp"

using namespace hololab;

TEST_CASE("derive_seed separates labels and indices") {
  const std::uint64_t master = 42;
  CHECK(derive_seed(master, "alpha") != derive_seed(master, "beta"));
  CHECK(derive_seed(master, "alpha", 0) != derive_seed(master, "alpha", 1));
  CHECK(derive_seed(master, "alpha", 7) == derive_seed(master, "alpha", 7));
  CHECK(derive_seed(1, "alpha") != derive_seed(2, "alpha"));
}

TEST_CASE("RngStream is deterministic and stream-independent") {
  RngStream a(123), b(123);
  for (int i = 0; i < 100; ++i) REQUIRE(a.uniform() == b.uniform());

  // a derived stream is unaffected by draws on its sibling
  RngStream c = RngStream::derive(9, "stream", 0);
  RngStream d = RngStream::derive(9, "stream", 1);
  for (int i = 0; i < 3; ++i) (void)d.uniform();
  RngStream c2 = RngStream::derive(9, "stream", 0);
  for (int i = 0; i < 10; ++i) REQUIRE(c.uniform() == c2.uniform());
}

TEST_CASE("uniform lies in [0,1) and uniform_int covers its range") {
  RngStream rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) ++hits[rng.uniform_int(0, 4)];
  for (int h : hits) CHECK(h > 800);  // ~1000 each
}

TEST_CASE("gaussian moments") {
  RngStream rng(2024);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("probit inverts the normal CDF") {
  for (double p : {0.001, 0.1, 0.25, 0.5, 0.75, 0.9, 0.999}) {
    CHECK(std::abs(normal_cdf(probit(p)) - p) < 1e-9);
  }
  CHECK(probit(0.5) == Catch::Approx(0.0).margin(1e-12));
  CHECK_THROWS_AS(probit(0.0), std::invalid_argument);
  CHECK_THROWS_AS(probit(1.0), std::invalid_argument);
}

TEST_CASE("linear fit recovers exact lines") {
  std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  std::vector<double> y = {3.0, 5.0, 7.0, 9.0};
  const auto f = fit_linear(x, y);
  CHECK(f.slope == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(f.intercept == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(f.r2 == Catch::Approx(1.0).epsilon(1e-12));

  // constant target: slope 0, r2 pinned to 1
  std::vector<double> yc = {4.0, 4.0, 4.0, 4.0};
  const auto fc = fit_linear(x, yc);
  CHECK(fc.slope == Catch::Approx(0.0).margin(1e-12));
  CHECK(fc.r2 == 1.0);

  std::vector<double> xs = {2.0, 2.0, 2.0, 2.0};
  CHECK_THROWS_AS(fit_linear(xs, y), std::invalid_argument);
}
