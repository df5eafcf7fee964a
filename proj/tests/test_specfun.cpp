#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sphereframe/errors.hpp"
#include "sphereframe/harmonics.hpp"
#include "sphereframe/quadrature.hpp"
#include "sphereframe/specfun.hpp"

using namespace sphereframe;

namespace {

// binomial(n + 2 lambda - 1, n) for half-integer lambda, by direct product
double binom_at_one(double lambda, int n) {
  long double v = 1.0L;
  for (int i = 1; i <= n; ++i) v *= (i + 2.0L * lambda - 1.0L) / i;
  return static_cast<double>(v);
}

// The measure and the unnormalized basis function both factor over the polar
// angles, so the normalization integral is a product of 1D Gauss sums.
double unnormalized_norm_sq(int d, int n, const MultiIndex& k, const quadrature::SphereRule& rule) {
  double total = 1.0;
  int upper = n;
  for (int j = 0; j <= d - 3; ++j) {
    const int a = std::abs(k[static_cast<std::size_t>(j)]);
    const auto& r = rule.polar(d - j - 2);
    double level = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double t = r.nodes[i];
      const double c = specfun::gegenbauer((d - j - 2) / 2.0 + a, upper - a, t);
      level += r.weights[i] * c * c * std::pow(1.0 - t * t, a);
    }
    total *= level;
    upper = a;
  }
  return total;
}

}  // namespace

TEST_CASE("gegenbauer small cases") {
  CHECK(specfun::gegenbauer(1.5, 0, 0.3) == 1.0);
  CHECK(specfun::gegenbauer(1.0, 2, 0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(specfun::gegenbauer(1.0, 2, 1.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(specfun::gegenbauer(0.0, 2, 0.1), ParameterError);
  CHECK_THROWS_AS(specfun::gegenbauer(-1.0, 2, 0.1), ParameterError);
}

TEST_CASE("gegenbauer value at one and parity") {
  for (double lambda : {0.5, 1.0, 1.5, 3.0}) {
    for (int n = 0; n <= 64; ++n) {
      const double expect = binom_at_one(lambda, n);
      CHECK(std::abs(specfun::gegenbauer(lambda, n, 1.0) - expect) <= 1e-12 * expect);
      CHECK(std::exp(specfun::log_gegenbauer_at_one(lambda, n)) == doctest::Approx(expect).epsilon(1e-12));
      for (double t : {0.1, 0.37, 0.9}) {
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        CHECK(specfun::gegenbauer(lambda, n, -t) == doctest::Approx(sign * specfun::gegenbauer(lambda, n, t)));
      }
    }
  }
}

TEST_CASE("gegenbauer table agrees with pointwise recurrence") {
  std::vector<double> out(20);
  specfun::gegenbauer_table(2.5, -0.3, out);
  for (int n = 0; n < 20; ++n) CHECK(out[n] == doctest::Approx(specfun::gegenbauer(2.5, n, -0.3)).epsilon(1e-14));
}

TEST_CASE("normalization pins degree zero") {
  CHECK(specfun::log_norm_A(3, 0, MultiIndex{0}) == 0.0);
  CHECK(specfun::log_norm_A(4, 0, MultiIndex{0, 0}) == 0.0);
  CHECK_THROWS_AS(specfun::log_norm_A(4, 2, MultiIndex{3, 0}), IndexError);
  CHECK_THROWS_AS(specfun::log_norm_A(4, 2, MultiIndex{1, 2}), IndexError);
  CHECK_THROWS_AS(specfun::log_norm_A(4, 2, MultiIndex{1}), IndexError);
}

TEST_CASE("normalization matches brute-force quadrature") {
  for (int d : {3, 4, 5}) {
    for (int n = 0; n <= 12; ++n) {
      const auto rule = quadrature::sphere_rule(d, n);
      for (const auto& k : harmonics::index_set(d, n)) {
        const double brute = 1.0 / std::sqrt(unnormalized_norm_sq(d, n, k, rule));
        const double a = std::exp(specfun::log_norm_A(d, n, k));
        CHECK(std::abs(a - brute) <= 1e-10 * brute);
      }
    }
  }
}

TEST_CASE("log domain survives large degree") {
  const double v = specfun::log_norm_A(4, 300, MultiIndex{300, 300});
  CHECK(std::isfinite(v));
  CHECK(std::isfinite(specfun::log_norm_A(5, 250, MultiIndex{120, 60, -3})));
}

TEST_CASE("q_d closed form") {
  CHECK(specfun::q_d(3, 0) == doctest::Approx(-0.25));
  CHECK(specfun::q_d(4, 0) == doctest::Approx(0.0));
  CHECK(specfun::q_d(4, 1) == doctest::Approx(2.0));
  CHECK(specfun::q_d(4, -1) == doctest::Approx(2.0));
}

TEST_CASE("Q_d values") {
  CHECK(specfun::Q_d(3, 0, 1) == doctest::Approx(2.0 / std::sqrt(15.0)).epsilon(1e-14));
  CHECK(specfun::Q_d(4, 0, 5) == doctest::Approx(0.5).epsilon(1e-15));
  for (int n : {100, 1000, 10000}) {
    const double dev = std::abs(specfun::Q_d(4, 2, n) - 0.5);
    // 1/2 - Q ~ q_d(k1) / (4 n^2) = 1.5 / n^2
    CHECK(dev * n * n < 2.0);
  }
  // |k1| = n + 1 is the edge of the range and gives zero
  CHECK(specfun::Q_d(4, 3, 2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(specfun::Q_d(4, 5, 1), DomainError);
}

TEST_CASE("Q_d differences decay like n^-3") {
  for (int k1 = 0; k1 <= 10; ++k1) {
    double worst = 0.0;
    for (int n = std::max(2, k1 + 1); n <= 10000; ++n) {
      const double dq = std::abs(specfun::Q_d(4, k1, n - 1) - specfun::Q_d(4, k1, n));
      worst = std::max(worst, dq * std::pow(static_cast<double>(n), 3));
    }
    CHECK(std::isfinite(worst));
    const double tail = std::abs(specfun::Q_d(4, k1, 9999) - specfun::Q_d(4, k1, 10000)) * 1e12;
    // the scaled difference settles to q_d(k1)/2
    CHECK(tail == doctest::Approx(specfun::q_d(4, k1) / 2.0).epsilon(1e-2).scale(1.0));
    CHECK(worst <= std::max(1.0, 10.0 * std::abs(specfun::q_d(4, k1))));
  }
}
