#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sphereframe/constructions.hpp"
#include "sphereframe/diagnostics.hpp"
#include "sphereframe/errors.hpp"
#include "sphereframe/expansion.hpp"
#include "sphereframe/frames.hpp"
#include "sphereframe/harmonics.hpp"
#include "sphereframe/specfun.hpp"
#include "test_support.hpp"

using namespace sphereframe;
namespace sc = sphereframe::constructions;

TEST_CASE("phi and kappa values") {
  CHECK(sc::phi(0.25) == 1.0);
  CHECK(sc::phi(0.75) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sc::phi(1.0) == 0.0);
  CHECK(sc::phi(3.0) == 0.0);
  CHECK(sc::kappa(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sc::kappa(0.5) == 0.0);
  CHECK(sc::kappa(2.0) == 0.0);
  CHECK(sc::kappa(0.3) == 0.0);
}

TEST_CASE("phi is C2 at the knots") {
  const double h = 1e-4;
  for (double t : {0.5, 1.0}) {
    const double dl = (sc::phi(t) - sc::phi(t - h)) / h;
    const double dr = (sc::phi(t + h) - sc::phi(t)) / h;
    CHECK(std::abs(dl - dr) < 1e-2);
    const double sl = (sc::phi(t) - 2 * sc::phi(t - h) + sc::phi(t - 2 * h)) / (h * h);
    const double sr = (sc::phi(t + 2 * h) - 2 * sc::phi(t + h) + sc::phi(t)) / (h * h);
    CHECK(std::abs(sl - sr) < 1e-1);
  }
}

TEST_CASE("kappa telescopes to one") {
  for (int n = 1; n <= 10000; ++n) {
    double s = 0.0;
    for (int j = 1; j <= 16; ++j) s += std::pow(sc::kappa(n / std::ldexp(1.0, j - 1)), 2);
    REQUIRE(std::abs(s - 1.0) < 1e-13);
  }
}

TEST_CASE("window values and supports") {
  CHECK(sc::kappa1(4, 3, 4) == doctest::Approx(8.0).epsilon(1e-14));
  for (int j = 1; j <= 6; ++j) {
    CHECK(sc::kappa1(4, j, (1 << j) + 1) == 0.0);
    CHECK(sc::kappa2(4, j, (1 << j) + 1) == 0.0);
  }
  CHECK(sc::kappa2(4, 3, 1) == 0.0);
  CHECK(sc::kappa2(4, 3, 2) == doctest::Approx(8.0 * std::sin(std::numbers::pi / 8.0)));
  // at most two windows overlap at any n
  for (int n = 1; n <= 512; ++n) {
    int count = 0;
    for (int j = 1; j <= 12; ++j) count += sc::kappa1(4, j, n) != 0.0;
    CHECK(count <= 2);
  }
  CHECK(sc::window_from_string("kappa2") == sc::Window::kappa2);
  CHECK_THROWS_AS(sc::window_from_string("kappa3"), ParameterError);
}

TEST_CASE("zeta rows are normalized") {
  for (int d : {4, 5}) {
    for (int K = 1; K <= 10; ++K) {
      for (int n = 1; n <= 64; ++n) {
        double s = 0.0;
        for (const auto& k : harmonics::index_set(d, n)) s += std::pow(sc::zeta(d, n, k, K), 2);
        REQUIRE(std::abs(s - 1.0) < 1e-12);
      }
    }
  }
  CHECK(sc::zeta(4, 5, MultiIndex{1, 1}, 4) == 0.0);
  CHECK(sc::zeta(4, 5, MultiIndex{1, 0}, 4) == 0.0);  // K_n - k_1 odd
  CHECK(sc::zeta(4, 5, MultiIndex{2, 0}, 4) != 0.0);
  CHECK_THROWS_AS(sc::zeta(3, 2, MultiIndex{0}, 1), UnsupportedDimensionError);
}

TEST_CASE("wavelets ignore rotations of the leading coordinates") {
  // SO(d-2) invariance: values depend on x_{d-1}, x_d only
  std::mt19937_64 rng(3);
  const int d = 5;
  const auto spec = sc::wavelet_spec(d, 3, 3, sc::Window::kappa1);
  const ExpansionPlan plan(spec.scales[3].coeffs);
  for (int t = 0; t < 5; ++t) {
    Eigen::VectorXd x = testsupport::random_unit(d, rng);
    Eigen::VectorXd y = x;
    // rotate the first d-2 coordinates, keeping x_{d-1}, x_d
    const auto h = testsupport::random_rotation(d - 2, rng);
    y.head(d - 2) = h.matrix() * x.head(d - 2);
    CHECK(std::abs(plan.evaluate(CartesianPoint(x)) - plan.evaluate(CartesianPoint(y))) < 1e-11);
  }
}

TEST_CASE("wavelet spec structure") {
  const auto spec = sc::wavelet_spec(4, 4, 7, sc::Window::kappa1);
  CHECK(spec.scales.size() == 8);
  CHECK(spec.scales[0].coeffs.get(0, MultiIndex{0, 0}) == Complex(1.0));
  CHECK(diagnostics::steerable_order(spec) == 4);
  CHECK(diagnostics::invariance_order(spec) == 2);
  for (int j = 1; j <= 7; ++j) CHECK(spec.scales[static_cast<std::size_t>(j)].N == (1 << j));
  const auto audit = diagnostics::audit_conditions(spec);
  // kappa vanishes at the left edge 2^{j-2}, so the first nonzero degree sits one above it
  for (const auto& a : audit) CHECK(a.M == (a.j == 1 ? 1 : (1 << (a.j - 2)) + 1));
  for (const auto& a : diagnostics::audit_conditions(sc::wavelet_spec(4, 4, 7, sc::Window::kappa2)))
    CHECK(a.M == (a.j == 1 ? 1 : 1 << (a.j - 2)));
  CHECK_NOTHROW(spec.validate());
  CHECK_THROWS_AS(sc::wavelet_spec(3, 2, 3, sc::Window::kappa1), UnsupportedDimensionError);
}

TEST_CASE("d = 3 wavelets from a user table") {
  sc::ZetaTable table;
  table[1] = {{1, std::sqrt(0.5)}, {-1, std::sqrt(0.5)}};
  table[2] = {{2, std::sqrt(0.5)}, {-2, std::sqrt(0.5)}};
  const auto spec = sc::wavelet_spec(3, 2, 4, sc::Window::kappa2, &table);
  const auto sig = frames::sigma_profile(spec, 16);
  for (int n = 1; n <= 16; ++n) {
    double want = 0.0;
    for (int j = 1; j <= 4; ++j) want += std::pow(sc::kappa2(3, j, n), 2);
    CHECK(sig[static_cast<std::size_t>(n)] == doctest::Approx(want / (2 * n + 1)));
  }
  // the last row is reused beyond degree 2
  CHECK(spec.scales[3].coeffs.get(5, MultiIndex{2}).real() ==
        doctest::Approx(sc::kappa2(3, 3, 5) * std::sqrt(0.5)));
}

TEST_CASE("wavelet sigma is positive through 2^{J-1}") {
  for (auto w : {sc::Window::kappa1, sc::Window::kappa2}) {
    const auto spec = sc::wavelet_spec(4, 4, 6, w);
    const auto sig = frames::sigma_profile(spec, 32);
    for (double s : sig) CHECK(s > 0.0);
  }
}

TEST_CASE("zonal spec structure") {
  const auto spec = sc::zonal_spec(3, 5, sc::Window::kappa1);
  CHECK(diagnostics::steerable_order(spec) == 0);
  CHECK(diagnostics::invariance_order(spec) == 2);
}

TEST_CASE("g0 is a signed permutation in SO(d)") {
  for (int d = 3; d <= 7; ++d) {
    const auto g = sc::make_g0(d).matrix();
    CHECK(g.determinant() == doctest::Approx(1.0));
    CHECK((g.transpose() * g - Eigen::MatrixXd::Identity(d, d)).norm() < 1e-15);
    CHECK(g(d - 2, 0) == 1.0);
    CHECK(g(d - 1, 1) == 1.0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) CHECK((g(i, j) == 0.0 || std::abs(g(i, j)) == 1.0));
  }
}

TEST_CASE("curvelet closed form matches the rotated expansion") {
  std::mt19937_64 rng(17);
  const int d = 4;
  const auto spec = sc::curvelet_spec(d, 5);
  const Eigen::MatrixXd g0t = spec.metadata.base_rotation->matrix().transpose();
  CHECK(diagnostics::steerable_order(spec) == 31);  // kappa(2) = 0 drops n = 32
  for (int j = 1; j <= 5; ++j) {
    const auto& scale = spec.scales[static_cast<std::size_t>(j)];
    const ExpansionPlan plan(scale.coeffs);
    for (int t = 0; t < 20; ++t) {
      const Eigen::VectorXd x = testsupport::random_unit(d, rng);
      const Complex v = plan.evaluate(CartesianPoint(g0t * x));
      const double closed = sc::curvelet_eval_closed(d, j, x);
      CHECK(std::abs(v.imag()) < 1e-10);
      CHECK(std::abs(v.real() - closed) < 1e-10 * std::max(1.0, std::abs(closed)));
    }
    for (int n = 1; n <= scale.N; ++n) {
      double e = 0.0;
      for (const auto& [key, c] : scale.coeffs)
        if (key.n == n) e += std::norm(c);
      CHECK(e == doctest::Approx(std::pow(sc::kappa1(d, j, n), 2)));
    }
  }
}

TEST_CASE("curvelet on the (e^{d-1}, e^d) circle") {
  const int d = 5;
  const int j = 3;
  for (double tau : {0.1, 0.7, 2.0}) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    x[d - 2] = std::sin(tau);
    x[d - 1] = std::cos(tau);
    double want = 0.0;
    for (int n = 1; n <= 8; ++n) {
      const MultiIndex top(std::vector<int>(d - 2, n));
      want += sc::kappa1(d, j, n) * std::exp(specfun::log_norm_A(d, n, top)) * std::cos(n * tau);
    }
    CHECK(sc::curvelet_eval_closed(d, j, x) == doctest::Approx(std::numbers::sqrt2 * want));
  }
}

TEST_CASE("polar samples") {
  const auto spec = sc::wavelet_spec(4, 4, 5, sc::Window::kappa1);
  Eigen::VectorXd a(2), b(2);
  a << 1.0, 0.0;
  b << std::cos(1.1), std::sin(1.1);
  const auto ga = sc::polar_sample(spec, 5, 24, 32, 1.0, a);
  const auto gb = sc::polar_sample(spec, 5, 24, 32, 1.0, b);
  CHECK(ga.values.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((ga.values - gb.values).cwiseAbs().maxCoeff() < 1e-10);
  for (int r = 0; r < 24; ++r)
    for (int c = 1; c < 32; ++c) CHECK(std::abs(ga.values(r, c) - ga.values(r, 32 - c)) < 1e-10);
  CHECK(ga.t.front() == 0.0);
  CHECK(ga.t.back() == 1.0);

  const auto csv = sc::to_csv(ga);
  CHECK(csv.rfind("t\\phi", 0) == 0);
  const auto pgm = sc::to_pgm(ga);
  CHECK(pgm.rfind("P5\n32 24\n255\n", 0) == 0);
  CHECK(pgm.size() == std::string("P5\n32 24\n255\n").size() + 24 * 32);
}

TEST_CASE("pgm rounding is half away from zero") {
  sc::PolarGrid g;
  g.t = {0.0};
  g.phi = {0.0, 1.0, 2.0};
  g.values.resize(1, 3);
  g.values << -1.0, 1.0, 0.0;  // 0.0 lands on 127.5
  const auto pgm = sc::to_pgm(g);
  const auto off = pgm.size() - 3;
  CHECK(static_cast<unsigned char>(pgm[off]) == 0);
  CHECK(static_cast<unsigned char>(pgm[off + 1]) == 255);
  CHECK(static_cast<unsigned char>(pgm[off + 2]) == 128);
}
