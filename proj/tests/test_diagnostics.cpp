#include <doctest.h>

#include <cmath>

#include "sphereframe/constructions.hpp"
#include "sphereframe/diagnostics.hpp"
#include "sphereframe/errors.hpp"
#include "sphereframe/frames.hpp"
#include "sphereframe/expansion.hpp"
#include "sphereframe/harmonics.hpp"
#include "sphereframe/specfun.hpp"
#include "test_support.hpp"

using namespace sphereframe;
namespace sc = sphereframe::constructions;
namespace dg = sphereframe::diagnostics;

namespace {

MultiIndex zero_index(int d) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(d - 2), 0)); }

// rotation in the (e^{d-2}, e^{d-1}) plane, fixing e^d
Rotation plane_rotation(int d, double a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
  m(d - 3, d - 3) = std::cos(a);
  m(d - 3, d - 2) = -std::sin(a);
  m(d - 2, d - 3) = std::sin(a);
  m(d - 2, d - 2) = std::cos(a);
  return Rotation(m);
}

}  // namespace

TEST_CASE("structure orders") {
  FrameSpec s;
  s.d = 5;
  CoeffTable c(5);
  c.set(3, MultiIndex{2, 1, 0}, 1.0);
  s.scales.push_back(Scale{0, 3, c});
  CHECK(dg::steerable_order(s) == 2);
  CHECK(dg::invariance_order(s) == 2);
  s.scales[0].coeffs.set(3, MultiIndex{2, 1, 1}, 1.0);
  CHECK_FALSE(dg::invariance_order(s).has_value());
  CHECK_FALSE(dg::steerable_order(FrameSpec{}).has_value());
}

TEST_CASE("spectral center of mass: hand cases") {
  for (int d : {3, 4, 5}) {
    CoeffTable one(d);
    one.set(2, zero_index(d), 1.0);
    CHECK(dg::xi0_d_spectral(one).value == 0.0);

    CoeffTable two(d);
    two.set(0, zero_index(d), 1.0);
    two.set(1, zero_index(d), 1.0);
    CHECK(dg::xi0_d_spectral(two).times_normsq == doctest::Approx(2.0 * specfun::Q_d(d, 0, 0)));
    CHECK_THROWS_AS(dg::xi0_d_spectral(CoeffTable(d)), DegenerateSignalError);
  }
}

TEST_CASE("spectral and quadrature centers of mass agree") {
  for (int d : {3, 4, 5}) {
    for (int N : {2, 7, 12}) {
      const auto f = Signal::random(d, N, 100 + d * 13 + N);
      const double spectral = dg::xi0_d_spectral(f.coeffs).value;
      const auto numeric = dg::xi0_numeric(f.coeffs);
      CHECK(std::abs(spectral - numeric[d - 1]) < 1e-12);
    }
  }
  const auto spec = sc::wavelet_spec(4, 4, 4, sc::Window::kappa1);
  const auto& psi = spec.scales[4].coeffs;
  const auto v = dg::xi0_numeric(psi);
  CHECK(std::abs(dg::xi0_d_spectral(psi).value - v[3]) < 1e-8);
  CHECK(v[3] > 0.85);
  CHECK(v.head(3).norm() < 1e-12);
}

TEST_CASE("center of mass needs an exact rule") {
  const auto f = Signal::random(4, 5, 1);
  CHECK_THROWS_AS(dg::xi0_numeric(f.coeffs, quadrature::sphere_rule(4, 5)), ExactnessError);
  CoeffTable one(4);
  one.set(0, zero_index(4), 1.0);
  CHECK(dg::xi0_numeric(one).norm() < 1e-15);
}

TEST_CASE("variances") {
  const int d = 4;
  CoeffTable y(d);
  y.set(3, MultiIndex{1, -1}, 1.0);
  CHECK(dg::var_momentum(y) == doctest::Approx(3.0 * 5.0));
  CoeffTable one(d);
  one.set(0, zero_index(d), 2.0);
  CHECK(dg::var_momentum(one) == 0.0);
  CHECK_THROWS_AS(dg::var_momentum(CoeffTable(d)), DegenerateSignalError);
  CHECK_THROWS_AS(dg::var_space(one), DegenerateSignalError);

  for (int seed = 0; seed < 6; ++seed) {
    const auto f = Signal::random(d, 6, static_cast<std::uint64_t>(seed));
    const auto v = dg::var_space(f.coeffs);
    CHECK(v.upper >= v.exact * (1 - 1e-12));
    CHECK(dg::var_momentum(f.coeffs) <= 6.0 * (6 + d - 2));
    CHECK(dg::uncertainty_product(f.coeffs) >= (d - 1) * (d - 1) / 4.0 * (1 - 1e-10));
  }
}

TEST_CASE("variances under rotation and phase") {
  std::mt19937_64 rng(8);
  const int d = 4;
  const auto f = Signal::random(d, 5, 21);
  const auto g = testsupport::random_rotation(d, rng);
  const auto rotated = harmonics::rotate_table(f.coeffs, g);
  CHECK(dg::var_momentum(rotated) == doctest::Approx(dg::var_momentum(f.coeffs)).epsilon(1e-12));
  CHECK(dg::var_space(rotated).exact == doctest::Approx(dg::var_space(f.coeffs).exact).epsilon(1e-10));
  const auto phased = f.coeffs.scaled(Complex(std::cos(0.4), std::sin(0.4)));
  CHECK(dg::var_space(phased).exact == doctest::Approx(dg::var_space(f.coeffs).exact).epsilon(1e-12));
}

TEST_CASE("localization report for wavelets") {
  const auto spec = sc::wavelet_spec(4, 4, 6, sc::Window::kappa2);
  const auto rep = dg::localization_report(spec, {3, 4, 5, 6});
  REQUIRE(rep.size() == 4);
  for (const auto& r : rep) {
    CHECK(r.var_space >= 0.0);
    CHECK(r.var_space_upper >= r.var_space * (1 - 1e-12));
    CHECK(r.uncertainty_product >= 2.25 * (1 - 1e-10));
    CHECK(r.var_space * std::pow(4.0, r.j) < 200.0);
  }
  CHECK(dg::localization_report(spec).size() == 6);
}

TEST_CASE("audit reports") {
  const auto spec = sc::wavelet_spec(4, 4, 8, sc::Window::kappa1);
  const auto audit = dg::audit_conditions(spec);
  REQUIRE(audit.size() == 8);
  double lo = 1e300, hi = 0.0;
  for (const auto& a : audit) {
    CHECK(a.M >= (a.j == 1 ? 1 : 1 << (a.j - 2)));
    CHECK(a.m_ratio == doctest::Approx(double(a.M) / a.N));
    if (a.j >= 3) {
      lo = std::min(lo, a.c1_ratio);
      hi = std::max(hi, a.c1_ratio);
    }
  }
  CHECK(hi / lo < 2.0);

  // second difference of a constant vanishes away from the support edges
  FrameSpec flat;
  flat.d = 3;
  CoeffTable c(3);
  for (int n = 0; n <= 6; ++n) c.set(n, MultiIndex{0}, 1.0);
  flat.scales.push_back(Scale{0, 0, CoeffTable(3)});
  flat.scales[0].coeffs.set(0, MultiIndex{0}, 1.0);
  flat.scales.push_back(Scale{1, 6, c});
  const auto fa = dg::audit_conditions(flat);
  REQUIRE(fa.size() == 1);
  CHECK(fa[0].c3 == doctest::Approx(0.5 * std::pow(6.0, 1.5)));  // support edges only

  FrameSpec single;
  single.d = 3;
  single.scales.push_back(Scale{1, 6, c});
  CHECK_THROWS_AS(dg::audit_conditions(single), ParameterError);
}

TEST_CASE("autocorrelation at the identity is the energy") {
  const auto spec = sc::wavelet_spec(4, 4, 4, sc::Window::kappa1);
  const auto a = dg::autocorrelation(spec, 3, Rotation::identity(3));
  CHECK(std::abs(a - spec.scales[3].coeffs.norm_sq()) < 1e-10 * spec.scales[3].coeffs.norm_sq());
}

TEST_CASE("autocorrelation closed form") {
  std::mt19937_64 rng(5);
  const int d = 4;
  const auto spec = sc::wavelet_spec(d, 4, 4, sc::Window::kappa1);
  const double e = spec.scales[4].coeffs.norm_sq();
  for (int t = 0; t < 4; ++t) {
    const auto h = testsupport::random_rotation(d - 1, rng);
    const Complex numeric = dg::autocorrelation(spec, 4, h);
    const double closed = dg::autocorrelation_closed(spec, 4, dg::autocorrelation_argument(h, d));
    CHECK(std::abs(numeric.real() - closed) < 1e-8 * e);
    CHECK(std::abs(numeric.imag()) < 1e-8 * e);
  }
  CHECK(dg::autocorrelation_closed(spec, 4, 1.0) == doctest::Approx(e));
  // d-1 embedded and full-size inputs give the same value
  const auto h = plane_rotation(d, 0.3);
  CHECK(dg::autocorrelation_argument(h, d) == doctest::Approx(std::cos(0.3)));
  CHECK_THROWS_AS(dg::autocorrelation_argument(testsupport::random_rotation(d, rng), d), DomainError);

  auto rotated = sc::curvelet_spec(d, 3);
  CHECK_THROWS_AS(dg::autocorrelation_closed(rotated, 2, 0.5), ShapeError);
  auto broken = spec;
  broken.scales[4].coeffs.set(8, MultiIndex{1, 0}, 0.3);
  CHECK_THROWS_AS(dg::autocorrelation_closed(broken, 4, 0.5), ShapeError);
}

TEST_CASE("zonal autocorrelation is flat") {
  std::mt19937_64 rng(9);
  const auto spec = sc::zonal_spec(4, 4, sc::Window::kappa1);
  const Complex base = dg::autocorrelation(spec, 3, Rotation::identity(3));
  for (int t = 0; t < 5; ++t) {
    const Complex a = dg::autocorrelation(spec, 3, testsupport::random_rotation(3, rng));
    CHECK(std::abs(a - base) < 1e-12 * std::abs(base));
  }
}
