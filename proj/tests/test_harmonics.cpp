#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sphereframe/errors.hpp"
#include "sphereframe/expansion.hpp"
#include "sphereframe/harmonics.hpp"
#include "sphereframe/quadrature.hpp"
#include "sphereframe/specfun.hpp"
#include "test_support.hpp"

using namespace sphereframe;
using namespace sphereframe::harmonics;

TEST_CASE("dimension of harmonic spaces") {
  CHECK(dim_harmonic(3, 2) == 5);
  CHECK(dim_harmonic(4, 1) == 4);
  CHECK(dim_harmonic(4, 3) == 16);
  CHECK(dim_harmonic(5, 3) == 30);
  for (int d = 3; d <= 7; ++d) CHECK(dim_harmonic(d, 0) == 1);
  CHECK_THROWS_AS(dim_harmonic(2, 1), ParameterError);
  // dim Pi_N(S^{d-1}) equals dim H_N^{d+1}
  for (int N = 0; N <= 10; ++N) CHECK(dim_polynomial(4, N) == dim_harmonic(5, N));
}

TEST_CASE("index sets") {
  const auto s3 = index_set(3, 1);
  REQUIRE(s3.size() == 3);
  CHECK(s3[0] == MultiIndex{-1});
  CHECK(s3[1] == MultiIndex{0});
  CHECK(s3[2] == MultiIndex{1});
  const auto s4 = index_set(4, 1);
  REQUIRE(s4.size() == 4);
  CHECK(s4[0] == MultiIndex{0, 0});
  CHECK(s4[1] == MultiIndex{1, -1});
  CHECK(s4[2] == MultiIndex{1, 0});
  CHECK(s4[3] == MultiIndex{1, 1});
  for (int d = 3; d <= 6; ++d) {
    for (int n = 0; n <= 6; ++n) {
      const auto s = index_set(d, n);
      CHECK(static_cast<std::int64_t>(s.size()) == dim_harmonic(d, n));
      CHECK(std::is_sorted(s.begin(), s.end()));
      for (const auto& k : s) CHECK(k.valid_for_degree(n));
    }
  }
}

TEST_CASE("coordinate conversions") {
  std::mt19937_64 rng(7);
  for (int d = 2; d <= 6; ++d) {
    Eigen::VectorXd pole = Eigen::VectorXd::Zero(d);
    pole[d - 1] = 1.0;
    const auto p = to_spherical(pole);
    for (double a : p.angles) CHECK(a == 0.0);
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = testsupport::random_unit(d, rng);
      const auto back = to_cartesian(to_spherical(x));
      CHECK((back - x).norm() < 1e-12);
      const auto sp = to_spherical(x);
      CHECK(sp.angles[0] >= 0.0);
      CHECK(sp.angles[0] < 2.0 * std::numbers::pi);
    }
  }
  const auto p = to_spherical(Eigen::Vector3d(1.0, 0.0, 0.0));
  CHECK(p.angles[0] == doctest::Approx(std::numbers::pi / 2));
  CHECK(p.angles[1] == doctest::Approx(std::numbers::pi / 2));
  CHECK_THROWS_AS(to_spherical(Eigen::Vector3d(1.0, 1.0, 0.0)), DomainError);
}

TEST_CASE("point trig agrees with spherical angles") {
  std::mt19937_64 rng(8);
  for (int d = 3; d <= 6; ++d) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = testsupport::random_unit(d, rng);
      const auto a = point_trig(x);
      const auto b = point_trig(to_spherical(x));
      for (int l = 2; l < d; ++l) {
        CHECK(a.cos_t[l] == doctest::Approx(b.cos_t[l]).epsilon(1e-12));
        CHECK(a.sin_t[l] == doctest::Approx(b.sin_t[l]).epsilon(1e-12));
      }
      CHECK(std::abs(a.e1 - b.e1) < 1e-12);
    }
  }
}

TEST_CASE("basis values") {
  std::mt19937_64 rng(9);
  for (int d = 3; d <= 5; ++d) {
    const auto p = to_spherical(testsupport::random_unit(d, rng));
    CHECK(std::abs(eval_harmonic(d, 0, MultiIndex(std::vector<int>(d - 2, 0)), p) - 1.0) < 1e-15);
    for (int n = 1; n <= 5; ++n) {
      for (const auto& k : index_set(d, n)) {
        std::vector<int> flipped = k.entries();
        flipped.back() = -flipped.back();
        const auto y = eval_harmonic(d, n, k, p);
        const auto yf = eval_harmonic(d, n, MultiIndex(flipped), p);
        CHECK(std::abs(std::conj(y) - yf) < 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(eval_harmonic(4, 1, MultiIndex{2, 0}, to_spherical(Eigen::Vector4d(0, 0, 0, 1))), IndexError);
}

TEST_CASE("addition theorem") {
  std::mt19937_64 rng(10);
  for (int d = 3; d <= 5; ++d) {
    CHECK(addition_kernel(d, 4, 1.0) == doctest::Approx(static_cast<double>(dim_harmonic(d, 4))));
    for (int trial = 0; trial < 5; ++trial) {
      const auto nu = testsupport::random_unit(d, rng);
      const auto eta = testsupport::random_unit(d, rng);
      const auto pn = to_spherical(nu);
      const auto pe = to_spherical(eta);
      for (int n = 0; n <= 10; ++n) {
        Complex sum{};
        for (const auto& k : index_set(d, n)) sum += std::conj(eval_harmonic(d, n, k, pn)) * eval_harmonic(d, n, k, pe);
        CHECK(std::abs(sum - addition_kernel(d, n, nu.dot(eta))) < 1e-10 * dim_harmonic(d, n));
      }
    }
  }
  CHECK(addition_kernel(3, 1, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("expansion plan agrees with term-by-term summation") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int d = 3; d <= 5; ++d) {
    CoeffTable table(d);
    const auto keys = basis_keys(d, 7);
    std::uniform_int_distribution<std::size_t> pick(0, keys.size() - 1);
    for (int i = 0; i < 10; ++i) {
      const auto& key = keys[pick(rng)];
      table.set(key.n, key.k, Complex(g(rng), g(rng)));
    }
    std::vector<SphericalPoint> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(to_spherical(testsupport::random_unit(d, rng)));
    const auto fast = eval_expansion(d, table, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(std::abs(fast[i] - eval_expansion_reference(table, pts[i])) < 1e-13 * (1.0 + std::abs(fast[i])));
    }
    // single term equals the basis function
    CoeffTable one(d);
    one.set(keys.back().n, keys.back().k, 1.0);
    CHECK(std::abs(ExpansionPlan(one).evaluate(pts[0]) - eval_harmonic(d, keys.back().n, keys.back().k, pts[0])) <
          1e-13);
    const auto zero = eval_expansion(d, CoeffTable(d), pts);
    for (const auto& z : zero) CHECK(z == Complex{});
  }
}

TEST_CASE("evaluation at the poles and coordinate singularities") {
  for (int d = 3; d <= 5; ++d) {
    Eigen::VectorXd pole = Eigen::VectorXd::Zero(d);
    pole[d - 1] = -1.0;
    const auto p = to_spherical(pole);
    const auto pt = point_trig(pole);
    for (int n = 0; n <= 4; ++n) {
      for (const auto& k : index_set(d, n)) {
        CoeffTable one(d);
        one.set(n, k, 1.0);
        CHECK(std::abs(ExpansionPlan(one).evaluate(pole) - eval_harmonic(d, n, k, p)) < 1e-12);
      }
    }
    CHECK(pt.cos_t[d - 1] == -1.0);
  }
}

TEST_CASE("matrix functions") {
  std::mt19937_64 rng(12);
  const int d = 4;
  const auto rule = quadrature::sphere_rule(d, 4);
  const auto id = matrix_function_block(d, 3, Rotation::identity(d), rule);
  CHECK((id - Eigen::MatrixXcd::Identity(id.rows(), id.cols())).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(matrix_function_block(d, 3, Rotation::identity(d), quadrature::sphere_rule(d, 2)),
                  ExactnessError);

  for (int trial = 0; trial < 3; ++trial) {
    const auto g = testsupport::random_rotation(d, rng);
    for (int n = 0; n <= 4; ++n) {
      const auto t = matrix_function_block(d, n, g, rule);
      // unitary degree block
      CHECK((t.adjoint() * t - Eigen::MatrixXcd::Identity(t.rows(), t.cols())).cwiseAbs().maxCoeff() < 1e-12);
      // Y_m(g^{-1} eta) = sum_k t_{k,m}(g) Y_k(eta)
      const auto set = index_set(d, n);
      const auto eta = testsupport::random_unit(d, rng);
      const auto pe = to_spherical(eta);
      const auto pg = to_spherical(g.apply_inverse(eta));
      for (std::size_t m = 0; m < set.size(); ++m) {
        Complex rhs{};
        for (std::size_t k = 0; k < set.size(); ++k) rhs += t(k, m) * eval_harmonic(d, n, set[k], pe);
        CHECK(std::abs(eval_harmonic(d, n, set[m], pg) - rhs) < 1e-10);
      }
    }
  }
  const auto set = index_set(d, 2);
  const auto g = testsupport::random_rotation(d, rng);
  CHECK(std::abs(matrix_function_numeric(d, 2, set[1], set[3], g, rule) -
                 matrix_function_block(d, 2, g, rule)(1, 3)) < 1e-15);
}

TEST_CASE("subgroup rotations keep the leading index") {
  std::mt19937_64 rng(13);
  const int d = 4;
  const auto rule = quadrature::sphere_rule(d, 4);
  const auto h = testsupport::random_rotation(d - 1, rng).embedded(d);
  for (int n = 1; n <= 4; ++n) {
    const auto t = matrix_function_block(d, n, h, rule);
    const auto set = index_set(d, n);
    for (std::size_t k = 0; k < set.size(); ++k)
      for (std::size_t m = 0; m < set.size(); ++m)
        if (set[k].first() != set[m].first()) CHECK(std::abs(t(k, m)) < 1e-12);
  }
  // d = 3: rotation in the (x1, x2) plane acts diagonally by exp(i k gamma)
  const double gamma = 0.7;
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  r(0, 0) = std::cos(gamma);
  r(1, 0) = std::sin(gamma);
  r(0, 1) = -std::sin(gamma);
  r(1, 1) = std::cos(gamma);
  const auto rule3 = quadrature::sphere_rule(3, 5);
  for (int n = 0; n <= 5; ++n) {
    const auto t = matrix_function_block(3, n, Rotation(r), rule3);
    const auto set = index_set(3, n);
    for (std::size_t k = 0; k < set.size(); ++k) {
      for (std::size_t m = 0; m < set.size(); ++m) {
        const Complex expect = k == m ? std::polar(1.0, set[k].first() * gamma) : Complex{};
        CHECK(std::abs(t(k, m) - expect) < 1e-10);
      }
    }
  }
}

TEST_CASE("rotation preserves degree-wise energy") {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> g;
  const int d = 4;
  CoeffTable table(d);
  for (const auto& k : index_set(d, 3)) table.set(3, k, Complex(g(rng), g(rng)));
  const auto rotated = rotate_table(table, testsupport::random_rotation(d, rng));
  CHECK(rotated.norm_sq() == doctest::Approx(table.norm_sq()).epsilon(1e-12));
  double off = 0.0;
  for (const auto& [key, c] : rotated)
    if (key.n != 3) off += std::norm(c);
  CHECK(off < 1e-24);
}
