#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sphereframe/types.hpp"

namespace sphereframe {

/// Cosines and sines of theta_2..theta_{d-1} plus exp(i theta_1) of one point.
/// cos_t[l], sin_t[l] hold theta_l; slots 0 and 1 are unused.
struct PointTrig {
  std::vector<double> cos_t;
  std::vector<double> sin_t;
  Complex e1{1.0, 0.0};

  int dim() const noexcept { return static_cast<int>(cos_t.size()); }
};

/// Trig data straight from Cartesian coordinates, no inverse trig calls.
/// Scale invariant: x need not be exactly normalized.
void point_trig(const double* x, int d, PointTrig& out);
PointTrig point_trig(const CartesianPoint& x);
PointTrig point_trig(const SphericalPoint& p);

namespace quadrature {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  int exact_degree = 0;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss rule for (1 - t^2)^alpha on [-1, 1] via Golub-Welsch. Nodes ascending.
Rule1D gauss_symmetric_jacobi(int m, double alpha);

/// M equispaced nodes 2 pi r / M on [0, 2 pi) with weights 2 pi / M.
Rule1D circle_rule(int M);

/// Node cap shared by sphere and rotation rules. Defaults to 1e7, or to
/// SPHEREFRAME_MAX_NODES when that variable is set.
std::size_t max_nodes();
void set_max_nodes(std::size_t cap);
void reset_max_nodes();

/// Tensor-product rule on S^{d-1}, exact on Pi_{2N}. Nodes are generated on
/// demand from the one-dimensional factors; the weights sum to one.
class SphereRule {
public:
  SphereRule() = default;
  SphereRule(int d, int N);

  int dim() const noexcept { return d_; }
  int N() const noexcept { return N_; }
  int exact_degree() const noexcept { return 2 * N_; }
  std::size_t size() const noexcept { return size_; }

  double weight(std::size_t i) const;
  SphericalPoint node(std::size_t i) const;
  CartesianPoint cartesian(std::size_t i) const;
  void trig(std::size_t i, PointTrig& out) const;

  const Rule1D& circle() const noexcept { return circle_; }
  /// Factor in cos theta_{l+1}, l = 1..d-2.
  const Rule1D& polar(int l) const { return polar_[static_cast<std::size_t>(l - 1)]; }

private:
  void digits(std::size_t i, std::vector<std::size_t>& out) const;

  int d_ = 0;
  int N_ = 0;
  std::size_t size_ = 0;
  Rule1D circle_;
  std::vector<Rule1D> polar_;
  // sines of the polar nodes, indexed like polar_
  std::vector<std::vector<double>> polar_sin_;
};

SphereRule sphere_rule(int d, int N);

/// g_eta = G_{1,2}(theta_1) G_{2,3}(theta_2) ... G_{d-1,d}(theta_{d-1}), where
/// G_{a,b}(t) sends e^b to cos t e^b + sin t e^a. Satisfies g_eta e^d = eta.
Rotation section_rotation(const CartesianPoint& eta);
Rotation section_rotation(const SphericalPoint& eta);

/// h_{eta'} for eta' on S^{d-2}, embedded in SO(d) with e^d fixed.
Rotation embed_subsphere_rotation(const CartesianPoint& eta_prime);

enum class GridVariant { general, steerable, zonal, so_d2_invariant, steerable_so_d2 };

std::string to_string(GridVariant v);
GridVariant grid_variant_from_string(const std::string& s);

/// Positive-weight rule on SO(d). Composed rules keep only their factors;
/// rotation(i) multiplies the outer section with the embedded inner element.
class RotationRule {
public:
  RotationRule() = default;

  /// Explicit list, as loaded from a grid file.
  RotationRule(int d, int class_degree, GridVariant variant, std::optional<int> K,
               std::vector<Eigen::MatrixXd> rotations, std::vector<double> weights);

  int dim() const noexcept { return d_; }
  int class_degree() const noexcept { return class_degree_; }
  GridVariant variant() const noexcept { return variant_; }
  std::optional<int> K() const noexcept { return K_; }
  std::size_t size() const noexcept { return size_; }

  double weight(std::size_t i) const;
  Eigen::MatrixXd rotation(std::size_t i) const;

private:
  friend RotationRule rotation_rule(int, int, GridVariant, std::optional<int>);

  int d_ = 0;
  int class_degree_ = 0;
  GridVariant variant_ = GridVariant::general;
  std::optional<int> K_;
  std::size_t size_ = 0;

  // composed form
  std::shared_ptr<const SphereRule> outer_;
  std::shared_ptr<const RotationRule> inner_;
  // SO(2) base case
  int circle_points_ = 0;
  // explicit form
  std::vector<Eigen::MatrixXd> explicit_rotations_;
  std::vector<double> explicit_weights_;
};

/// Node count of rotation_rule(d, N, variant, K) without building it.
std::size_t rotation_rule_size(int d, int N, GridVariant variant, std::optional<int> K = std::nullopt);

/// Throws ParameterError if a steerable variant lacks K, CapacityError above the cap.
RotationRule rotation_rule(int d, int N, GridVariant variant, std::optional<int> K = std::nullopt);

}  // namespace quadrature
}  // namespace sphereframe
