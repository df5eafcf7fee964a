#pragma once

#include <span>
#include <vector>

#include "sphereframe/quadrature.hpp"
#include "sphereframe/types.hpp"

namespace sphereframe {

/// Evaluation plan for a finite harmonic expansion sum c(n,k) Y_k^{d,n}.
///
/// Per point, every factor C_m^{lambda}(cos theta) sin^a(theta) that any term needs
/// is tabulated once (one recurrence per level and |k_{j+1}|), together with the
/// powers of exp(i theta_1). Each term is then a short product of table lookups.
class ExpansionPlan {
public:
  struct Workspace {
    std::vector<double> tables;
    std::vector<Complex> phase;
  };

  ExpansionPlan() = default;
  explicit ExpansionPlan(const CoeffTable& table);
  /// Unit coefficients on the given keys; used through basis_values.
  static ExpansionPlan basis(int d, const std::vector<HarmonicKey>& keys);

  int dim() const noexcept { return d_; }
  int max_degree() const noexcept { return nmax_; }
  std::size_t terms() const noexcept { return coef_.size(); }
  const std::vector<HarmonicKey>& keys() const noexcept { return keys_; }

  Workspace workspace() const;

  Complex evaluate(const PointTrig& p, Workspace& ws) const;
  /// out[t] = Y of term t (normalization included, coefficient excluded).
  void basis_values(const PointTrig& p, Workspace& ws, std::span<Complex> out) const;

  Complex evaluate(const CartesianPoint& x) const;
  Complex evaluate(const SphericalPoint& p) const;

  /// Parallel over points.
  std::vector<Complex> evaluate_many(const std::vector<CartesianPoint>& xs) const;

private:
  struct Block {
    int level;
    int a;
    int length;
    int offset;
    double lambda;
  };

  void build(int d, const std::vector<HarmonicKey>& keys, const std::vector<Complex>& coeffs);
  void fill(const PointTrig& p, Workspace& ws) const;
  double radial(std::size_t t, const Workspace& ws) const;

  int d_ = 3;
  int nmax_ = -1;
  int mmax_ = 0;
  std::vector<HarmonicKey> keys_;
  std::vector<Block> blocks_;
  std::size_t table_size_ = 0;
  std::vector<Complex> coef_;      // c * A
  std::vector<int> offsets_;       // terms x (d-2) table positions
  std::vector<int> phase_index_;   // k_{d-2} + mmax
};

namespace harmonics {

/// Spec-level entry point: plan once, evaluate at every point (parallel).
std::vector<Complex> eval_expansion(int d, const CoeffTable& coeffs, const std::vector<SphericalPoint>& points);

/// Term-by-term summation with eval_harmonic; the serial reference.
Complex eval_expansion_reference(const CoeffTable& coeffs, const SphericalPoint& p);

/// Coefficients <F, Y_k^{d,n}> for n <= n_max from samples F on the rule nodes.
/// Every key of degree <= n_max is present in the result.
CoeffTable project(const quadrature::SphereRule& rule, std::span<const Complex> values, int n_max);

/// Coefficients of T(g)f, i.e. of f(g^{-1} .), by exact projection.
CoeffTable rotate_table(const CoeffTable& table, const Rotation& g);

/// The degree-n block t_{k,m}(g) = <T(g) Y_m, Y_k>, rows k and columns m in
/// index_set order. Throws ExactnessError if the rule is not exact on Pi_{2n}.
Eigen::MatrixXcd matrix_function_block(int d, int n, const Rotation& g, const quadrature::SphereRule& rule);

/// Single entry of the block above.
Complex matrix_function_numeric(int d, int n, const MultiIndex& k, const MultiIndex& m, const Rotation& g,
                                const quadrature::SphereRule& rule);

}  // namespace harmonics
}  // namespace sphereframe
