#pragma once

#include <compare>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sphereframe {

using Complex = std::complex<double>;

/// Index k = (k_1, ..., k_{d-2}) of a spherical harmonic within its degree.
/// Ordered lexicographically, which is also the enumeration order of index sets.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {}
  MultiIndex(std::initializer_list<int> entries) : entries_(entries) {}

  /// Dimension d implied by the length d - 2.
  int dim() const noexcept { return static_cast<int>(entries_.size()) + 2; }
  std::size_t size() const noexcept { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  int& operator[](std::size_t i) { return entries_[i]; }
  const std::vector<int>& entries() const noexcept { return entries_; }

  /// k_1 and k_{d-2}; identical when d = 3.
  int first() const { return entries_.front(); }
  int last() const { return entries_.back(); }

  /// True when k belongs to I_n^d.
  bool valid_for_degree(int n) const;

  std::string to_string() const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

private:
  std::vector<int> entries_;
};

/// Angles theta_1 in [0, 2pi), theta_2..theta_{d-1} in [0, pi].
/// angles[0] holds theta_1, angles[d-2] holds theta_{d-1}.
struct SphericalPoint {
  std::vector<double> angles;
  int dim() const noexcept { return static_cast<int>(angles.size()) + 1; }
};

using CartesianPoint = Eigen::VectorXd;

/// Element of SO(d) stored as a dense d x d matrix.
class Rotation {
public:
  Rotation() = default;
  explicit Rotation(Eigen::MatrixXd m) : m_(std::move(m)) {}

  static Rotation identity(int d) { return Rotation(Eigen::MatrixXd::Identity(d, d)); }
  /// Throws DomainError unless m is orthogonal with determinant one (tolerance tol).
  static Rotation checked(Eigen::MatrixXd m, double tol = 1e-10);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  Rotation inverse() const { return Rotation(m_.transpose()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return m_ * x; }
  Eigen::VectorXd apply_inverse(const Eigen::VectorXd& x) const { return m_.transpose() * x; }

  /// Block-embeds this rotation into the top-left corner of SO(d).
  Rotation embedded(int d) const;

  friend Rotation operator*(const Rotation& a, const Rotation& b) { return Rotation(a.m_ * b.m_); }

private:
  Eigen::MatrixXd m_;
};

struct HarmonicKey {
  int n = 0;
  MultiIndex k;
  friend auto operator<=>(const HarmonicKey&, const HarmonicKey&) = default;
  friend bool operator==(const HarmonicKey&, const HarmonicKey&) = default;
};

/// Sparse table (n, k) -> complex coefficient with respect to Y_k^{d,n}.
/// Iteration runs over degrees in increasing order, then index-set order.
class CoeffTable {
public:
  using Map = std::map<HarmonicKey, Complex>;

  explicit CoeffTable(int d = 3) : d_(d) {}

  int dim() const noexcept { return d_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Validates k against I_n^d; throws IndexError otherwise.
  void set(int n, const MultiIndex& k, Complex value);
  void add(int n, const MultiIndex& k, Complex value);
  Complex get(int n, const MultiIndex& k) const;
  bool contains(int n, const MultiIndex& k) const { return entries_.count({n, k}) > 0; }

  /// Largest degree carrying an entry; -1 for an empty table.
  int max_degree() const;
  double norm_sq() const;

  CoeffTable truncated(int n_max) const;
  CoeffTable scaled(Complex factor) const;

  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }

private:
  int d_;
  Map entries_;
};

}  // namespace sphereframe
