#include "sphereframe/harmonics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "sphereframe/errors.hpp"
#include "sphereframe/specfun.hpp"

namespace sphereframe {

bool MultiIndex::valid_for_degree(int n) const {
  if (n < 0 || entries_.empty()) return false;
  int upper = n;
  for (std::size_t i = 0; i + 1 < entries_.size(); ++i) {
    if (entries_[i] < 0 || entries_[i] > upper) return false;
    upper = entries_[i];
  }
  return std::abs(entries_.back()) <= upper;
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ',';
    os << entries_[i];
  }
  os << ')';
  return os.str();
}

Rotation Rotation::checked(Eigen::MatrixXd m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1) throw DomainError("rotation must be a square matrix");
  const auto d = m.rows();
  const double orth = (m * m.transpose() - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (orth > tol) throw DomainError("matrix is not orthogonal (deviation " + std::to_string(orth) + ")");
  const double det = m.determinant();
  if (std::abs(det - 1.0) > tol) throw DomainError("matrix determinant is " + std::to_string(det) + ", not 1");
  return Rotation(std::move(m));
}

Rotation Rotation::embedded(int d) const {
  if (d < dim()) throw ParameterError("cannot embed a rotation into a smaller group");
  Eigen::MatrixXd big = Eigen::MatrixXd::Identity(d, d);
  big.topLeftCorner(dim(), dim()) = m_;
  return Rotation(std::move(big));
}

void CoeffTable::set(int n, const MultiIndex& k, Complex value) {
  if (k.dim() != d_ || !k.valid_for_degree(n)) {
    throw IndexError("index " + k.to_string() + " not in I_" + std::to_string(n) + "^" + std::to_string(d_));
  }
  entries_[HarmonicKey{n, k}] = value;
}

void CoeffTable::add(int n, const MultiIndex& k, Complex value) {
  if (k.dim() != d_ || !k.valid_for_degree(n)) {
    throw IndexError("index " + k.to_string() + " not in I_" + std::to_string(n) + "^" + std::to_string(d_));
  }
  entries_[HarmonicKey{n, k}] += value;
}

Complex CoeffTable::get(int n, const MultiIndex& k) const {
  const auto it = entries_.find(HarmonicKey{n, k});
  return it == entries_.end() ? Complex{} : it->second;
}

int CoeffTable::max_degree() const { return entries_.empty() ? -1 : entries_.rbegin()->first.n; }

double CoeffTable::norm_sq() const {
  double acc = 0.0;
  for (const auto& [key, v] : entries_) acc += std::norm(v);
  return acc;
}

CoeffTable CoeffTable::truncated(int n_max) const {
  CoeffTable out(d_);
  for (const auto& [key, v] : entries_) {
    if (key.n > n_max) break;
    out.entries_.emplace_hint(out.entries_.end(), key, v);
  }
  return out;
}

CoeffTable CoeffTable::scaled(Complex factor) const {
  CoeffTable out(*this);
  for (auto& [key, v] : out.entries_) v *= factor;
  return out;
}

namespace harmonics {

std::int64_t dim_harmonic(int d, int n) {
  if (d < 3) throw ParameterError("dim_harmonic: d must be >= 3");
  if (n < 0) throw ParameterError("dim_harmonic: negative degree");
  if (n == 0) return 1;
  // binomial(n + d - 3, d - 3), built so every partial product is an integer
  std::int64_t binom = 1;
  for (int i = 1; i <= d - 3; ++i) binom = binom * (n + i) / i;
  return (2 * static_cast<std::int64_t>(n) + d - 2) * binom / (d - 2);
}

std::int64_t dim_polynomial(int d, int N) {
  std::int64_t total = 0;
  for (int n = 0; n <= N; ++n) total += dim_harmonic(d, n);
  return total;
}

namespace {

void enumerate(int d, int level, int upper, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  if (level == d - 3) {
    for (int v = -upper; v <= upper; ++v) {
      prefix.push_back(v);
      out.emplace_back(prefix);
      prefix.pop_back();
    }
    return;
  }
  for (int v = 0; v <= upper; ++v) {
    prefix.push_back(v);
    enumerate(d, level + 1, v, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> index_set(int d, int n) {
  if (d < 3) throw ParameterError("index_set: d must be >= 3");
  if (n < 0) throw ParameterError("index_set: negative degree");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(dim_harmonic(d, n)));
  std::vector<int> prefix;
  enumerate(d, 0, n, prefix, out);
  return out;
}

std::vector<HarmonicKey> basis_keys(int d, int n_max) {
  std::vector<HarmonicKey> keys;
  for (int n = 0; n <= n_max; ++n) {
    for (auto& k : index_set(d, n)) keys.push_back({n, std::move(k)});
  }
  return keys;
}

SphericalPoint to_spherical(const CartesianPoint& x) {
  const int d = static_cast<int>(x.size());
  if (d < 2) throw ParameterError("to_spherical: dimension must be >= 2");
  if (std::abs(x.norm() - 1.0) > 1e-8) {
    throw DomainError("to_spherical: point is off the sphere (norm " + std::to_string(x.norm()) + ")");
  }
  SphericalPoint p;
  p.angles.assign(static_cast<std::size_t>(d - 1), 0.0);
  // partial[l] = sqrt(x_1^2 + ... + x_l^2), 1-based l
  std::vector<double> partial(static_cast<std::size_t>(d + 1), 0.0);
  for (int l = 1; l <= d; ++l) partial[l] = std::hypot(partial[l - 1], x[l - 1]);
  for (int l = d - 1; l >= 2; --l) {
    if (partial[l + 1] == 0.0) break;  // remaining angles stay 0
    p.angles[l - 1] = std::atan2(partial[l], x[l]);
  }
  if (partial[2] != 0.0) {
    double t1 = std::atan2(x[0], x[1]);
    if (t1 < 0.0) t1 += 2.0 * std::numbers::pi;
    if (t1 >= 2.0 * std::numbers::pi) t1 = 0.0;
    p.angles[0] = t1;
  }
  return p;
}

CartesianPoint to_cartesian(const SphericalPoint& p) {
  const int d = p.dim();
  CartesianPoint x(d);
  double s = 1.0;
  for (int i = d; i >= 3; --i) {
    const double th = p.angles[static_cast<std::size_t>(i - 2)];
    x[i - 1] = s * std::cos(th);
    s *= std::sin(th);
  }
  x[1] = s * std::cos(p.angles[0]);
  x[0] = s * std::sin(p.angles[0]);
  return x;
}

Complex eval_harmonic(int d, int n, const MultiIndex& k, const SphericalPoint& p) {
  const double log_a = specfun::log_norm_A(d, n, k);
  if (p.dim() != d) throw ParameterError("eval_harmonic: point dimension mismatch");
  double value = std::exp(log_a);
  int upper = n;
  for (int j = 0; j <= d - 3; ++j) {
    const int a = std::abs(k[static_cast<std::size_t>(j)]);
    const double theta = p.angles[static_cast<std::size_t>(d - j - 2)];
    const double lam = (d - j - 2) / 2.0 + a;
    value *= specfun::gegenbauer(lam, upper - a, std::cos(theta)) * std::pow(std::sin(theta), a);
    upper = a;
  }
  return value * std::polar(1.0, k.last() * p.angles[0]);
}

double addition_kernel(int d, int n, double s) {
  if (d < 3) throw ParameterError("addition_kernel: d must be >= 3");
  return (2.0 * n + d - 2.0) / (d - 2.0) * specfun::gegenbauer((d - 2) / 2.0, n, s);
}

}  // namespace harmonics
}  // namespace sphereframe
