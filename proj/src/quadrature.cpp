#include "sphereframe/quadrature.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numbers>

#include "sphereframe/errors.hpp"
#include "sphereframe/harmonics.hpp"
#include "sphereframe/specfun.hpp"

namespace sphereframe {

void point_trig(const double* x, int d, PointTrig& out) {
  out.cos_t.resize(static_cast<std::size_t>(d));
  out.sin_t.resize(static_cast<std::size_t>(d));
  // cos_t[l-1] temporarily holds r_l = |(x_1, ..., x_l)|
  double r = 0.0;
  for (int l = 1; l <= d; ++l) {
    r = std::hypot(r, x[l - 1]);
    out.cos_t[l - 1] = r;
  }
  const double r2 = out.cos_t[1];
  for (int l = d - 1; l >= 2; --l) {
    const double r_next = out.cos_t[l];
    if (r_next == 0.0) {
      out.cos_t[l] = 1.0;
      out.sin_t[l] = 0.0;
    } else {
      out.sin_t[l] = out.cos_t[l - 1] / r_next;
      out.cos_t[l] = x[l] / r_next;
    }
  }
  out.cos_t[0] = out.cos_t[1] = 1.0;
  out.sin_t[0] = out.sin_t[1] = 0.0;
  out.e1 = r2 == 0.0 ? Complex(1.0, 0.0) : Complex(x[1] / r2, x[0] / r2);
}

PointTrig point_trig(const CartesianPoint& x) {
  PointTrig t;
  point_trig(x.data(), static_cast<int>(x.size()), t);
  return t;
}

PointTrig point_trig(const SphericalPoint& p) {
  const int d = p.dim();
  PointTrig t;
  t.cos_t.assign(static_cast<std::size_t>(d), 1.0);
  t.sin_t.assign(static_cast<std::size_t>(d), 0.0);
  for (int l = 2; l <= d - 1; ++l) {
    t.cos_t[l] = std::cos(p.angles[static_cast<std::size_t>(l - 1)]);
    t.sin_t[l] = std::sin(p.angles[static_cast<std::size_t>(l - 1)]);
  }
  t.e1 = std::polar(1.0, p.angles[0]);
  return t;
}

namespace quadrature {

Rule1D gauss_symmetric_jacobi(int m, double alpha) {
  if (m < 1) throw ParameterError("gauss_symmetric_jacobi: need at least one node");
  if (!(alpha > -1.0)) throw ParameterError("gauss_symmetric_jacobi: alpha must exceed -1");

  const double mu0 =
      std::exp(0.5 * std::log(std::numbers::pi) + specfun::log_gamma(alpha + 1.0) - specfun::log_gamma(alpha + 1.5));

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
  for (int n = 1; n < m; ++n) {
    double beta;
    if (n == 1) {
      beta = 1.0 / (3.0 + 2.0 * alpha);
    } else {
      beta = n * (n + 2.0 * alpha) / ((2.0 * n + 2.0 * alpha + 1.0) * (2.0 * n + 2.0 * alpha - 1.0));
    }
    jac(n - 1, n) = jac(n, n - 1) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  if (eig.info() != Eigen::Success) throw Error("gauss_symmetric_jacobi: eigen solver failed");

  Rule1D rule;
  rule.exact_degree = 2 * m - 1;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    rule.nodes[i] = eig.eigenvalues()(i);
    const double v = eig.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v * v;
  }
  // the weight is even; enforce the mirror symmetry of the rule exactly
  for (int i = 0; i < m / 2; ++i) {
    const int j = m - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  return rule;
}

Rule1D circle_rule(int M) {
  if (M < 1) throw ParameterError("circle_rule: need at least one node");
  Rule1D rule;
  rule.exact_degree = M - 1;
  rule.nodes.resize(static_cast<std::size_t>(M));
  rule.weights.assign(static_cast<std::size_t>(M), 2.0 * std::numbers::pi / M);
  for (int r = 0; r < M; ++r) rule.nodes[r] = 2.0 * std::numbers::pi * r / M;
  return rule;
}

namespace {

std::mutex cap_mutex;
std::optional<std::size_t> cap_override;

constexpr std::size_t kDefaultCap = 10'000'000;
constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();

std::size_t mul_sat(std::size_t a, std::size_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::size_t sphere_size(int d, int N) {
  std::size_t s = static_cast<std::size_t>(2 * N + 1);
  for (int l = 1; l <= d - 2; ++l) s = mul_sat(s, static_cast<std::size_t>(N + 1));
  return s;
}

void check_cap(const std::string& what, std::size_t requested) {
  const std::size_t cap = max_nodes();
  if (requested > cap) throw CapacityError(what, requested, cap);
}

}  // namespace

std::size_t max_nodes() {
  {
    std::lock_guard<std::mutex> lock(cap_mutex);
    if (cap_override) return *cap_override;
  }
  if (const char* env = std::getenv("SPHEREFRAME_MAX_NODES")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultCap;
}

void set_max_nodes(std::size_t cap) {
  std::lock_guard<std::mutex> lock(cap_mutex);
  cap_override = cap;
}

void reset_max_nodes() {
  std::lock_guard<std::mutex> lock(cap_mutex);
  cap_override.reset();
}

SphereRule::SphereRule(int d, int N) : d_(d), N_(N) {
  if (d < 2) throw ParameterError("sphere_rule: d must be >= 2");
  if (N < 0) throw ParameterError("sphere_rule: N must be >= 0");
  size_ = sphere_size(d, N);
  check_cap("sphere_rule(" + std::to_string(d) + ", " + std::to_string(N) + ")", size_);
  circle_ = circle_rule(2 * N + 1);
  for (int l = 1; l <= d - 2; ++l) {
    polar_.push_back(gauss_symmetric_jacobi(N + 1, (l - 1) / 2.0));
    std::vector<double> s;
    for (double t : polar_.back().nodes) s.push_back(std::sqrt(std::max(0.0, 1.0 - t * t)));
    polar_sin_.push_back(std::move(s));
  }
  // normalize each factor so the product sums to one
  for (auto& w : circle_.weights) w /= 2.0 * std::numbers::pi;
  for (auto& rule : polar_) {
    double total = 0.0;
    for (double w : rule.weights) total += w;
    for (auto& w : rule.weights) w /= total;
  }
}

void SphereRule::digits(std::size_t i, std::vector<std::size_t>& out) const {
  if (i >= size_) throw ParameterError("SphereRule: node index out of range");
  out.resize(static_cast<std::size_t>(d_ - 1));
  out[0] = i % circle_.size();
  i /= circle_.size();
  for (std::size_t l = 0; l < polar_.size(); ++l) {
    out[l + 1] = i % polar_[l].size();
    i /= polar_[l].size();
  }
}

double SphereRule::weight(std::size_t i) const {
  std::vector<std::size_t> dg;
  digits(i, dg);
  double w = circle_.weights[dg[0]];
  for (std::size_t l = 0; l < polar_.size(); ++l) w *= polar_[l].weights[dg[l + 1]];
  return w;
}

SphericalPoint SphereRule::node(std::size_t i) const {
  std::vector<std::size_t> dg;
  digits(i, dg);
  SphericalPoint p;
  p.angles.resize(static_cast<std::size_t>(d_ - 1));
  p.angles[0] = circle_.nodes[dg[0]];
  for (std::size_t l = 0; l < polar_.size(); ++l) p.angles[l + 1] = std::acos(polar_[l].nodes[dg[l + 1]]);
  return p;
}

void SphereRule::trig(std::size_t i, PointTrig& out) const {
  std::vector<std::size_t> dg;
  digits(i, dg);
  out.cos_t.assign(static_cast<std::size_t>(d_), 1.0);
  out.sin_t.assign(static_cast<std::size_t>(d_), 0.0);
  out.e1 = std::polar(1.0, circle_.nodes[dg[0]]);
  for (std::size_t l = 0; l < polar_.size(); ++l) {
    out.cos_t[l + 2] = polar_[l].nodes[dg[l + 1]];
    out.sin_t[l + 2] = polar_sin_[l][dg[l + 1]];
  }
}

CartesianPoint SphereRule::cartesian(std::size_t i) const {
  PointTrig t;
  trig(i, t);
  CartesianPoint x(d_);
  double s = 1.0;
  for (int l = d_ - 1; l >= 2; --l) {
    x[l] = s * t.cos_t[l];
    s *= t.sin_t[l];
  }
  x[1] = s * t.e1.real();
  x[0] = s * t.e1.imag();
  return x;
}

SphereRule sphere_rule(int d, int N) { return SphereRule(d, N); }

Rotation section_rotation(const SphericalPoint& eta) {
  const int d = eta.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
  // right-multiplying by G_{a,b}(t) mixes columns a and b (1-based)
  for (int l = 1; l <= d - 1; ++l) {
    const double t = eta.angles[static_cast<std::size_t>(l - 1)];
    const double c = std::cos(t);
    const double s = std::sin(t);
    const Eigen::VectorXd ca = m.col(l - 1);
    const Eigen::VectorXd cb = m.col(l);
    m.col(l) = c * cb + s * ca;
    m.col(l - 1) = c * ca - s * cb;
  }
  return Rotation(std::move(m));
}

Rotation section_rotation(const CartesianPoint& eta) {
  return section_rotation(harmonics::to_spherical(eta));
}

Rotation embed_subsphere_rotation(const CartesianPoint& eta_prime) {
  const int m = static_cast<int>(eta_prime.size());
  return section_rotation(eta_prime).embedded(m + 1);
}

std::string to_string(GridVariant v) {
  switch (v) {
    case GridVariant::general: return "general";
    case GridVariant::steerable: return "steerable";
    case GridVariant::zonal: return "zonal";
    case GridVariant::so_d2_invariant: return "so_d2_invariant";
    case GridVariant::steerable_so_d2: return "steerable_so_d2";
  }
  return "general";
}

GridVariant grid_variant_from_string(const std::string& s) {
  for (auto v : {GridVariant::general, GridVariant::steerable, GridVariant::zonal, GridVariant::so_d2_invariant,
                 GridVariant::steerable_so_d2}) {
    if (to_string(v) == s) return v;
  }
  throw ParameterError("unknown grid variant '" + s + "'");
}

RotationRule::RotationRule(int d, int class_degree, GridVariant variant, std::optional<int> K,
                           std::vector<Eigen::MatrixXd> rotations, std::vector<double> weights)
    : d_(d), class_degree_(class_degree), variant_(variant), K_(K), size_(rotations.size()),
      explicit_rotations_(std::move(rotations)), explicit_weights_(std::move(weights)) {
  if (explicit_rotations_.size() != explicit_weights_.size()) {
    throw ParameterError("RotationRule: rotation and weight counts differ");
  }
  for (double w : explicit_weights_) {
    if (!(w > 0.0)) throw DomainError("RotationRule: weights must be positive");
  }
  for (const auto& m : explicit_rotations_) {
    if (m.rows() != d || m.cols() != d) throw ParameterError("RotationRule: rotation has the wrong shape");
  }
}

double RotationRule::weight(std::size_t i) const {
  if (i >= size_) throw ParameterError("RotationRule: index out of range");
  if (!explicit_weights_.empty()) return explicit_weights_[i];
  if (circle_points_ > 0) return 1.0 / circle_points_;
  if (!inner_) return outer_->weight(i);
  return outer_->weight(i / inner_->size()) * inner_->weight(i % inner_->size());
}

Eigen::MatrixXd RotationRule::rotation(std::size_t i) const {
  if (i >= size_) throw ParameterError("RotationRule: index out of range");
  if (!explicit_rotations_.empty()) return explicit_rotations_[i];
  if (circle_points_ > 0) {
    const double g = 2.0 * std::numbers::pi * static_cast<double>(i) / circle_points_;
    Eigen::MatrixXd m(2, 2);
    m << std::cos(g), -std::sin(g), std::sin(g), std::cos(g);
    return m;
  }
  if (!inner_) return section_rotation(outer_->node(i)).matrix();
  Eigen::MatrixXd m = section_rotation(outer_->node(i / inner_->size())).matrix();
  const Eigen::MatrixXd h = inner_->rotation(i % inner_->size());
  const int di = inner_->dim();
  // m * embed(h): only the leading di columns change
  m.leftCols(di) = m.leftCols(di) * h;
  return m;
}

namespace {

std::shared_ptr<const RotationRule> build_inner(int d, int N, GridVariant variant, std::optional<int> K) {
  switch (variant) {
    case GridVariant::general: return std::make_shared<RotationRule>(rotation_rule(d - 1, N, GridVariant::general));
    case GridVariant::steerable: return std::make_shared<RotationRule>(rotation_rule(d - 1, *K, GridVariant::general));
    case GridVariant::so_d2_invariant: return std::make_shared<RotationRule>(rotation_rule(d - 1, N, GridVariant::zonal));
    case GridVariant::steerable_so_d2: return std::make_shared<RotationRule>(rotation_rule(d - 1, *K, GridVariant::zonal));
    case GridVariant::zonal: return nullptr;
  }
  return nullptr;
}

}  // namespace

std::size_t rotation_rule_size(int d, int N, GridVariant variant, std::optional<int> K) {
  if (d < 2) throw ParameterError("rotation_rule: d must be >= 2");
  if (N < 0) throw ParameterError("rotation_rule: N must be >= 0");
  const bool steerable = variant == GridVariant::steerable || variant == GridVariant::steerable_so_d2;
  if (steerable && !K) throw ParameterError("rotation_rule: variant " + to_string(variant) + " requires K");
  if (K && *K < 0) throw ParameterError("rotation_rule: K must be >= 0");
  if (d == 2 && variant == GridVariant::general) return static_cast<std::size_t>(2 * N + 1);
  if (d == 2 && variant != GridVariant::zonal) {
    throw ParameterError("rotation_rule: variant " + to_string(variant) + " needs d >= 3");
  }
  const std::size_t outer = sphere_size(d, N);
  switch (variant) {
    case GridVariant::general: return mul_sat(outer, rotation_rule_size(d - 1, N, GridVariant::general));
    case GridVariant::steerable: return mul_sat(outer, rotation_rule_size(d - 1, *K, GridVariant::general));
    case GridVariant::zonal: return outer;
    case GridVariant::so_d2_invariant: return mul_sat(outer, sphere_size(d - 1, N));
    case GridVariant::steerable_so_d2: return mul_sat(outer, sphere_size(d - 1, *K));
  }
  return outer;
}

RotationRule rotation_rule(int d, int N, GridVariant variant, std::optional<int> K) {
  const std::size_t total = rotation_rule_size(d, N, variant, K);
  std::string label = "rotation_rule(" + std::to_string(d) + ", " + std::to_string(N) + ", " + to_string(variant);
  if (K) label += ", K=" + std::to_string(*K);
  check_cap(label + ")", total);

  RotationRule r;
  r.d_ = d;
  r.class_degree_ = N;
  r.variant_ = variant;
  r.K_ = K;
  r.size_ = total;
  if (d == 2 && variant == GridVariant::general) {
    r.circle_points_ = 2 * N + 1;
    return r;
  }
  r.outer_ = std::make_shared<const SphereRule>(d, N);
  r.inner_ = build_inner(d, N, variant, K);
  return r;
}

}  // namespace quadrature
}  // namespace sphereframe
