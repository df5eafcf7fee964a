#include "sphereframe/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include <omp.h>

#include "sphereframe/errors.hpp"
#include "sphereframe/harmonics.hpp"
#include "sphereframe/specfun.hpp"

namespace sphereframe {

ExpansionPlan::ExpansionPlan(const CoeffTable& table) {
  std::vector<HarmonicKey> keys;
  std::vector<Complex> coeffs;
  for (const auto& [key, c] : table) {
    if (c == Complex{}) continue;
    keys.push_back(key);
    coeffs.push_back(c);
  }
  build(table.dim(), keys, coeffs);
}

ExpansionPlan ExpansionPlan::basis(int d, const std::vector<HarmonicKey>& keys) {
  ExpansionPlan plan;
  plan.build(d, keys, std::vector<Complex>(keys.size(), Complex(1.0, 0.0)));
  return plan;
}

void ExpansionPlan::build(int d, const std::vector<HarmonicKey>& keys, const std::vector<Complex>& coeffs) {
  if (d < 3) throw ParameterError("ExpansionPlan: d must be >= 3");
  d_ = d;
  keys_ = keys;
  const int levels = d - 2;

  // longest Gegenbauer run needed per (level, a)
  std::map<std::pair<int, int>, int> need;
  for (const auto& key : keys) {
    if (key.k.dim() != d || !key.k.valid_for_degree(key.n)) {
      throw IndexError("ExpansionPlan: index " + key.k.to_string() + " not in I_" + std::to_string(key.n));
    }
    nmax_ = std::max(nmax_, key.n);
    mmax_ = std::max(mmax_, std::abs(key.k.last()));
    int upper = key.n;
    for (int j = 0; j < levels; ++j) {
      const int a = std::abs(key.k[static_cast<std::size_t>(j)]);
      auto& len = need[{j, a}];
      len = std::max(len, upper - a + 1);
      upper = a;
    }
  }

  std::map<std::pair<int, int>, int> block_offset;
  int offset = 0;
  for (const auto& [la, len] : need) {
    blocks_.push_back(Block{la.first, la.second, len, offset, (d - la.first - 2) / 2.0 + la.second});
    block_offset[la] = offset;
    offset += len;
  }
  table_size_ = static_cast<std::size_t>(offset);

  coef_.reserve(keys.size());
  offsets_.reserve(keys.size() * static_cast<std::size_t>(levels));
  for (std::size_t t = 0; t < keys.size(); ++t) {
    const auto& key = keys[t];
    coef_.push_back(coeffs[t] * std::exp(specfun::log_norm_A(d, key.n, key.k)));
    int upper = key.n;
    for (int j = 0; j < levels; ++j) {
      const int a = std::abs(key.k[static_cast<std::size_t>(j)]);
      offsets_.push_back(block_offset[{j, a}] + (upper - a));
      upper = a;
    }
    phase_index_.push_back(key.k.last() + mmax_);
  }
}

ExpansionPlan::Workspace ExpansionPlan::workspace() const {
  Workspace ws;
  ws.tables.resize(table_size_);
  ws.phase.resize(static_cast<std::size_t>(2 * mmax_ + 1));
  return ws;
}

void ExpansionPlan::fill(const PointTrig& p, Workspace& ws) const {
  if (p.dim() != d_) throw ParameterError("ExpansionPlan: point dimension mismatch");
  if (ws.tables.size() != table_size_ || ws.phase.size() != static_cast<std::size_t>(2 * mmax_ + 1)) {
    ws = workspace();
  }
  for (const auto& b : blocks_) {
    const int l = d_ - b.level - 1;
    const std::span<double> run(ws.tables.data() + b.offset, static_cast<std::size_t>(b.length));
    specfun::gegenbauer_table(b.lambda, p.cos_t[l], run);
    if (b.a > 0) {
      const double s = std::pow(p.sin_t[l], b.a);
      for (auto& v : run) v *= s;
    }
  }
  ws.phase[mmax_] = 1.0;
  Complex z(1.0, 0.0);
  for (int m = 1; m <= mmax_; ++m) {
    z *= p.e1;
    ws.phase[mmax_ + m] = z;
    ws.phase[mmax_ - m] = std::conj(z);
  }
}

double ExpansionPlan::radial(std::size_t t, const Workspace& ws) const {
  const std::size_t levels = static_cast<std::size_t>(d_ - 2);
  const int* off = offsets_.data() + t * levels;
  double v = ws.tables[off[0]];
  for (std::size_t j = 1; j < levels; ++j) v *= ws.tables[off[j]];
  return v;
}

Complex ExpansionPlan::evaluate(const PointTrig& p, Workspace& ws) const {
  if (coef_.empty()) return {};
  fill(p, ws);
  Complex acc{};
  for (std::size_t t = 0; t < coef_.size(); ++t) acc += coef_[t] * (radial(t, ws) * ws.phase[phase_index_[t]]);
  return acc;
}

void ExpansionPlan::basis_values(const PointTrig& p, Workspace& ws, std::span<Complex> out) const {
  if (out.size() != coef_.size()) throw ParameterError("basis_values: output size mismatch");
  if (coef_.empty()) return;
  fill(p, ws);
  for (std::size_t t = 0; t < coef_.size(); ++t) out[t] = coef_[t] * (radial(t, ws) * ws.phase[phase_index_[t]]);
}

Complex ExpansionPlan::evaluate(const CartesianPoint& x) const {
  auto ws = workspace();
  return evaluate(point_trig(x), ws);
}

Complex ExpansionPlan::evaluate(const SphericalPoint& p) const {
  auto ws = workspace();
  return evaluate(point_trig(p), ws);
}

std::vector<Complex> ExpansionPlan::evaluate_many(const std::vector<CartesianPoint>& xs) const {
  std::vector<Complex> out(xs.size());
  const auto count = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel
  {
    auto ws = workspace();
    PointTrig pt;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      point_trig(xs[i].data(), d_, pt);
      out[i] = evaluate(pt, ws);
    }
  }
  return out;
}

namespace harmonics {

std::vector<Complex> eval_expansion(int d, const CoeffTable& coeffs, const std::vector<SphericalPoint>& points) {
  if (coeffs.dim() != d) throw ParameterError("eval_expansion: table dimension mismatch");
  const ExpansionPlan plan(coeffs);
  std::vector<Complex> out(points.size());
  const auto count = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel
  {
    auto ws = plan.workspace();
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      if (points[i].dim() != d) continue;
      out[i] = plan.evaluate(point_trig(points[i]), ws);
    }
  }
  for (const auto& p : points) {
    if (p.dim() != d) throw ParameterError("eval_expansion: point dimension mismatch");
  }
  return out;
}

Complex eval_expansion_reference(const CoeffTable& coeffs, const SphericalPoint& p) {
  Complex acc{};
  for (const auto& [key, c] : coeffs) acc += c * eval_harmonic(coeffs.dim(), key.n, key.k, p);
  return acc;
}

CoeffTable project(const quadrature::SphereRule& rule, std::span<const Complex> values, int n_max) {
  if (values.size() != rule.size()) throw ParameterError("project: one value per rule node expected");
  const int d = rule.dim();
  const auto keys = basis_keys(d, n_max);
  const auto plan = ExpansionPlan::basis(d, keys);
  const std::size_t nk = keys.size();

  const int threads = omp_get_max_threads();
  std::vector<std::vector<Complex>> partial(static_cast<std::size_t>(threads), std::vector<Complex>(nk));
  const auto count = static_cast<std::ptrdiff_t>(rule.size());
#pragma omp parallel num_threads(threads)
  {
    auto& acc = partial[static_cast<std::size_t>(omp_get_thread_num())];
    auto ws = plan.workspace();
    PointTrig pt;
    std::vector<Complex> y(nk);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const Complex f = values[i];
      if (f == Complex{}) continue;
      rule.trig(static_cast<std::size_t>(i), pt);
      plan.basis_values(pt, ws, y);
      const Complex wf = rule.weight(static_cast<std::size_t>(i)) * f;
      for (std::size_t t = 0; t < nk; ++t) acc[t] += wf * std::conj(y[t]);
    }
  }
  // fixed thread order keeps the sum reproducible
  CoeffTable out(d);
  for (std::size_t t = 0; t < nk; ++t) {
    Complex s{};
    for (const auto& acc : partial) s += acc[t];
    out.set(keys[t].n, keys[t].k, s);
  }
  return out;
}

CoeffTable rotate_table(const CoeffTable& table, const Rotation& g) {
  const int d = table.dim();
  if (g.dim() != d) throw ParameterError("rotate_table: rotation dimension mismatch");
  const int n_max = std::max(0, table.max_degree());
  const auto rule = quadrature::sphere_rule(d, n_max);
  const ExpansionPlan plan(table);
  std::vector<Complex> values(rule.size());
  const Eigen::MatrixXd gt = g.matrix().transpose();
  const auto count = static_cast<std::ptrdiff_t>(rule.size());
#pragma omp parallel
  {
    auto ws = plan.workspace();
    PointTrig pt;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const Eigen::VectorXd y = gt * rule.cartesian(static_cast<std::size_t>(i));
      point_trig(y.data(), d, pt);
      values[i] = plan.evaluate(pt, ws);
    }
  }
  return project(rule, values, n_max);
}

Eigen::MatrixXcd matrix_function_block(int d, int n, const Rotation& g, const quadrature::SphereRule& rule) {
  if (rule.dim() != d || g.dim() != d) throw ParameterError("matrix_function_block: dimension mismatch");
  if (rule.exact_degree() < 2 * n) {
    throw ExactnessError("matrix_function_block: rule exact to degree " + std::to_string(rule.exact_degree()) +
                         ", need " + std::to_string(2 * n));
  }
  std::vector<HarmonicKey> keys;
  for (auto& k : index_set(d, n)) keys.push_back({n, std::move(k)});
  const auto plan = ExpansionPlan::basis(d, keys);
  const auto dim = static_cast<Eigen::Index>(keys.size());
  const auto nodes = static_cast<Eigen::Index>(rule.size());

  Eigen::MatrixXcd at(nodes, dim);     // w_i conj(Y_k(eta_i))
  Eigen::MatrixXcd rotated(nodes, dim);  // Y_m(g^{-1} eta_i)
  const Eigen::MatrixXd gt = g.matrix().transpose();
  auto ws = plan.workspace();
  PointTrig pt;
  std::vector<Complex> y(keys.size());
  for (Eigen::Index i = 0; i < nodes; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const Eigen::VectorXd x = rule.cartesian(idx);
    const double w = rule.weight(idx);
    point_trig(x.data(), d, pt);
    plan.basis_values(pt, ws, y);
    for (Eigen::Index t = 0; t < dim; ++t) at(i, t) = w * std::conj(y[t]);
    const Eigen::VectorXd gx = gt * x;
    point_trig(gx.data(), d, pt);
    plan.basis_values(pt, ws, y);
    for (Eigen::Index t = 0; t < dim; ++t) rotated(i, t) = y[t];
  }
  return at.transpose() * rotated;
}

Complex matrix_function_numeric(int d, int n, const MultiIndex& k, const MultiIndex& m, const Rotation& g,
                                const quadrature::SphereRule& rule) {
  if (!k.valid_for_degree(n) || !m.valid_for_degree(n) || k.dim() != d || m.dim() != d) {
    throw IndexError("matrix_function_numeric: index outside I_" + std::to_string(n));
  }
  const auto block = matrix_function_block(d, n, g, rule);
  const auto set = index_set(d, n);
  const auto row = std::find(set.begin(), set.end(), k) - set.begin();
  const auto col = std::find(set.begin(), set.end(), m) - set.begin();
  return block(row, col);
}

}  // namespace harmonics
}  // namespace sphereframe
