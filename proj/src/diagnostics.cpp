#include "sphereframe/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <omp.h>

#include "sphereframe/constructions.hpp"
#include "sphereframe/errors.hpp"
#include "sphereframe/expansion.hpp"
#include "sphereframe/harmonics.hpp"
#include "sphereframe/specfun.hpp"

namespace sphereframe::diagnostics {

namespace {
// quadrature leaves ~1e-17 where the exact center of mass is 0
constexpr double kZeroCenter = 1e-13;
}  // namespace

std::optional<int> steerable_order(const FrameSpec& spec) {
  std::optional<int> K;
  for (const auto& s : spec.scales) {
    for (const auto& [key, c] : s.coeffs) {
      if (c == Complex{}) continue;
      K = std::max(K.value_or(0), std::abs(key.k.first()));
    }
  }
  return K;
}

std::optional<int> invariance_order(const FrameSpec& spec) {
  const int d = spec.d;
  for (int m = d - 1; m >= 2; --m) {
    const auto idx = static_cast<std::size_t>(d - m - 1);  // k_{d-m}, 1-based
    bool ok = true;
    for (const auto& s : spec.scales) {
      for (const auto& [key, c] : s.coeffs) {
        if (c != Complex{} && key.k[idx] != 0) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return m;
  }
  return std::nullopt;
}

Xi0d xi0_d_spectral(const CoeffTable& f) {
  const double norm = f.norm_sq();
  if (norm == 0.0) throw DegenerateSignalError("xi0_d_spectral: zero signal");
  const int d = f.dim();
  Complex acc{};
  for (const auto& [key, c] : f) {
    const int k1 = key.k.first();
    if (key.k.valid_for_degree(key.n + 1)) {
      acc += c * std::conj(f.get(key.n + 1, key.k)) * specfun::Q_d(d, k1, key.n);
    }
    if (key.n >= 1 && key.k.valid_for_degree(key.n - 1)) {
      acc += c * std::conj(f.get(key.n - 1, key.k)) * specfun::Q_d(d, k1, key.n - 1);
    }
  }
  return Xi0d{acc.real(), acc.real() / norm};
}

Eigen::VectorXd xi0_numeric(const CoeffTable& f, const quadrature::SphereRule& rule) {
  const double norm = f.norm_sq();
  if (norm == 0.0) throw DegenerateSignalError("xi0_numeric: zero signal");
  const int d = f.dim();
  if (rule.dim() != d) throw ParameterError("xi0_numeric: rule dimension mismatch");
  const int N = f.max_degree();
  if (rule.exact_degree() < 2 * N + 1) {
    throw ExactnessError("xi0_numeric: rule exact to degree " + std::to_string(rule.exact_degree()) + ", need " +
                         std::to_string(2 * N + 1));
  }
  const ExpansionPlan plan(f);
  const int threads = omp_get_max_threads();
  std::vector<Eigen::VectorXd> partial(static_cast<std::size_t>(threads), Eigen::VectorXd::Zero(d));
  const auto count = static_cast<std::ptrdiff_t>(rule.size());
#pragma omp parallel num_threads(threads)
  {
    auto& acc = partial[static_cast<std::size_t>(omp_get_thread_num())];
    auto ws = plan.workspace();
    PointTrig pt;
    Eigen::VectorXd x(d);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      rule.trig(static_cast<std::size_t>(i), pt);
      const double w = rule.weight(static_cast<std::size_t>(i)) * std::norm(plan.evaluate(pt, ws));
      double s = 1.0;
      for (int l = d - 1; l >= 2; --l) {
        x[l] = s * pt.cos_t[l];
        s *= pt.sin_t[l];
      }
      x[1] = s * pt.e1.real();
      x[0] = s * pt.e1.imag();
      acc += w * x;
    }
  }
  Eigen::VectorXd total = Eigen::VectorXd::Zero(d);
  for (const auto& p : partial) total += p;
  return total / norm;
}

Eigen::VectorXd xi0_numeric(const CoeffTable& f) {
  return xi0_numeric(f, quadrature::sphere_rule(f.dim(), std::max(0, f.max_degree()) + 1));
}

SpaceVariance var_space(const CoeffTable& f) {
  const Eigen::VectorXd xi = xi0_numeric(f);
  SpaceVariance v;
  v.xi_norm = xi.norm();
  v.xi_d = xi0_d_spectral(f).value;
  if (v.xi_norm < kZeroCenter) throw DegenerateSignalError("var_space: center of mass is zero");
  v.exact = (1.0 - v.xi_norm * v.xi_norm) / (v.xi_norm * v.xi_norm);
  v.upper = v.xi_d == 0.0 ? std::numeric_limits<double>::infinity() : (1.0 - v.xi_d * v.xi_d) / (v.xi_d * v.xi_d);
  return v;
}

double var_momentum(const CoeffTable& f) {
  const double norm = f.norm_sq();
  if (norm == 0.0) throw DegenerateSignalError("var_momentum: zero signal");
  const int d = f.dim();
  double acc = 0.0;
  for (const auto& [key, c] : f) acc += key.n * (key.n + d - 2.0) * std::norm(c);
  return acc / norm;
}

double uncertainty_product(const CoeffTable& f) { return var_space(f).exact * var_momentum(f); }

std::vector<ScaleLocalization> localization_report(const FrameSpec& spec, const std::vector<int>& scales) {
  std::vector<ScaleLocalization> out;
  for (const auto& s : spec.scales) {
    if (scales.empty() ? s.j < 1 : std::find(scales.begin(), scales.end(), s.j) == scales.end()) continue;
    if (s.coeffs.norm_sq() == 0.0) continue;
    ScaleLocalization r;
    r.j = s.j;
    r.N = s.N;
    r.norm_sq = s.coeffs.norm_sq();
    r.xi0_vec = xi0_numeric(s.coeffs);
    r.xi0_d = xi0_d_spectral(s.coeffs).value;
    const double xn2 = r.xi0_vec.squaredNorm();
    if (xn2 < kZeroCenter * kZeroCenter) throw DegenerateSignalError("localization_report: center of mass is zero");
    r.var_space = (1.0 - xn2) / xn2;
    r.var_space_upper = (1.0 - r.xi0_d * r.xi0_d) / (r.xi0_d * r.xi0_d);
    r.var_momentum = var_momentum(s.coeffs);
    r.uncertainty_product = r.var_space * r.var_momentum;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ScaleAudit> audit_conditions(const FrameSpec& spec) {
  if (spec.scales.size() < 2) throw ParameterError("audit_conditions: need at least two scales");
  const int d = spec.d;
  std::vector<ScaleAudit> out;
  for (const auto& s : spec.scales) {
    if (s.j < 1 || s.coeffs.norm_sq() == 0.0) continue;
    ScaleAudit a;
    a.j = s.j;
    a.N = s.N;
    a.norm_sq = s.coeffs.norm_sq();
    const double N = std::max(1, s.N);
    a.c1_ratio = a.norm_sq / std::pow(N, d - 1);
    a.M = s.N;
    double max_abs = 0.0;
    std::set<MultiIndex> ks;
    for (const auto& [key, c] : s.coeffs) {
      if (c == Complex{}) continue;
      a.M = std::min(a.M, key.n);
      max_abs = std::max(max_abs, std::abs(c));
      ks.insert(key.k);
    }
    a.m_ratio = a.M / N;
    a.size_bound = max_abs * std::pow(N, -(d - 2) / 2.0);
    double worst = 0.0;
    double worst_rel = 0.0;
    for (const auto& k : ks) {
      for (int n = std::abs(k.first()); n <= s.N + 1; ++n) {
        const Complex center = s.coeffs.get(n, k);
        const Complex diff = 0.5 * (s.coeffs.get(n + 1, k) + (n > 0 ? s.coeffs.get(n - 1, k) : Complex{})) - center;
        worst = std::max(worst, std::abs(diff));
        if (center != Complex{}) worst_rel = std::max(worst_rel, std::abs(diff) * N * N / std::abs(center));
      }
    }
    a.c3 = worst * std::pow(N, -(d - 6) / 2.0);
    a.c4 = worst_rel;
    out.push_back(a);
  }
  return out;
}

double autocorrelation_argument(const Rotation& h, int d) {
  if (h.dim() == d - 1) return h.matrix()(d - 2, d - 2);
  if (h.dim() == d) {
    if (std::abs(h.matrix()(d - 1, d - 1) - 1.0) > 1e-12) {
      throw DomainError("autocorrelation: h must fix e^d");
    }
    return h.matrix()(d - 2, d - 2);
  }
  throw ParameterError("autocorrelation: h has the wrong dimension");
}

Complex autocorrelation(const FrameSpec& spec, int j, const Rotation& h, const quadrature::SphereRule& rule) {
  const int d = spec.d;
  const Scale* s = spec.find_scale(j);
  if (!s) throw ParameterError("autocorrelation: no scale " + std::to_string(j));
  if (rule.dim() != d) throw ParameterError("autocorrelation: rule dimension mismatch");
  if (rule.exact_degree() < 2 * std::max(0, s->coeffs.max_degree())) {
    throw ExactnessError("autocorrelation: rule not exact on Pi_{2N_j}");
  }
  autocorrelation_argument(h, d);
  const Eigen::MatrixXd H = h.dim() == d ? h.matrix() : h.embedded(d).matrix();
  const Eigen::MatrixXd g0t = spec.metadata.base_rotation ? Eigen::MatrixXd(spec.metadata.base_rotation->matrix().transpose())
                                                          : Eigen::MatrixXd(Eigen::MatrixXd::Identity(d, d));
  const Eigen::MatrixXd back = g0t * H.transpose();
  const ExpansionPlan plan(s->coeffs);
  Complex acc{};
  auto ws = plan.workspace();
  PointTrig pt;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Eigen::VectorXd x = rule.cartesian(i);
    const Eigen::VectorXd y0 = g0t * x;
    point_trig(y0.data(), d, pt);
    const Complex base = plan.evaluate(pt, ws);
    const Eigen::VectorXd y1 = back * x;
    point_trig(y1.data(), d, pt);
    acc += rule.weight(i) * plan.evaluate(pt, ws) * std::conj(base);
  }
  return acc;
}

Complex autocorrelation(const FrameSpec& spec, int j, const Rotation& h) {
  const Scale* s = spec.find_scale(j);
  if (!s) throw ParameterError("autocorrelation: no scale " + std::to_string(j));
  return autocorrelation(spec, j, h, quadrature::sphere_rule(spec.d, std::max(0, s->coeffs.max_degree())));
}

double autocorrelation_closed(const FrameSpec& spec, int j, double s) {
  const int d = spec.d;
  const Scale* sc = spec.find_scale(j);
  if (!sc) throw ParameterError("autocorrelation_closed: no scale " + std::to_string(j));
  if (!spec.metadata.steerable_K) throw ShapeError("autocorrelation_closed: spec carries no steerability order");
  if (spec.metadata.base_rotation) throw ShapeError("autocorrelation_closed: rotated specs are not supported");
  const int K = *spec.metadata.steerable_K;

  // degree blocks must be real multiples of zeta(., K)
  std::map<int, double> energy;
  std::map<int, double> overlap;
  for (const auto& [key, c] : sc->coeffs) energy[key.n] += std::norm(c);
  for (const auto& [n, e] : energy) {
    double proj2 = 0.0;
    if (d == 3) {
      if (K != 0) throw ShapeError("autocorrelation_closed: d = 3 only supports zonal specs");
      proj2 = std::norm(sc->coeffs.get(n, MultiIndex{0}));
    } else {
      Complex dot{};
      for (const auto& [key, c] : sc->coeffs)
        if (key.n == n) dot += c * constructions::zeta(d, n, key.k, K);
      proj2 = std::norm(dot);
    }
    if (std::abs(e - proj2) > 1e-10 * std::max(1.0, e)) {
      throw ShapeError("autocorrelation_closed: degree " + std::to_string(n) + " is not of the kappa * zeta form");
    }
  }
  double acc = 0.0;
  for (const auto& [n, e] : energy) acc += e * std::pow(s, std::min(K, n));
  return acc;
}

}  // namespace sphereframe::diagnostics
