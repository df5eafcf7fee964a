#include "sphereframe/frames.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <omp.h>

#include "sphereframe/errors.hpp"
#include "sphereframe/expansion.hpp"
#include "sphereframe/harmonics.hpp"

namespace sphereframe {

void FrameSpec::validate() const {
  if (d < 3) throw ParameterError("FrameSpec: d must be >= 3");
  int prev_N = -1;
  std::set<int> seen;
  for (const auto& s : scales) {
    if (s.coeffs.dim() != d) throw ParameterError("FrameSpec: scale " + std::to_string(s.j) + " has wrong dimension");
    if (s.N < 0) throw ParameterError("FrameSpec: negative bandwidth");
    if (s.N < prev_N) throw ParameterError("FrameSpec: bandwidths must be nondecreasing");
    if (!seen.insert(s.j).second) throw ParameterError("FrameSpec: duplicate scale " + std::to_string(s.j));
    if (s.coeffs.max_degree() > s.N) {
      throw ParameterError("FrameSpec: scale " + std::to_string(s.j) + " has coefficients above N_j");
    }
    prev_N = s.N;
  }
  if (metadata.base_rotation && metadata.base_rotation->dim() != d) {
    throw ParameterError("FrameSpec: base rotation has the wrong dimension");
  }
}

int FrameSpec::max_degree() const {
  int m = -1;
  for (const auto& s : scales) m = std::max(m, s.coeffs.max_degree());
  return m;
}

const Scale* FrameSpec::find_scale(int j) const {
  for (const auto& s : scales)
    if (s.j == j) return &s;
  return nullptr;
}

Signal::Signal(int N, CoeffTable table) : degree(N), coeffs(std::move(table)) {
  if (coeffs.max_degree() > degree) throw ParameterError("Signal: coefficients above the declared degree");
}

Signal Signal::random(int d, int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CoeffTable table(d);
  double energy = 0.0;
  for (const auto& key : harmonics::basis_keys(d, N)) {
    const Complex c(g(rng), g(rng));
    energy += std::norm(c);
    table.set(key.n, key.k, c);
  }
  return Signal(N, table.scaled(1.0 / std::sqrt(energy)));
}

namespace frames {

SpectralProfile sigma_profile(const FrameSpec& spec, int n_max) {
  SpectralProfile sigma(static_cast<std::size_t>(std::max(0, n_max + 1)), 0.0);
  for (const auto& s : spec.scales) {
    for (const auto& [key, c] : s.coeffs) {
      if (key.n <= n_max) sigma[key.n] += std::norm(c);
    }
  }
  for (int n = 0; n <= n_max; ++n) sigma[n] /= static_cast<double>(harmonics::dim_harmonic(spec.d, n));
  return sigma;
}

FrameBounds frame_bounds(const FrameSpec& spec, int n_max) {
  if (n_max < 0) throw ParameterError("frame_bounds: n_max must be >= 0");
  const auto sigma = sigma_profile(spec, n_max);
  FrameBounds b;
  b.C1 = *std::min_element(sigma.begin(), sigma.end());
  b.C2 = *std::max_element(sigma.begin(), sigma.end());
  for (int n = 0; n <= n_max; ++n)
    if (sigma[n] == 0.0) b.zero_degrees.push_back(n);
  b.is_frame_on_range = b.C1 > 0.0;
  return b;
}

std::vector<Complex> dual_sums(const FrameSpec& a, const FrameSpec& b, int n_max) {
  if (a.d != b.d) throw ParameterError("dual check: dimensions differ");
  std::vector<Complex> sums(static_cast<std::size_t>(n_max + 1));
  for (const auto& sa : a.scales) {
    const Scale* sb = b.find_scale(sa.j);
    if (!sb) continue;
    for (const auto& [key, c] : sa.coeffs) {
      if (key.n > n_max) continue;
      sums[key.n] += std::conj(c) * sb->coeffs.get(key.n, key.k);
    }
  }
  for (int n = 0; n <= n_max; ++n) sums[n] /= static_cast<double>(harmonics::dim_harmonic(a.d, n));
  return sums;
}

double dual_residual(const FrameSpec& a, const FrameSpec& b, int n_max) {
  double worst = 0.0;
  for (const auto& s : dual_sums(a, b, n_max)) worst = std::max(worst, std::abs(s - 1.0));
  return worst;
}

bool check_dual(const FrameSpec& a, const FrameSpec& b, int n_max, double tol) {
  return dual_residual(a, b, n_max) <= tol;
}

FrameSpec canonical_dual(const FrameSpec& spec) {
  const int n_max = spec.max_degree();
  const auto sigma = sigma_profile(spec, std::max(0, n_max));
  // the whole range 0..N counts as support: a gap leaves Pi_N uncovered
  for (int n = 0; n <= n_max; ++n) {
    if (sigma[n] == 0.0) throw NotAFrameError("canonical_dual: sigma vanishes at degree " + std::to_string(n));
  }
  FrameSpec dual = spec;
  for (auto& s : dual.scales) {
    CoeffTable scaled(spec.d);
    for (const auto& [key, c] : s.coeffs) scaled.set(key.n, key.k, c / sigma[key.n]);
    s.coeffs = std::move(scaled);
  }
  return dual;
}

FrameSystem make_system(const FrameSpec& spec, quadrature::GridVariant variant, std::optional<int> K) {
  using quadrature::GridVariant;
  spec.validate();
  const bool steerable = variant == GridVariant::steerable || variant == GridVariant::steerable_so_d2;
  if (steerable && !K) K = spec.metadata.steerable_K;
  FrameSystem sys{spec, {}};
  for (const auto& s : spec.scales) {
    sys.grids.push_back(quadrature::rotation_rule(spec.d, s.N, variant, steerable ? K : std::nullopt));
  }
  return sys;
}

namespace {

Eigen::MatrixXd base_matrix(const FrameSpec& spec) {
  return spec.metadata.base_rotation ? spec.metadata.base_rotation->matrix()
                                     : Eigen::MatrixXd::Identity(spec.d, spec.d);
}

Eigen::MatrixXd node_matrix(const quadrature::SphereRule& rule) {
  Eigen::MatrixXd x(rule.dim(), static_cast<Eigen::Index>(rule.size()));
  for (std::size_t i = 0; i < rule.size(); ++i) x.col(static_cast<Eigen::Index>(i)) = rule.cartesian(i);
  return x;
}

void check_system(const FrameSystem& system) {
  if (system.grids.size() != system.spec.scales.size()) {
    throw ParameterError("FrameSystem: one grid per scale required");
  }
}

}  // namespace

std::vector<Complex> analysis(const FrameSystem& system, const Signal& f, std::size_t scale_index) {
  check_system(system);
  const auto& spec = system.spec;
  if (f.dim() != spec.d) throw ParameterError("analysis: signal dimension mismatch");
  const auto& scale = spec.scales.at(scale_index);
  const auto& grid = system.grids.at(scale_index);
  std::vector<Complex> out(grid.size());

  // components above min(N_j, N_f) are orthogonal to one factor
  const int M = std::min(scale.N, f.degree);
  const CoeffTable psi = scale.coeffs.truncated(M);
  const CoeffTable ft = f.coeffs.truncated(M);
  if (M < 0 || psi.norm_sq() == 0.0 || ft.norm_sq() == 0.0) return out;

  const auto rule = quadrature::sphere_rule(spec.d, M);
  const Eigen::MatrixXd X = node_matrix(rule);
  const ExpansionPlan fplan(ft);
  const ExpansionPlan plan(psi);
  std::vector<Complex> wf(rule.size());
  {
    auto ws = fplan.workspace();
    PointTrig pt;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      rule.trig(i, pt);
      wf[i] = rule.weight(i) * fplan.evaluate(pt, ws);
    }
  }
  const Eigen::MatrixXd g0 = base_matrix(spec);
  const auto count = static_cast<std::ptrdiff_t>(grid.size());
  const auto nodes = X.cols();
#pragma omp parallel
  {
    auto ws = plan.workspace();
    PointTrig pt;
    Eigen::MatrixXd Y(spec.d, nodes);
#pragma omp for schedule(dynamic, 64)
    for (std::ptrdiff_t r = 0; r < count; ++r) {
      const Eigen::MatrixXd G = grid.rotation(static_cast<std::size_t>(r)) * g0;
      Y.noalias() = G.transpose() * X;
      Complex acc{};
      for (Eigen::Index i = 0; i < nodes; ++i) {
        point_trig(Y.col(i).data(), spec.d, pt);
        acc += wf[i] * std::conj(plan.evaluate(pt, ws));
      }
      out[r] = std::sqrt(grid.weight(static_cast<std::size_t>(r))) * acc;
    }
  }
  return out;
}

Coefficients analysis(const FrameSystem& system, const Signal& f) {
  Coefficients c;
  for (std::size_t s = 0; s < system.spec.scales.size(); ++s) c.push_back(analysis(system, f, s));
  return c;
}

std::vector<Complex> analysis_reference(const FrameSystem& system, const Signal& f, std::size_t scale_index) {
  check_system(system);
  const auto& spec = system.spec;
  const auto& scale = spec.scales.at(scale_index);
  const auto& grid = system.grids.at(scale_index);
  std::vector<Complex> out(grid.size());
  const int M = std::min(scale.N, f.degree);
  if (M < 0) return out;
  const CoeffTable psi = scale.coeffs.truncated(M);
  const CoeffTable ft = f.coeffs.truncated(M);
  const auto rule = quadrature::sphere_rule(spec.d, M);
  const Eigen::MatrixXd g0 = base_matrix(spec);
  for (std::size_t r = 0; r < grid.size(); ++r) {
    const Eigen::MatrixXd G = grid.rotation(r) * g0;
    Complex acc{};
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const Eigen::VectorXd x = rule.cartesian(i);
      Eigen::VectorXd y = G.transpose() * x;
      y /= y.norm();
      acc += rule.weight(i) * harmonics::eval_expansion_reference(ft, rule.node(i)) *
             std::conj(harmonics::eval_expansion_reference(psi, harmonics::to_spherical(y)));
    }
    out[r] = std::sqrt(grid.weight(r)) * acc;
  }
  return out;
}

namespace {

const Scale& dual_scale(const FrameSpec& dual, const Scale& s) {
  const Scale* t = dual.find_scale(s.j);
  if (!t) throw ParameterError("synthesis: dual spec lacks scale " + std::to_string(s.j));
  return *t;
}

void check_coefficients(const FrameSystem& system, const FrameSpec& dual, const Coefficients& coeffs) {
  check_system(system);
  if (dual.d != system.spec.d) throw ParameterError("synthesis: dual dimension mismatch");
  if (coeffs.size() != system.grids.size()) throw ParameterError("synthesis: one coefficient list per scale");
  for (std::size_t s = 0; s < coeffs.size(); ++s) {
    if (coeffs[s].size() != system.grids[s].size()) throw ParameterError("synthesis: coefficient count mismatch");
  }
}

}  // namespace

Signal synthesis(const FrameSystem& system, const FrameSpec& dual, const Coefficients& coeffs, int N_out) {
  check_coefficients(system, dual, coeffs);
  const int d = system.spec.d;
  if (N_out < 0) throw ParameterError("synthesis: N_out must be >= 0");
  const auto rule = quadrature::sphere_rule(d, N_out);
  const Eigen::MatrixXd X = node_matrix(rule);
  const auto nodes = X.cols();
  const Eigen::MatrixXd g0 = base_matrix(dual);

  const int threads = omp_get_max_threads();
  std::vector<std::vector<Complex>> partial(static_cast<std::size_t>(threads),
                                            std::vector<Complex>(static_cast<std::size_t>(nodes)));
  for (std::size_t s = 0; s < system.spec.scales.size(); ++s) {
    const Scale& ds = dual_scale(dual, system.spec.scales[s]);
    const CoeffTable psi = ds.coeffs.truncated(std::min(ds.N, N_out));
    if (psi.norm_sq() == 0.0) continue;
    const ExpansionPlan plan(psi);
    const auto& grid = system.grids[s];
    const auto& c = coeffs[s];
    const auto count = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel num_threads(threads)
    {
      auto& acc = partial[static_cast<std::size_t>(omp_get_thread_num())];
      auto ws = plan.workspace();
      PointTrig pt;
      Eigen::MatrixXd Y(d, nodes);
#pragma omp for schedule(static)
      for (std::ptrdiff_t r = 0; r < count; ++r) {
        const Complex a = std::sqrt(grid.weight(static_cast<std::size_t>(r))) * c[r];
        if (a == Complex{}) continue;
        const Eigen::MatrixXd G = grid.rotation(static_cast<std::size_t>(r)) * g0;
        Y.noalias() = G.transpose() * X;
        for (Eigen::Index i = 0; i < nodes; ++i) {
          point_trig(Y.col(i).data(), d, pt);
          acc[i] += a * plan.evaluate(pt, ws);
        }
      }
    }
  }
  std::vector<Complex> F(static_cast<std::size_t>(nodes));
  for (const auto& acc : partial)
    for (std::size_t i = 0; i < F.size(); ++i) F[i] += acc[i];
  return Signal(N_out, harmonics::project(rule, F, N_out));
}

Signal synthesis_reference(const FrameSystem& system, const FrameSpec& dual, const Coefficients& coeffs, int N_out) {
  check_coefficients(system, dual, coeffs);
  const int d = system.spec.d;
  const auto rule = quadrature::sphere_rule(d, N_out);
  const Eigen::MatrixXd g0 = base_matrix(dual);
  std::vector<Complex> F(rule.size());
  for (std::size_t s = 0; s < system.spec.scales.size(); ++s) {
    const Scale& ds = dual_scale(dual, system.spec.scales[s]);
    const CoeffTable psi = ds.coeffs.truncated(std::min(ds.N, N_out));
    const auto& grid = system.grids[s];
    for (std::size_t r = 0; r < grid.size(); ++r) {
      const Complex a = std::sqrt(grid.weight(r)) * coeffs[s][r];
      const Eigen::MatrixXd G = grid.rotation(r) * g0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        Eigen::VectorXd y = G.transpose() * rule.cartesian(i);
        y /= y.norm();
        F[i] += a * harmonics::eval_expansion_reference(psi, harmonics::to_spherical(y));
      }
    }
  }
  return Signal(N_out, harmonics::project(rule, F, N_out));
}

ParsevalReport parseval_check(const FrameSystem& system, const Signal& f, const Coefficients& coeffs) {
  ParsevalReport rep;
  for (const auto& scale : coeffs)
    for (const auto& c : scale) rep.discrete_sum += std::norm(c);
  const auto sigma = sigma_profile(system.spec, std::max(0, f.degree));
  for (const auto& [key, c] : f.coeffs) rep.spectral_sum += sigma[key.n] * std::norm(c);
  const double scale = std::max(std::abs(rep.discrete_sum), std::abs(rep.spectral_sum));
  rep.rel_gap = scale == 0.0 ? 0.0 : std::abs(rep.discrete_sum - rep.spectral_sum) / scale;
  return rep;
}

ParsevalReport parseval_check(const FrameSystem& system, const Signal& f) {
  return parseval_check(system, f, analysis(system, f));
}

Complex sigma_J(const FrameSpec& a, const FrameSpec& b, int J, int n) {
  if (a.d != b.d) throw ParameterError("sigma_J: dimensions differ");
  if (n < 0) throw ParameterError("sigma_J: negative degree");
  Complex s{};
  for (const auto& sa : a.scales) {
    if (sa.j > J) continue;
    const Scale* sb = b.find_scale(sa.j);
    if (!sb) continue;
    for (const auto& [key, c] : sa.coeffs)
      if (key.n == n) s += std::conj(c) * sb->coeffs.get(key.n, key.k);
  }
  return s / static_cast<double>(harmonics::dim_harmonic(a.d, n));
}

Signal apply_Lambda_J(const FrameSpec& a, const FrameSpec& b, int J, const Signal& f) {
  const Scale* sJ = a.find_scale(J);
  if (!sJ) throw ParameterError("apply_Lambda_J: no scale " + std::to_string(J));
  const int N = sJ->N;
  CoeffTable out(f.dim());
  std::vector<Complex> factor(static_cast<std::size_t>(N + 1));
  for (int n = 0; n <= N; ++n) factor[n] = sigma_J(a, b, J, n);
  for (const auto& [key, c] : f.coeffs)
    if (key.n <= N) out.set(key.n, key.k, factor[key.n] * c);
  return Signal(std::min(N, f.degree), std::move(out));
}

double relative_error(const CoeffTable& got, const CoeffTable& want) {
  double diff = 0.0;
  for (const auto& [key, c] : want) diff += std::norm(got.get(key.n, key.k) - c);
  for (const auto& [key, c] : got)
    if (!want.contains(key.n, key.k)) diff += std::norm(c);
  const double ref = want.norm_sq();
  return ref == 0.0 ? std::sqrt(diff) : std::sqrt(diff / ref);
}

}  // namespace frames
}  // namespace sphereframe
