#include "sphereframe/constructions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sphereframe/errors.hpp"
#include "sphereframe/expansion.hpp"
#include "sphereframe/harmonics.hpp"
#include "sphereframe/specfun.hpp"

namespace sphereframe::constructions {

double phi(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double u = 1.0 - t;
  return 16.0 * u * u * u * (12.0 * t * t - 9.0 * t + 2.0);
}

double kappa(double t) {
  const double a = phi(0.5 * t);
  const double b = phi(t);
  // phi is non-increasing, so only rounding residue can go negative here
  return std::sqrt(std::max(0.0, a * a - b * b));
}

std::string to_string(Window w) { return w == Window::kappa1 ? "kappa1" : "kappa2"; }

Window window_from_string(const std::string& s) {
  if (s == "kappa1" || s == "1") return Window::kappa1;
  if (s == "kappa2" || s == "2") return Window::kappa2;
  throw ParameterError("unknown window '" + s + "'");
}

double window_shape(Window w, int j, int n) {
  if (j < 1 || n < 0) return 0.0;
  if (w == Window::kappa1) return kappa(n / std::ldexp(1.0, j - 1));
  const double lo = std::ldexp(1.0, j - 2);
  const double hi = std::ldexp(1.0, j);
  if (n < lo || n > hi) return 0.0;
  return std::sin(std::numbers::pi * (n + 1.0 - lo) / (3.0 * lo + 2.0));
}

double kappa1(int d, int j, int n) { return window(Window::kappa1, d, j, n); }
double kappa2(int d, int j, int n) { return window(Window::kappa2, d, j, n); }

double window(Window w, int d, int j, int n) {
  const double s = window_shape(w, j, n);
  return s == 0.0 ? 0.0 : std::pow(2.0, j * (d - 2) / 2.0) * s;
}

double zeta(int d, int n, const MultiIndex& k, int K) {
  if (d == 3) throw UnsupportedDimensionError("zeta: d = 3 needs user-supplied directionality tables");
  if (d < 3) throw ParameterError("zeta: d must be >= 4");
  if (K < 0) throw ParameterError("zeta: K must be >= 0");
  if (k.dim() != d || !k.valid_for_degree(n)) throw IndexError("zeta: index " + k.to_string() + " not in I_n");
  if (k[1] != 0) return 0.0;
  const int Kn = std::min(K, n);
  const int k1 = k.first();
  if (k1 > Kn || (Kn - k1) % 2 != 0) return 0.0;
  using specfun::log_gamma;
  const double lam = (d - 3) / 2.0;
  const double lv = log_gamma(lam) + log_gamma(Kn + 1.0) + std::log(k1 + lam) + log_gamma(d + k1 - 3.0) -
                    log_gamma(2.0 * lam) - Kn * std::log(2.0) - log_gamma((Kn - k1) / 2 + 1.0) -
                    log_gamma(lam + (Kn + k1) / 2.0 + 1.0) - log_gamma(k1 + 1.0);
  const double sign = (k1 / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * std::exp(0.5 * lv);
}

namespace {

Scale constant_scale(int d) {
  CoeffTable c(d);
  c.set(0, MultiIndex(std::vector<int>(static_cast<std::size_t>(d - 2), 0)), 1.0);
  return Scale{0, 0, std::move(c)};
}

const std::map<int, double>& user_row(const ZetaTable& table, int n) {
  auto it = table.upper_bound(n);
  if (it == table.begin()) throw ParameterError("wavelet_spec: directionality table has no row at or below degree " + std::to_string(n));
  return std::prev(it)->second;
}

}  // namespace

FrameSpec wavelet_spec(int d, int K, int J, Window w, const ZetaTable* user_zeta) {
  if (d < 3) throw ParameterError("wavelet_spec: d must be >= 3");
  if (J < 0) throw ParameterError("wavelet_spec: J must be >= 0");
  if (K < 0) throw ParameterError("wavelet_spec: K must be >= 0");
  if (d == 3 && (!user_zeta || user_zeta->empty())) {
    throw UnsupportedDimensionError("wavelet_spec: d = 3 requires a user-supplied directionality table");
  }
  FrameSpec spec;
  spec.d = d;
  spec.scales.push_back(constant_scale(d));
  for (int j = 1; j <= J; ++j) {
    const int N = 1 << j;
    CoeffTable c(d);
    for (int n = 0; n <= N; ++n) {
      const double kv = window(w, d, j, n);
      if (kv == 0.0) continue;
      if (d == 3) {
        for (const auto& [k, z] : user_row(*user_zeta, n)) {
          if (std::abs(k) > n || z == 0.0) continue;
          c.set(n, MultiIndex{k}, kv * z);
        }
        continue;
      }
      // zeta vanishes unless k_2 = ... = 0 and k_1 <= min(K, n)
      std::vector<int> k(static_cast<std::size_t>(d - 2), 0);
      for (int k1 = 0; k1 <= std::min(K, n); ++k1) {
        k[0] = k1;
        const MultiIndex mi(k);
        const double z = zeta(d, n, mi, K);
        if (z != 0.0) c.set(n, mi, kv * z);
      }
    }
    spec.scales.push_back(Scale{j, N, std::move(c)});
  }
  spec.metadata.steerable_K = K;
  if (d >= 4) spec.metadata.invariant_m = d - 2;
  return spec;
}

FrameSpec zonal_spec(int d, int J, Window w) {
  if (d < 3) throw ParameterError("zonal_spec: d must be >= 3");
  if (J < 0) throw ParameterError("zonal_spec: J must be >= 0");
  FrameSpec spec;
  spec.d = d;
  spec.scales.push_back(constant_scale(d));
  const MultiIndex zero(std::vector<int>(static_cast<std::size_t>(d - 2), 0));
  Eigen::VectorXd pole = Eigen::VectorXd::Zero(d);
  pole[d - 1] = 1.0;
  const auto pole_sp = harmonics::to_spherical(pole);
  for (int j = 1; j <= J; ++j) {
    const int N = 1 << j;
    CoeffTable c(d);
    for (int n = 0; n <= N; ++n) {
      const double s = window_shape(w, j, n);
      if (s == 0.0) continue;
      c.set(n, zero, s * harmonics::eval_harmonic(d, n, zero, pole_sp).real());
    }
    spec.scales.push_back(Scale{j, N, std::move(c)});
  }
  spec.metadata.steerable_K = 0;
  spec.metadata.invariant_m = d - 1;
  return spec;
}

Rotation make_g0(int d) {
  if (d < 3) throw ParameterError("make_g0: d must be >= 3");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
  // column i holds the image of e^{i+1}
  g(d - 2, 0) = 1.0;
  g(d - 1, 1) = 1.0;
  for (int i = 2; i < d; ++i) g(i - 2, i) = 1.0;
  // a shift by two positions is an even permutation, so no sign fix is needed
  if (g.determinant() < 0.0) g.col(2) = -g.col(2);
  return Rotation(std::move(g));
}

FrameSpec curvelet_spec(int d, int J) {
  if (d < 3) throw ParameterError("curvelet_spec: d must be >= 3");
  if (J < 0) throw ParameterError("curvelet_spec: J must be >= 0");
  FrameSpec spec;
  spec.d = d;
  spec.scales.push_back(constant_scale(d));
  for (int j = 1; j <= J; ++j) {
    const int N = 1 << j;
    CoeffTable c(d);
    for (int n = 1; n <= N; ++n) {
      const double kv = kappa1(d, j, n);
      if (kv == 0.0) continue;
      std::vector<int> k(static_cast<std::size_t>(d - 2), n);
      c.set(n, MultiIndex(k), kv / std::numbers::sqrt2);
      k.back() = -n;
      c.set(n, MultiIndex(k), kv / std::numbers::sqrt2);
    }
    spec.scales.push_back(Scale{j, N, std::move(c)});
  }
  spec.metadata.invariant_m = d - 2;
  spec.metadata.base_rotation = make_g0(d);
  return spec;
}

double curvelet_eval_closed(int d, int j, const CartesianPoint& x) {
  if (x.size() != d) throw ParameterError("curvelet_eval_closed: dimension mismatch");
  const Complex z(x[d - 1], x[d - 2]);
  Complex zn(1.0, 0.0);
  double acc = 0.0;
  const int N = 1 << j;
  for (int n = 1; n <= N; ++n) {
    zn *= z;
    const double kv = kappa1(d, j, n);
    if (kv == 0.0) continue;
    const MultiIndex top(std::vector<int>(static_cast<std::size_t>(d - 2), n));
    acc += kv * std::exp(specfun::log_norm_A(d, n, top)) * zn.real();
  }
  return std::numbers::sqrt2 * acc;
}

PolarGrid polar_sample(const FrameSpec& spec, int j, int nt, int nphi, double t_max,
                       const std::optional<Eigen::VectorXd>& eta_doubleprime) {
  const int d = spec.d;
  if (d < 4) throw ParameterError("polar_sample: d must be >= 4");
  if (nt < 2 || nphi < 1) throw ParameterError("polar_sample: grid too small");
  const Scale* scale = spec.find_scale(j);
  if (!scale) throw ParameterError("polar_sample: no scale " + std::to_string(j));

  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  if (eta_doubleprime) {
    if (eta_doubleprime->size() != d - 2) throw ParameterError("polar_sample: eta'' must have d - 2 entries");
    const double norm = eta_doubleprime->norm();
    if (std::abs(norm - 1.0) > 1e-8) throw DomainError("polar_sample: eta'' must be a unit vector");
    v.head(d - 2) = *eta_doubleprime / norm;
  } else {
    v[0] = 1.0;
  }
  Eigen::VectorXd ed = Eigen::VectorXd::Zero(d);
  ed[d - 1] = 1.0;
  Eigen::VectorXd ed1 = Eigen::VectorXd::Zero(d);
  ed1[d - 2] = 1.0;
  const Eigen::MatrixXd g0t = spec.metadata.base_rotation ? Eigen::MatrixXd(spec.metadata.base_rotation->matrix().transpose())
                                                          : Eigen::MatrixXd(Eigen::MatrixXd::Identity(d, d));

  PolarGrid grid;
  grid.t.resize(static_cast<std::size_t>(nt));
  grid.phi.resize(static_cast<std::size_t>(nphi));
  for (int a = 0; a < nt; ++a) grid.t[a] = t_max * a / (nt - 1);
  for (int b = 0; b < nphi; ++b) grid.phi[b] = 2.0 * std::numbers::pi * b / nphi;
  grid.values.resize(nt, nphi);

  const ExpansionPlan plan(scale->coeffs);
  double max_imag = 0.0;
#pragma omp parallel reduction(max : max_imag)
  {
    auto ws = plan.workspace();
    PointTrig pt;
#pragma omp for schedule(static)
    for (int a = 0; a < nt; ++a) {
      const double ct = std::cos(grid.t[a]);
      const double st = std::sin(grid.t[a]);
      for (int b = 0; b < nphi; ++b) {
        const Eigen::VectorXd x =
            ct * ed + st * (std::cos(grid.phi[b]) * ed1 + std::sin(grid.phi[b]) * v);
        const Eigen::VectorXd y = g0t * x;
        point_trig(y.data(), d, pt);
        const Complex val = plan.evaluate(pt, ws);
        grid.values(a, b) = val.real();
        max_imag = std::max(max_imag, std::abs(val.imag()));
      }
    }
  }
  grid.max_imag = max_imag;
  grid.rescale = grid.values.cwiseAbs().maxCoeff();
  if (grid.rescale > 0.0) grid.values /= grid.rescale;
  return grid;
}

std::string to_csv(const PolarGrid& g) {
  std::ostringstream os;
  os.precision(17);
  os << "t\\phi";
  for (double p : g.phi) os << ',' << p;
  os << '\n';
  for (Eigen::Index a = 0; a < g.values.rows(); ++a) {
    os << g.t[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < g.values.cols(); ++b) os << ',' << g.values(a, b);
    os << '\n';
  }
  return os.str();
}

std::string to_pgm(const PolarGrid& g) {
  std::ostringstream os;
  os << "P5\n" << g.values.cols() << ' ' << g.values.rows() << "\n255\n";
  std::string pixels;
  pixels.reserve(static_cast<std::size_t>(g.values.size()));
  for (Eigen::Index a = 0; a < g.values.rows(); ++a) {
    for (Eigen::Index b = 0; b < g.values.cols(); ++b) {
      const double v = std::clamp(g.values(a, b), -1.0, 1.0);
      // std::round rounds halves away from zero
      const long p = std::lround((v + 1.0) / 2.0 * 255.0);
      pixels.push_back(static_cast<char>(static_cast<unsigned char>(std::clamp(p, 0L, 255L))));
    }
  }
  os << pixels;
  return os.str();
}

}  // namespace sphereframe::constructions
