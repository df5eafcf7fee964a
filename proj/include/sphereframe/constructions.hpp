#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sphereframe/frames.hpp"
#include "sphereframe/types.hpp"

namespace sphereframe::constructions {

/// C^2 cutoff: 1 on [0, 1/2], 16(1-t)^3(12t^2-9t+2) on [1/2, 1], 0 beyond.
double phi(double t);

/// sqrt(phi^2(t/2) - phi^2(t)), supported on [1/2, 2]. The radicand is clamped at 0.
double kappa(double t);

enum class Window { kappa1, kappa2 };

std::string to_string(Window w);
Window window_from_string(const std::string& s);

/// 2^{j(d-2)/2} kappa(n / 2^{j-1}).
double kappa1(int d, int j, int n);

/// 2^{j(d-2)/2} sin(pi (n + 1 - 2^{j-2}) / (3 2^{j-2} + 2)) on [2^{j-2}, 2^j], else 0.
double kappa2(int d, int j, int n);

double window(Window w, int d, int j, int n);

/// The same windows without the 2^{j(d-2)/2} growth factor.
double window_shape(Window w, int j, int n);

/// Directionality component zeta_k^{d,n} for cutoff K, d >= 4.
/// Throws UnsupportedDimensionError for d = 3.
double zeta(int d, int n, const MultiIndex& k, int K);

/// User directionality rows for d = 3: degree -> (k -> value). The row of the
/// largest listed degree is reused for every higher degree.
using ZetaTable = std::map<int, std::map<int, double>>;

/// Psi^0 = 1 and Psi^j(n, k) = kappa_{i,j}(n) zeta_k^{d,n}, N_j = 2^j.
FrameSpec wavelet_spec(int d, int K, int J, Window w, const ZetaTable* user_zeta = nullptr);

/// Zonal frame: Psi^j(n, 0) = w_j(n) Y_0^{d,n}(e^d) with unscaled window shapes,
/// so sigma_n is the sum of squared shapes.
FrameSpec zonal_spec(int d, int J, Window w);

/// Two entries per degree, k = (n, ..., n, +-n), each kappa_{1,j}(n)/sqrt(2), plus g_0.
FrameSpec curvelet_spec(int d, int J);

/// sqrt(2) sum_n kappa_{1,j}(n) A^n_{(n..n)} Re{(x_d + i x_{d-1})^n}.
double curvelet_eval_closed(int d, int j, const CartesianPoint& x);

/// Cyclic shift e^1 -> e^{d-1}, e^2 -> e^d, e^i -> e^{i-2}; always in SO(d).
Rotation make_g0(int d);

struct PolarGrid {
  std::vector<double> t;
  std::vector<double> phi;
  Eigen::MatrixXd values;  // rows follow t, columns follow phi
  double rescale = 1.0;    // max |raw value|
  double max_imag = 0.0;   // largest discarded imaginary part
};

/// Samples Psi^j(cos t e^d + sin t (cos phi e^{d-1} + sin phi v)), v = (eta'', 0, 0),
/// and divides by the largest magnitude. t runs over [0, t_max] inclusive, phi
/// over [0, 2 pi) with nphi equispaced values. Parallel over rows.
PolarGrid polar_sample(const FrameSpec& spec, int j, int nt, int nphi, double t_max,
                       const std::optional<Eigen::VectorXd>& eta_doubleprime = std::nullopt);

std::string to_csv(const PolarGrid& g);

/// Binary P5 image, pixel = round((v + 1) / 2 * 255) with halves away from zero.
std::string to_pgm(const PolarGrid& g);

}  // namespace sphereframe::constructions
