#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sphereframe/quadrature.hpp"
#include "sphereframe/types.hpp"

namespace sphereframe {

struct FrameMetadata {
  std::optional<int> steerable_K;
  std::optional<int> invariant_m;
  /// Applied to every scale: the frame element is T(g0) of the stored table.
  std::optional<Rotation> base_rotation;
};

struct Scale {
  int j = 0;
  int N = 0;  // bandwidth N_j
  CoeffTable coeffs;
};

/// Frame-generating sequence Psi^j given by coefficient tables.
struct FrameSpec {
  int d = 3;
  std::vector<Scale> scales;
  FrameMetadata metadata;

  /// Throws on coefficients above N_j, on a dimension mismatch, or on
  /// decreasing bandwidths.
  void validate() const;
  int max_degree() const;
  const Scale* find_scale(int j) const;
};

/// Bandlimited function by its coefficient table, degree <= N_f.
struct Signal {
  int degree = 0;
  CoeffTable coeffs;

  Signal() = default;
  Signal(int N, CoeffTable table);
  int dim() const noexcept { return coeffs.dim(); }

  /// Complex Gaussian coefficient on every (n, k), n <= N, scaled to unit energy.
  static Signal random(int d, int N, std::uint64_t seed);
};

namespace frames {

/// sigma[n] for n = 0..n_max.
using SpectralProfile = std::vector<double>;

SpectralProfile sigma_profile(const FrameSpec& spec, int n_max);

struct FrameBounds {
  double C1 = 0.0;
  double C2 = 0.0;
  bool is_frame_on_range = false;
  std::vector<int> zero_degrees;
};

/// Certifies the frame inequality on Pi_{n_max} only.
FrameBounds frame_bounds(const FrameSpec& spec, int n_max);

/// (dim H_n)^{-1} sum_j sum_k conj(A) B for n = 0..n_max. Scales are paired by j.
std::vector<Complex> dual_sums(const FrameSpec& a, const FrameSpec& b, int n_max);

/// max_n |dual_sums - 1|.
double dual_residual(const FrameSpec& a, const FrameSpec& b, int n_max);
bool check_dual(const FrameSpec& a, const FrameSpec& b, int n_max, double tol);

/// Rescales degree n by 1/sigma_n. Throws NotAFrameError where sigma vanishes on the support.
FrameSpec canonical_dual(const FrameSpec& spec);

/// Spec plus one rotation rule per scale of class N_j.
struct FrameSystem {
  FrameSpec spec;
  std::vector<quadrature::RotationRule> grids;
};

/// K defaults to the steerable_K metadata for steerable variants.
FrameSystem make_system(const FrameSpec& spec, quadrature::GridVariant variant, std::optional<int> K = std::nullopt);

/// Per scale, one coefficient per grid rotation in grid order.
using Coefficients = std::vector<std::vector<Complex>>;

/// c_{j,r} = sqrt(mu_r) <f, T(g_r g_0) Psi^j>, by exact quadrature. Parallel over rotations.
std::vector<Complex> analysis(const FrameSystem& system, const Signal& f, std::size_t scale_index);
Coefficients analysis(const FrameSystem& system, const Signal& f);

/// Serial term-by-term version of analysis.
std::vector<Complex> analysis_reference(const FrameSystem& system, const Signal& f, std::size_t scale_index);

/// Sum over scales and rotations of sqrt(mu) c T(g g_0) dual^j, projected to degree <= N_out.
Signal synthesis(const FrameSystem& system, const FrameSpec& dual, const Coefficients& coeffs, int N_out);
Signal synthesis_reference(const FrameSystem& system, const FrameSpec& dual, const Coefficients& coeffs, int N_out);

struct ParsevalReport {
  double discrete_sum = 0.0;
  double spectral_sum = 0.0;
  double rel_gap = 0.0;
};

ParsevalReport parseval_check(const FrameSystem& system, const Signal& f);
/// Same, reusing coefficients from a previous analysis.
ParsevalReport parseval_check(const FrameSystem& system, const Signal& f, const Coefficients& coeffs);

/// (dim H_n)^{-1} sum_{j <= J} sum_k conj(A^j) B^j.
Complex sigma_J(const FrameSpec& a, const FrameSpec& b, int J, int n);

/// Multiplies f(n, .) by sigma_J(n) and truncates to n <= N_J.
Signal apply_Lambda_J(const FrameSpec& a, const FrameSpec& b, int J, const Signal& f);

double relative_error(const CoeffTable& got, const CoeffTable& want);

}  // namespace frames
}  // namespace sphereframe
