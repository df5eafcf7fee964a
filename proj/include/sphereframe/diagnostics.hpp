#pragma once

#include <optional>
#include <vector>

#include "sphereframe/frames.hpp"
#include "sphereframe/quadrature.hpp"
#include "sphereframe/types.hpp"

namespace sphereframe::diagnostics {

/// max |k_1| over the nonzero coefficients (|k| for d = 3); nullopt for an empty spec.
std::optional<int> steerable_order(const FrameSpec& spec);

/// Largest m in 2..d-1 with k_{d-m} = 0 on every nonzero coefficient.
std::optional<int> invariance_order(const FrameSpec& spec);

struct Xi0d {
  double times_normsq = 0.0;
  double value = 0.0;
};

/// d-th component of the center of mass from the adjacent-degree recurrence.
/// Throws DegenerateSignalError for a zero table.
Xi0d xi0_d_spectral(const CoeffTable& f);

/// int x |f(x)|^2 / ||f||^2 by quadrature; the rule must be exact on Pi_{2N_f+1}.
Eigen::VectorXd xi0_numeric(const CoeffTable& f, const quadrature::SphereRule& rule);
/// Builds sphere_rule(d, N_f + 1).
Eigen::VectorXd xi0_numeric(const CoeffTable& f);

struct SpaceVariance {
  double exact = 0.0;  // from the full center-of-mass vector
  double upper = 0.0;  // from its d-th component alone
  double xi_norm = 0.0;
  double xi_d = 0.0;
};

SpaceVariance var_space(const CoeffTable& f);
double var_momentum(const CoeffTable& f);
double uncertainty_product(const CoeffTable& f);

struct ScaleLocalization {
  int j = 0;
  int N = 0;
  double norm_sq = 0.0;
  double xi0_d = 0.0;
  Eigen::VectorXd xi0_vec;
  double var_space = 0.0;
  double var_space_upper = 0.0;
  double var_momentum = 0.0;
  double uncertainty_product = 0.0;
};

/// Reports for the requested scales (all scales with j >= 1 when empty).
std::vector<ScaleLocalization> localization_report(const FrameSpec& spec, const std::vector<int>& scales = {});

struct ScaleAudit {
  int j = 0;
  int N = 0;
  int M = 0;               // smallest degree carrying a nonzero coefficient
  double norm_sq = 0.0;
  double c1_ratio = 0.0;   // ||Psi||^2 / N^{d-1}
  double m_ratio = 0.0;    // M / N
  double c3 = 0.0;         // max |second difference| * N^{-(d-6)/2}
  double c4 = 0.0;         // max |second difference| / (N^{-2} |Psi(n,k)|) over nonzero Psi
  double size_bound = 0.0; // max |Psi(n,k)| * N^{-(d-2)/2}
};

/// Per scale with j >= 1 and a nonzero table. Needs at least two scales.
std::vector<ScaleAudit> audit_conditions(const FrameSpec& spec);

/// sum_i w_i Psi^j(h^{-1} eta_i) conj(Psi^j(eta_i)); h in SO(d-1) (embedded) or SO(d).
/// The rule must be exact on Pi_{2 N_j}; the default is sphere_rule(d, N_j).
Complex autocorrelation(const FrameSpec& spec, int j, const Rotation& h);
Complex autocorrelation(const FrameSpec& spec, int j, const Rotation& h, const quadrature::SphereRule& rule);

/// sum_n (sum_k |Psi^j(n,k)|^2) s^{min(K,n)} for specs whose degree blocks are
/// multiples of zeta(., K). Throws ShapeError otherwise.
double autocorrelation_closed(const FrameSpec& spec, int j, double s);

/// <e^{d-1}, h e^{d-1}> for h given in SO(d-1) or embedded in SO(d).
double autocorrelation_argument(const Rotation& h, int d);

}  // namespace sphereframe::diagnostics
