#pragma once

#include <span>

#include "sphereframe/types.hpp"

namespace sphereframe::specfun {

/// Reentrant log|Gamma(x)|.
double log_gamma(double x);

/// Gegenbauer polynomial C_n^lambda(t) by forward three-term recurrence.
/// Throws ParameterError for lambda <= 0.
double gegenbauer(double lambda, int n, double t);

/// Fills out[m] = C_m^lambda(t) for m = 0..out.size()-1. No argument checks.
void gegenbauer_table(double lambda, double t, std::span<double> out);

/// log binomial(n + 2 lambda - 1, n), the value of C_n^lambda at t = 1.
double log_gegenbauer_at_one(double lambda, int n);

/// log A_k^n, the normalization of the explicit basis, summed as log-Gamma
/// differences. Degree 0 is pinned to 0 (Y == 1). Throws IndexError for k not in I_n^d.
double log_norm_A(int d, int n, const MultiIndex& k);

/// Quadratic q_d(k1) entering the center-of-mass recurrence.
double q_d(int d, int k1);

/// Q_d^{k1}(n) = 1/2 sqrt(1 - q_d(k1) / (n^2 + n(d-1) + d(d-2)/4)).
/// Throws DomainError when the radicand is negative.
double Q_d(int d, int k1, int n);

}  // namespace sphereframe::specfun
