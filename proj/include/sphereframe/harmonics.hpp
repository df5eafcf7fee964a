#pragma once

#include <cstdint>
#include <vector>

#include "sphereframe/types.hpp"

namespace sphereframe::harmonics {

/// dim H_n^d = (2n+d-2)(n+d-3)! / ((d-2)! n!), exact in integer arithmetic.
std::int64_t dim_harmonic(int d, int n);

/// dim Pi_N(S^{d-1}) = sum of dim_harmonic over n <= N.
std::int64_t dim_polynomial(int d, int N);

/// I_n^d in lexicographic order: n >= k_1 >= ... >= k_{d-3} >= |k_{d-2}|.
std::vector<MultiIndex> index_set(int d, int n);

/// Every index of every degree n <= n_max, as (n, k) keys in table order.
std::vector<HarmonicKey> basis_keys(int d, int n_max);

/// Cartesian to spherical coordinates for d >= 2. Angles left undetermined by a
/// vanishing sine are set to 0. Throws DomainError when | ||x|| - 1 | > 1e-8.
SphericalPoint to_spherical(const CartesianPoint& x);
CartesianPoint to_cartesian(const SphericalPoint& p);

/// Y_k^{d,n}(p) for the explicit basis; throws IndexError for k outside I_n^d.
Complex eval_harmonic(int d, int n, const MultiIndex& k, const SphericalPoint& p);

/// ((2n+d-2)/(d-2)) C_n^{(d-2)/2}(s).
double addition_kernel(int d, int n, double s);

}  // namespace sphereframe::harmonics
