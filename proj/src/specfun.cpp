#include "sphereframe/specfun.hpp"

#include <cmath>
#include <string>

#include "sphereframe/errors.hpp"

namespace sphereframe::specfun {

// lgamma writes the global signgam; the reentrant variant keeps this module pure.
double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double gegenbauer(double lambda, int n, double t) {
  if (!(lambda > 0.0)) {
    throw ParameterError("gegenbauer: lambda must be positive, got " + std::to_string(lambda));
  }
  if (n < 0) throw ParameterError("gegenbauer: negative degree");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * lambda * t;
  for (int m = 2; m <= n; ++m) {
    const double next = (2.0 * (m + lambda - 1.0) * t * cur - (m + 2.0 * lambda - 2.0) * prev) / m;
    prev = cur;
    cur = next;
  }
  return cur;
}

void gegenbauer_table(double lambda, double t, std::span<double> out) {
  const auto size = out.size();
  if (size == 0) return;
  out[0] = 1.0;
  if (size == 1) return;
  out[1] = 2.0 * lambda * t;
  for (std::size_t m = 2; m < size; ++m) {
    const double md = static_cast<double>(m);
    out[m] = (2.0 * (md + lambda - 1.0) * t * out[m - 1] - (md + 2.0 * lambda - 2.0) * out[m - 2]) / md;
  }
}

double log_gegenbauer_at_one(double lambda, int n) {
  return log_gamma(n + 2.0 * lambda) - log_gamma(n + 1.0) - log_gamma(2.0 * lambda);
}

double log_norm_A(int d, int n, const MultiIndex& k) {
  if (d < 3 || k.dim() != d || !k.valid_for_degree(n)) {
    throw IndexError("log_norm_A: index " + k.to_string() + " not in I_" + std::to_string(n) +
                     "^" + std::to_string(d));
  }
  if (n == 0) return 0.0;
  const double log2 = std::log(2.0);
  const double log_sqrt_pi = 0.5 * std::log(M_PI);
  double acc = (d - 4.0) * (d - 2.0) * log2 - log_gamma(d / 2.0);
  int upper = n;
  for (int j = 0; j <= d - 3; ++j) {
    const int a = std::abs(k[static_cast<std::size_t>(j)]);
    const double lam = (d - j - 2) / 2.0 + a;
    acc += (2.0 * a - j) * log2 + log_gamma(upper - a + 1.0) + std::log(2.0 * upper + d - j - 2.0) +
           2.0 * log_gamma(lam) - log_sqrt_pi - log_gamma(upper + a + d - j - 2.0);
    upper = a;
  }
  return 0.5 * acc;
}

double q_d(int d, int k1) {
  const double a = std::abs(k1);
  return a * a + a * (d - 3) - (d - 2) * (1.0 - d / 4.0);
}

double Q_d(int d, int k1, int n) {
  const double denom = static_cast<double>(n) * n + static_cast<double>(n) * (d - 1) + d * (d - 2) / 4.0;
  if (!(denom > 0.0)) throw DomainError("Q_d: non-positive denominator");
  const double radicand = 1.0 - q_d(d, k1) / denom;
  if (radicand < 0.0) {
    // |k1| = n + 1 gives an exact zero that may round slightly negative
    if (radicand > -1e-14) return 0.0;
    throw DomainError("Q_d: negative radicand for k1=" + std::to_string(k1) + ", n=" + std::to_string(n));
  }
  return 0.5 * std::sqrt(radicand);
}

}  // namespace sphereframe::specfun
