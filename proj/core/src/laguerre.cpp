#include "tsmkit/laguerre.hpp"

#include <cmath>
#include <stdexcept>

namespace tsmkit {

double laguerre(int k, double alpha, double x) {
  if (k < 0) throw std::invalid_argument("laguerre: k must be >= 0");
  double l0 = 1.0;
  if (k == 0) return l0;
  double l1 = 1.0 + alpha - x;
  for (int j = 1; j < k; ++j) {
    const double l2 = ((2.0 * j + 1.0 + alpha - x) * l1 - (j + alpha) * l0) / (j + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

double laguerre_phi(int k, int n, double lambda_norm, double rho) {
  if (lambda_norm <= 0.0) throw std::invalid_argument("laguerre_phi: |lambda| must be positive");
  if (n < 1) throw std::invalid_argument("laguerre_phi: n must be >= 1");
  const double r2 = lambda_norm * rho * rho;
  return laguerre(k, n - 1.0, 0.5 * r2) * std::exp(-0.25 * r2);
}

double laguerre_phi(int k, int n, double lambda_norm, const CVec& z) {
  return laguerre_phi(k, n, lambda_norm, z.norm());
}

// L_k^a(x) = sum_i (-1)^i binom(k+a, k-i) x^i / i!
RadialSum laguerre_phi_radial(int k, int n, double lambda_norm) {
  if (k < 0) throw std::invalid_argument("laguerre_phi_radial: k must be >= 0");
  if (lambda_norm <= 0.0) throw std::invalid_argument("laguerre_phi_radial: |lambda| must be positive");
  const double a = n - 1.0;
  RadialSum out;
  const cplx gauss = -0.25 * lambda_norm;
  double scale = 1.0;  // (|lambda|/2)^i / i!
  for (int i = 0; i <= k; ++i) {
    // binom(k+a, k-i) = prod_{j=1}^{k-i} (i+a+j)/j
    double binom = 1.0;
    for (int j = 1; j <= k - i; ++j) binom *= (i + a + j) / j;
    out.add((i % 2 == 0 ? 1.0 : -1.0) * binom * scale, gauss, 2 * i);
    scale *= 0.5 * lambda_norm / (i + 1.0);
  }
  return out;
}

}  // namespace tsmkit
