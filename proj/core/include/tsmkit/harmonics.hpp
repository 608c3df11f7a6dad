#pragma once

// Complex Laplacian, bi-graded harmonic layers, sphere moments and frame conjugation.

#include "tsmkit/bipolynomial.hpp"
#include "tsmkit/symplectic.hpp"

#include <string>
#include <vector>

namespace tsmkit {

/// Delta = 4 sum_j d^2 / dz_j dzbar_j.
BiPolynomial laplacian(const BiPolynomial& p);

/// c with Delta(|z|^{2k} H) = c |z|^{2k-2} H for H harmonic of total degree m on C^n.
double laplacian_norm_power_constant(int k, int m, int n);

/// P = sum_k |z|^{2k} layers[k], layers[k] harmonic of bi-degree (p-k, q-k).
struct HarmonicLayers {
  int n = 0;
  int p = 0;
  int q = 0;
  std::vector<BiPolynomial> layers;

  BiPolynomial reconstruct() const;
  double max_laplacian_residual() const;
};

/// Throws std::invalid_argument when p is not bi-homogeneous.
HarmonicLayers harmonic_decompose(const BiPolynomial& p);
/// Explicit bi-degree, needed for the zero polynomial.
HarmonicLayers harmonic_decompose(const BiPolynomial& p, int deg_z, int deg_zbar);

bool is_harmonic(const BiPolynomial& p, double tol = kStructuralTol);

struct Rational {
  long num = 0;
  long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

enum class Side { zbar, z };

/// zbar_j P = P0 + gamma |z|^2 dP/dz_j (Side::zbar), or
/// z_j P = P0 + gamma |z|^2 dP/dzbar_j (Side::z), gamma = 1/(n+p+q-1).
struct HarmonicSplit {
  BiPolynomial P0;
  Rational gamma;
  BiPolynomial derivative;  // dP/dz_j or dP/dzbar_j
  double reconstruction_residual = 0.0;
  double harmonic_residual = 0.0;  // max coefficient of Delta P0
};

HarmonicSplit harmonic_split(const BiPolynomial& p, int j, Side side);

/// Integral of w^alpha wbar^beta over S^{2n-1} against the normalized measure.
double sphere_moment(const std::vector<int>& alpha, const std::vector<int>& beta);
double sphere_moment(const BiIndex& idx);

/// Normalized sphere integral of P.
cplx sphere_integral(const BiPolynomial& p);
/// Normalized sphere integral of P conj(Q).
cplx sphere_inner(const BiPolynomial& p, const BiPolynomial& q);

/// Q with Q(y) = P(M y) in real coordinates, expressed again in (z, zbar).
BiPolynomial compose_linear(const BiPolynomial& p, const RMat& m);

/// P_lambda(y) = P(A y) (to_reduced), or P(A^T y) (from_reduced).
BiPolynomial conjugate_poly(const BiPolynomial& p, const ReducedFrame& frame,
                            Transport direction = Transport::to_reduced);

/// Delta P_lambda = 0 and P_lambda bi-homogeneous of degree (p, q).
bool is_Hlambda_pq(const BiPolynomial& poly, int p, int q, const ReducedFrame& frame,
                   double tol = 1e-10);

}  // namespace tsmkit
