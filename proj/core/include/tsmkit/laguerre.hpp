#pragma once

// Laguerre polynomials and the Laguerre functions phi_{k,lambda}^{n-1}.

#include "tsmkit/common.hpp"
#include "tsmkit/radial.hpp"

namespace tsmkit {

/// L_k^alpha(x) by the three-term recurrence.
double laguerre(int k, double alpha, double x);

/// phi_{k,lambda}^{n-1}(z) = L_k^{n-1}(|lambda| |z|^2 / 2) e^{-|lambda| |z|^2 / 4}, as a function of rho = |z|.
double laguerre_phi(int k, int n, double lambda_norm, double rho);
double laguerre_phi(int k, int n, double lambda_norm, const CVec& z);

/// The same function as a Gaussian-power sum.
RadialSum laguerre_phi_radial(int k, int n, double lambda_norm);

}  // namespace tsmkit
