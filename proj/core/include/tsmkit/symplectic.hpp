#pragma once

// Canonical form of V_lambda = sum_j lambda_j U^(j) under an orthogonal frame.

#include "tsmkit/common.hpp"
#include "tsmkit/group.hpp"

namespace tsmkit {

/// V A = A Ucanon with A orthogonal and Ucanon = [[0, -J], [J, 0]],
/// J = diag(mu_1 >= ... >= mu_n > 0). Columns of A are (v_1..v_n, u_1..u_n)
/// with V v_j = mu_j u_j and V u_j = -mu_j v_j.
struct ReducedFrame {
  RVec lambda;
  RMat V;
  RMat A;
  RVec mu;
  RMat Ucanon;
  double orthogonality_residual = 0.0;  // max |A^T A - I|
  double conjugation_residual = 0.0;    // max |V A - A Ucanon|

  int n() const noexcept { return static_cast<int>(mu.size()); }
};

RMat build_V(const StepTwoGroup& group, const RVec& lambda);

/// Throws DegenerateFormError when V has a singular value <= 1e-10, and
/// NumericError when the residuals exceed 1e-10 after re-orthogonalization.
ReducedFrame reduce(const RMat& V);
ReducedFrame reduce(const StepTwoGroup& group, const RVec& lambda);

RMat canonical_block(const RVec& mu);

enum class Transport {
  to_reduced,   // z -> complexification of A^T x
  from_reduced  // z -> complexification of A x
};

CVec transport_point(const ReducedFrame& frame, const CVec& z,
                     Transport direction = Transport::to_reduced);

struct PhaseIdentity {
  double lhs = 0.0;  // sum_j lambda_j Re(z . conj(U^(j) w))
  double rhs = 0.0;  // sum_j mu_j Im((z_lambda)_j conj((w_lambda)_j))
  double residual = 0.0;
};

PhaseIdentity phase_identity_check(const StepTwoGroup& group, const ReducedFrame& frame,
                                   const CVec& z, const CVec& w);

}  // namespace tsmkit
