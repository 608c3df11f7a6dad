#pragma once

// Step-two nilpotent groups R^{2n} x R^m given by skew structure matrices.

#include "tsmkit/common.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tsmkit {

enum class GroupMode { metivier, htype, heisenberg };

std::string to_string(GroupMode mode);
GroupMode parse_group_mode(const std::string& text);

/// Group law (x,t)(xi,tau) = (x+xi, t_j + tau_j + <x, U^(j) xi>/2).
/// Construction checks shapes only; structural conditions are reported by
/// validate_group so that bad inputs can still be inspected.
class StepTwoGroup {
 public:
  StepTwoGroup(int n, int m, std::vector<RMat> structure);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  int dim() const noexcept { return 2 * n_; }
  const std::vector<RMat>& structure() const noexcept { return u_; }
  const RMat& U(int k) const { return u_.at(k); }

 private:
  int n_;
  int m_;
  std::vector<RMat> u_;
};

struct GroupPoint {
  RVec x;  // length 2n
  RVec t;  // length m
};

struct ConditionResult {
  std::string name;
  bool pass = false;
  /// Max entrywise residual, except for "linear_independence" where it is the
  /// smallest singular value of the stacked matrices (pass iff above tolerance).
  double residual = 0.0;
  double tolerance = 0.0;
};

enum class MetivierStatus { certified, heuristic_pass, heuristic_fail };
std::string to_string(MetivierStatus status);

struct MetivierReport {
  MetivierStatus status = MetivierStatus::heuristic_fail;
  int samples = 0;
  double min_abs_det = 0.0;
  RVec argmin_lambda;
  double tolerance = kSpectralTol;

  bool pass() const noexcept { return status != MetivierStatus::heuristic_fail; }
};

struct ValidationReport {
  GroupMode mode = GroupMode::metivier;
  int n = 0;
  int m = 0;
  std::vector<ConditionResult> conditions;
  std::optional<MetivierReport> metivier;

  bool all_pass() const;
  double worst_residual() const;
};

struct MetivierOptions {
  int sample_count = 512;
  std::uint64_t seed = 0;
  double tolerance = kSpectralTol;
};

/// Throws DimensionError (index = offending matrix) if a matrix is not 2n x 2n
/// or the list length differs from m; every other defect is a failed condition.
ValidationReport validate_group(const std::vector<RMat>& structure, int n, int m,
                                GroupMode mode, const MetivierOptions& opts = {});
ValidationReport validate_group(const StepTwoGroup& group, GroupMode mode,
                                const MetivierOptions& opts = {});

/// Sampled lower bound on |det sum_j lambda_j U^(j)| over unit lambda. The
/// sample set is the +-coordinate axes followed by seeded random directions.
/// Groups satisfying the H-type conditions are reported as certified.
MetivierReport check_metivier(const StepTwoGroup& group, const MetivierOptions& opts = {});

/// Max residuals of the H-type conditions: skew, orthogonal, pairwise anticommuting.
struct HTypeResiduals {
  double skew = 0.0;
  double orthogonal = 0.0;
  double anticommute = 0.0;
  bool holds(double tol = kStructuralTol) const {
    return skew <= tol && orthogonal <= tol && anticommute <= tol;
  }
};
HTypeResiduals htype_residuals(const std::vector<RMat>& structure);

GroupPoint group_law(const StepTwoGroup& group, const GroupPoint& p, const GroupPoint& q);
GroupPoint group_inverse(const GroupPoint& p);
GroupPoint group_identity(const StepTwoGroup& group);

/// Twist coefficients for fixed lambda. Entry (l, j) belongs to the vector
/// field with target index j:
///   alpha(l,j) = 1/2 sum_k lambda_k (U^k_{l,j}   - i U^k_{l,n+j})
///   beta(l,j)  = 1/2 sum_k lambda_k (U^k_{n+l,j} - i U^k_{n+l,n+j})
///   nu = -beta + i alpha,  eta = beta + i alpha.
struct TwistTable {
  RVec lambda;
  CMat alpha;
  CMat beta;
  CMat nu;
  CMat eta;

  int n() const noexcept { return static_cast<int>(nu.rows()); }
  /// nu_j for the field Z_j (the diagonal entry used by the radial operators).
  cplx nu_diag(int j) const { return nu(j, j); }
};

TwistTable twist_coefficients(const StepTwoGroup& group, const RVec& lambda);

/// Heisenberg group H^n: m = 1, U = [[0, -I], [I, 0]].
StepTwoGroup heisenberg_group(int n);
/// R^4 = quaternions, U^(1..3) = left multiplication by i, j, k (m = 3, n = 2).
StepTwoGroup quaternionic_group();
/// Left multiplication by a unit imaginary quaternion, as a 4x4 matrix acting on
/// coordinates (a, b, c, d) of a + b i + c j + d k.
RMat quaternion_left_multiplication(int unit);

}  // namespace tsmkit
