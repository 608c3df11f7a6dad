#pragma once

// Twisted spherical means, twisted convolution, the Laguerre-function identity
// and the radial ODE probe.

#include "tsmkit/common.hpp"
#include "tsmkit/group.hpp"
#include "tsmkit/quadrature.hpp"
#include "tsmkit/radial.hpp"
#include "tsmkit/symplectic.hpp"
#include "tsmkit/type_function.hpp"

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace tsmkit {

/// Opaque function of z with declared singular points.
struct BlackBox {
  int n = 1;
  std::function<cplx(const CVec&)> fn;
  std::vector<CVec> singularities;
  /// |f(z)| <= C e^{-rate |z|^2 / 4} for large |z|; 0 when unknown or not decaying.
  double envelope_rate = 0.0;
  std::string name = "black box";
};

class Evaluable {
 public:
  Evaluable(TypeFunction f);
  Evaluable(BlackBox f);

  int n() const;
  bool is_type_function() const { return std::holds_alternative<TypeFunction>(v_); }
  const TypeFunction* type_function() const { return std::get_if<TypeFunction>(&v_); }
  const std::string& name() const { return name_; }

  cplx operator()(const CVec& z) const;
  cplx operator()(const cplx* z) const;

  std::vector<CVec> singularities() const;
  /// Gaussian decay rate r with |f| ~ e^{-r |z|^2 / 4}; 0 when not decaying.
  double envelope_rate() const;

  /// y -> f(M y) in real coordinates.
  Evaluable pullback(const RMat& m) const;

 private:
  std::variant<TypeFunction, BlackBox> v_;
  std::shared_ptr<const CompiledTypeFunction> compiled_;
  std::string name_;
};

struct MeanResult {
  cplx value;
  double err_estimate = 0.0;  // MC: standard error; product rule: |I(order) - I(order/2)|; exact: tail bound
  std::size_t nodes = 0;
  std::string rule;
};

/// Normalized integral over |w| = s of f(z - w) e^{(i/2) <x, V xi>}, x = realify(z), xi = realify(w).
MeanResult twisted_sphere_mean(const RMat& V, const Evaluable& f, const CVec& z, double s,
                               const QuadratureRule& rule);

/// Phase (1/2) sum_j lambda_j Re(z . conj(U^(j) w)).
MeanResult tsm(const StepTwoGroup& group, const RVec& lambda, const Evaluable& f, const CVec& z,
               double s, const QuadratureRule& rule);

/// Phase (1/2) sum_j mu_j Im(z_j conj(w_j)); mu = 0 gives the Euclidean spherical mean.
MeanResult reduced_tsm(const RVec& mu, const Evaluable& f, const CVec& z, double s,
                       const QuadratureRule& rule);

struct FrameCheck {
  cplx lhs;  // f x_lambda mu_s at the point A x
  cplx rhs;  // f_lambda reduced mean at z, f_lambda(y) = f(A y)
  double residual = 0.0;
  double err_estimate = 0.0;
};

FrameCheck frame_equivalence_check(const StepTwoGroup& group, const ReducedFrame& frame,
                                   const Evaluable& f, const CVec& z, double s,
                                   const QuadratureRule& rule);

struct ConvolutionResult {
  cplx value;
  double err_estimate = 0.0;
  std::size_t nodes = 0;
  double radius = 0.0;
};

/// Truncation half-width |z| + sqrt(-4 ln(1e-14) / rate).
double truncation_radius(double center_norm, double rate);

/// Integral over C^n of f(z - w) g(w) e^{(i/2) lambda Im(z . conj(w))} dw (grid or mc rules).
ConvolutionResult twisted_convolution(double lambda, const Evaluable& f, const Evaluable& g,
                                      const CVec& z, const QuadratureRule& rule);

struct RadialProfile {
  std::function<cplx(double)> fn;
  double envelope_rate = 0.0;

  static RadialProfile from(const RadialSum& r);
};

/// Twisted convolution of two radial functions on C^N evaluated at z' = (r, 0, ..., 0).
ConvolutionResult radial_twisted_convolution(double lambda, const RadialProfile& g,
                                             const RadialProfile& h, int N, double r,
                                             const QuadratureRule& rule);

struct HeckeBochnerResult {
  cplx lhs;
  cplx rhs;
  double residual = 0.0;
  double relative = 0.0;
  bool vanishing_branch = false;  // k < p (lambda > 0) or k < q (lambda < 0)
  double lhs_err = 0.0;
  double rhs_err = 0.0;
};

/// Constant in front of the right side. With both convolutions unnormalized (as
/// twisted_convolution computes them) the identity holds with (2 pi)^{-(p+q)};
/// (2 pi)^{-n} is the form usually quoted and agrees only when p + q = n.
enum class HeckeConstant { two_pi_pq, two_pi_n };

/// lhs = (P g) x_lambda phi_{k,lambda}^{n-1}(z);
/// rhs = C |lambda|^{p+q} P(z) (g x_lambda phi_{k-p,lambda}^{n+p+q-1})(z') for lambda > 0, k >= p,
/// with k - q for lambda < 0, k >= q, and 0 otherwise.
HeckeBochnerResult hecke_bochner_check(int n, int p, int q, int k, double lambda, const RadialSum& g,
                                       const BiPolynomial& P, const CVec& z, const QuadratureRule& rule,
                                       HeckeConstant constant = HeckeConstant::two_pi_pq);

struct BoundaryProbe {
  double mu = 0.0;
  std::vector<double> r;
  std::vector<cplx> F;
  std::vector<double> integral_residual;  // |F(r)/r - F(r0)/r0 - (mu/2) int_{r0}^r F|
  std::vector<double> ode_residual;       // |F'(r) - (mu r / 2 + 1/r) F(r)|
  std::vector<cplx> c_estimate;           // r F(r) e^{-mu r^2 / 4}
  double max_integral_residual = 0.0;
  double max_ode_residual = 0.0;
  double max_abs_F = 0.0;
  bool c_zero_consistent = false;
};

/// Checks sampled values F(r_i) (grid of at least 6 increasing points) against the radial ODE.
BoundaryProbe boundary_ode_check(double mu, const std::vector<double>& r, const std::vector<cplx>& F,
                                 double zero_tol = 1e-10);

/// F(t) = t^{2n-1} (g reduced-mean over |w| = t)(z), then boundary_ode_check with mu[0].
BoundaryProbe boundary_ode_probe(const RVec& mu, const Evaluable& g, const CVec& z,
                                 const std::vector<double>& r_grid, const QuadratureRule& rule,
                                 double zero_tol = 1e-10);

/// Uniform grid of count points on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int count);

}  // namespace tsmkit
