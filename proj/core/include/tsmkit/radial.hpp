#pragma once

// Gaussian-power sums sum c e^{a rho^2} rho^k and the D / Dbar operator stacks.

#include "tsmkit/common.hpp"

#include <string>
#include <vector>

namespace tsmkit {

struct RadialTerm {
  cplx c;
  cplx a;
  int k = 0;
};

class RadialSum {
 public:
  RadialSum() = default;
  explicit RadialSum(std::vector<RadialTerm> terms);

  static RadialSum constant(cplx c) { return RadialSum({{c, 0.0, 0}}); }
  static RadialSum term(cplx c, cplx a, int k) { return RadialSum({{c, a, k}}); }

  const std::vector<RadialTerm>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  double max_abs_coeff() const;
  int min_power() const;

  /// Merges c into an existing (a, k) entry, pruning at 1e-15.
  void add(cplx c, cplx a, int k);

  RadialSum& operator+=(const RadialSum& o);
  RadialSum& operator-=(const RadialSum& o);
  RadialSum& operator*=(cplx s);
  friend RadialSum operator+(RadialSum x, const RadialSum& y) { return x += y; }
  friend RadialSum operator-(RadialSum x, const RadialSum& y) { return x -= y; }
  friend RadialSum operator*(RadialSum x, cplx s) { return x *= s; }
  friend RadialSum operator*(cplx s, RadialSum x) { return x *= s; }
  friend RadialSum operator*(const RadialSum& x, const RadialSum& y);

  cplx operator()(double rho) const;

  /// Multiply by rho^dk.
  RadialSum shifted(int dk) const;
  /// Multiply by e^{b rho^2}.
  RadialSum scaled_gaussian(cplx b) const;

  RadialSum d_drho() const;
  RadialSum rho_d_drho() const;
  /// (1/(2 rho)) d/drho, i.e. d/d(rho^2).
  RadialSum d_drho2() const;

 private:
  std::vector<RadialTerm> terms_;
};

/// D = rho d/drho + (nu/2) rho^2, Dbar = rho d/drho - (conj(nu)/2) rho^2.
RadialSum apply_D(const RadialSum& a, cplx nu, bool bar);

struct StackAtom {
  enum class Kind { D, Dbar, rho_power };
  Kind kind = Kind::D;
  double kappa = 0.0;  // D, Dbar: atom is (kappa * D + 2)
  cplx nu;             // D, Dbar
  int power = 0;       // rho_power: multiply by weight * rho^{2 power}
  cplx weight = 1.0;
  std::string label;
};

/// Atoms are written left to right and applied right to left.
struct OperatorStack {
  int n = 0;
  int p = 0;
  int q = 0;
  std::vector<StackAtom> atoms;

  RadialSum apply(const RadialSum& a) const;
};

RadialSum apply_atom(const StackAtom& atom, const RadialSum& a);

enum class KappaSchedule {
  standard,      // D atoms gamma_{p-i+1,q}, Dbar atoms gamma_{p,q-k+1}
  ascending  // Dbar atoms gamma_{p,q+k-1}
};

std::string to_string(KappaSchedule s);
KappaSchedule parse_kappa_schedule(const std::string& text);

/// gamma_{p,q} = 1/(n+p+q-1).
double gamma_pq(int n, int p, int q);

/// prod_{k=1}^q (kappa~_k Dbar + 2) prod_{i=1}^p (kappa_i D + 2).
OperatorStack build_stack(int p, int q, int n, KappaSchedule schedule, cplx nu_l1, cplx nu_l2);
/// Caller-provided schedule: first p values for the D atoms (i = 1..p), then q values
/// for the Dbar atoms (k = 1..q). Throws if a value is not of the form 1/(n+s-1).
OperatorStack build_stack(int p, int q, int n, const std::vector<double>& kappas, cplx nu_l1,
                          cplx nu_l2);

/// sum_i A_i e^{-nu1 rho^2/4} rho^{-2(p+q+n-i)} + sum_k B_k e^{conj(nu2) rho^2/4} rho^{-2(p+q+n-k)}.
/// conjugate_b = false uses e^{nu2 rho^2/4} instead.
RadialSum solution_family(int p, int q, int n, cplx nu_l1, cplx nu_l2, const std::vector<cplx>& A,
                          const std::vector<cplx>& B, bool conjugate_b = true);

struct AnnihilationReport {
  RadialSum result;
  double residual = 0.0;
  double tolerance = 1e-12;
  bool pass = false;
};

AnnihilationReport annihilation_check(const OperatorStack& stack, const RadialSum& a,
                                      double tol = 1e-12);

}  // namespace tsmkit
