#pragma once

// Functions sum e^{a rho^2} rho^k P(z, zbar) and the twisted vector fields acting on them.

#include "tsmkit/bipolynomial.hpp"
#include "tsmkit/group.hpp"
#include "tsmkit/radial.hpp"

#include <utility>
#include <vector>

namespace tsmkit {

/// e^{a rho^2} rho^k P(z), rho = |z|.
struct TypePiece {
  cplx a;
  int k = 0;
  BiPolynomial P;
};

class TypeFunction {
 public:
  TypeFunction() = default;
  explicit TypeFunction(int n) : n_(n) {}

  static TypeFunction product(const RadialSum& radial, const BiPolynomial& angular);
  static TypeFunction radial(int n, const RadialSum& radial);
  static TypeFunction polynomial(const BiPolynomial& angular);

  int n() const noexcept { return n_; }
  const std::vector<TypePiece>& pieces() const noexcept { return pieces_; }
  bool is_zero() const noexcept { return pieces_.empty(); }
  double max_abs_coeff() const;

  /// Grouped by angular part: the (radial, angular) summand view.
  std::vector<std::pair<RadialSum, BiPolynomial>> summands() const;

  void add(cplx a, int k, const BiPolynomial& p);

  TypeFunction& operator+=(const TypeFunction& o);
  TypeFunction& operator-=(const TypeFunction& o);
  TypeFunction& operator*=(cplx s);
  friend TypeFunction operator+(TypeFunction x, const TypeFunction& y) { return x += y; }
  friend TypeFunction operator-(TypeFunction x, const TypeFunction& y) { return x -= y; }
  friend TypeFunction operator*(TypeFunction x, cplx s) { return x *= s; }
  friend TypeFunction operator*(cplx s, TypeFunction x) { return x *= s; }

  TypeFunction times(const BiPolynomial& p) const;
  TypeFunction times(const RadialSum& r) const;

  TypeFunction d_dz(int j) const;
  TypeFunction d_dzbar(int j) const;

  /// Throws SingularityError at the origin when a negative power is present.
  cplx operator()(const CVec& z) const;

  bool singular_at_origin() const;
  /// Largest Re(a) over all pieces: |f| decays like e^{max_re_a rho^2}.
  double max_gaussian_real() const;

  /// Radial part when every angular factor is a constant; throws otherwise.
  RadialSum as_radial() const;

 private:
  int n_ = 0;
  std::vector<TypePiece> pieces_;
};

/// Flattened form of a TypeFunction for repeated evaluation on quadrature nodes.
class CompiledTypeFunction {
 public:
  explicit CompiledTypeFunction(const TypeFunction& f);
  int n() const noexcept { return n_; }
  cplx operator()(const cplx* z) const;
  cplx operator()(const CVec& z) const { return (*this)(z.data()); }

 private:
  struct Piece {
    cplx a;
    int k;
    std::size_t first, last;  // monomial range
  };
  int n_ = 0;
  int max_exp_ = 0;
  bool singular_ = false;
  std::vector<Piece> pieces_;
  std::vector<int> factors_;             // offsets into the power table
  std::vector<std::size_t> factor_end_;  // per monomial, one past its last factor
  std::vector<cplx> coeffs_;
};

/// Z_j = d/dz_j + (1/4) sum_l (eta_{l,j} z_l + nu_{l,j} zbar_l),
/// Zbar_j = d/dzbar_j - (1/4) sum_l (conj(nu_{l,j}) z_l + conj(eta_{l,j}) zbar_l).
TypeFunction apply_Z(const TwistTable& table, int j, bool bar, const TypeFunction& f);
/// Z~_j = d/dz_j - (mu_j/4) zbar_j,  Z~*_j = d/dzbar_j + (mu_j/4) z_j.
TypeFunction apply_Z_reduced(const RVec& mu, int j, bool bar, const TypeFunction& f);
TypeFunction apply_Z(const StepTwoGroup& group, const RVec& lambda, int j, bool bar,
                     const TypeFunction& f, bool reduced);

/// Component whose angular factors lie in H_{p,q}; |z|^{2k} layers go into the radial part.
TypeFunction project_pq(const TypeFunction& f, int p, int q);
TypeFunction project_pq(const BiPolynomial& f, int p, int q);

}  // namespace tsmkit
