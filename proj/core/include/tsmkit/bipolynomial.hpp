#pragma once

// Sparse polynomials in (z, zbar) on C^n with complex coefficients.

#include "tsmkit/common.hpp"

#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace tsmkit {

/// Bi-multi-index (alpha, beta) for the monomial z^alpha zbar^beta.
class BiIndex {
 public:
  BiIndex() = default;
  explicit BiIndex(int n) : e_(2 * static_cast<std::size_t>(n), 0) {}
  BiIndex(std::span<const int> alpha, std::span<const int> beta);

  int n() const noexcept { return static_cast<int>(e_.size() / 2); }
  int alpha(int l) const { return e_[l]; }
  int beta(int l) const { return e_[n() + l]; }
  int& alpha(int l) { return e_[l]; }
  int& beta(int l) { return e_[n() + l]; }
  std::vector<int> alpha_vec() const { return {e_.begin(), e_.begin() + n()}; }
  std::vector<int> beta_vec() const { return {e_.begin() + n(), e_.end()}; }

  int p() const;  // |alpha|
  int q() const;  // |beta|
  int degree() const { return p() + q(); }

  BiIndex operator+(const BiIndex& o) const;
  bool operator==(const BiIndex& o) const = default;

  /// Graded lexicographic on (|alpha|+|beta|, alpha, beta).
  friend bool operator<(const BiIndex& a, const BiIndex& b);

  const std::vector<int>& raw() const noexcept { return e_; }

 private:
  std::vector<int> e_;
};

class BiPolynomial {
 public:
  using TermMap = std::map<BiIndex, cplx>;

  BiPolynomial() = default;
  explicit BiPolynomial(int n) : n_(n) {}

  static BiPolynomial constant(int n, cplx c);
  static BiPolynomial monomial(std::span<const int> alpha, std::span<const int> beta, cplx c = 1.0);
  static BiPolynomial monomial(const BiIndex& idx, cplx c = 1.0);
  static BiPolynomial z(int n, int j);
  static BiPolynomial zbar(int n, int j);
  /// |z|^2 = sum_j z_j zbar_j.
  static BiPolynomial norm_squared(int n);

  int n() const noexcept { return n_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  cplx coefficient(const BiIndex& idx) const;

  /// Adds c to the coefficient of idx, pruning the entry if it becomes <= 1e-15.
  void add_term(const BiIndex& idx, cplx c);

  BiPolynomial& operator+=(const BiPolynomial& o);
  BiPolynomial& operator-=(const BiPolynomial& o);
  BiPolynomial& operator*=(cplx s);
  friend BiPolynomial operator+(BiPolynomial a, const BiPolynomial& b) { return a += b; }
  friend BiPolynomial operator-(BiPolynomial a, const BiPolynomial& b) { return a -= b; }
  friend BiPolynomial operator*(BiPolynomial a, cplx s) { return a *= s; }
  friend BiPolynomial operator*(cplx s, BiPolynomial a) { return a *= s; }
  friend BiPolynomial operator*(const BiPolynomial& a, const BiPolynomial& b);
  BiPolynomial operator-() const { return (*this) * cplx(-1.0); }

  cplx operator()(const CVec& z) const;

  BiPolynomial d_dz(int j) const;
  BiPolynomial d_dzbar(int j) const;

  /// The polynomial whose values are the complex conjugates of this one's.
  BiPolynomial conjugate() const;

  int total_degree() const;
  std::set<std::pair<int, int>> bidegrees() const;
  bool is_bihomogeneous() const { return bidegrees().size() <= 1; }
  bool is_bihomogeneous(int p, int q) const;
  /// Split by bi-degree (p, q).
  std::map<std::pair<int, int>, BiPolynomial> bihomogeneous_parts() const;

  double max_abs_coeff() const;

  /// Composition with linear forms: z_l -> zsub[l], zbar_l -> zbarsub[l].
  BiPolynomial substitute(const std::vector<BiPolynomial>& zsub,
                          const std::vector<BiPolynomial>& zbarsub) const;

  /// Drops terms of total degree above max_degree.
  BiPolynomial truncated(int max_degree) const;

 private:
  int n_ = 0;
  TermMap terms_;
};

BiPolynomial pow(const BiPolynomial& p, int k);

/// Max coefficient modulus of a - b.
double coefficient_distance(const BiPolynomial& a, const BiPolynomial& b);

}  // namespace tsmkit
