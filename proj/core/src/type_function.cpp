#include "tsmkit/type_function.hpp"

#include "tsmkit/harmonics.hpp"
#include "tsmkit/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsmkit {

TypeFunction TypeFunction::product(const RadialSum& radial, const BiPolynomial& angular) {
  TypeFunction f(angular.n());
  for (const auto& t : radial.terms()) f.add(t.a, t.k, angular * t.c);
  return f;
}

TypeFunction TypeFunction::radial(int n, const RadialSum& radial) {
  return product(radial, BiPolynomial::constant(n, 1.0));
}

TypeFunction TypeFunction::polynomial(const BiPolynomial& angular) {
  TypeFunction f(angular.n());
  f.add(0.0, 0, angular);
  return f;
}

double TypeFunction::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& p : pieces_) m = std::max(m, p.P.max_abs_coeff());
  return m;
}

std::vector<std::pair<RadialSum, BiPolynomial>> TypeFunction::summands() const {
  std::vector<std::pair<RadialSum, BiPolynomial>> out;
  out.reserve(pieces_.size());
  for (const auto& p : pieces_) out.emplace_back(RadialSum::term(1.0, p.a, p.k), p.P);
  return out;
}

void TypeFunction::add(cplx a, int k, const BiPolynomial& p) {
  if (p.n() != n_) throw DimensionError("TypeFunction: dimension mismatch", -1);
  if (p.is_zero()) return;
  auto it = std::find_if(pieces_.begin(), pieces_.end(), [&](const TypePiece& t) {
    return t.k == k && std::abs(t.a - a) <= 1e-14 * std::max(1.0, std::abs(a));
  });
  if (it == pieces_.end()) {
    pieces_.push_back({a, k, p});
    return;
  }
  it->P += p;
  if (it->P.is_zero()) pieces_.erase(it);
}

TypeFunction& TypeFunction::operator+=(const TypeFunction& o) {
  for (const auto& p : o.pieces_) add(p.a, p.k, p.P);
  return *this;
}

TypeFunction& TypeFunction::operator-=(const TypeFunction& o) {
  for (const auto& p : o.pieces_) add(p.a, p.k, -p.P);
  return *this;
}

TypeFunction& TypeFunction::operator*=(cplx s) {
  std::vector<TypePiece> old;
  old.swap(pieces_);
  for (const auto& p : old) add(p.a, p.k, p.P * s);
  return *this;
}

TypeFunction TypeFunction::times(const BiPolynomial& q) const {
  TypeFunction out(n_);
  for (const auto& p : pieces_) out.add(p.a, p.k, p.P * q);
  return out;
}

TypeFunction TypeFunction::times(const RadialSum& r) const {
  TypeFunction out(n_);
  for (const auto& p : pieces_)
    for (const auto& t : r.terms()) out.add(p.a + t.a, p.k + t.k, p.P * t.c);
  return out;
}

// d/dz_j (e^{a rho^2} rho^k) = zbar_j (a rho^k + (k/2) rho^{k-2}) e^{a rho^2}
TypeFunction TypeFunction::d_dz(int j) const {
  if (j < 0 || j >= n_) throw DimensionError("d_dz: index out of range", j);
  TypeFunction out(n_);
  const BiPolynomial zb = BiPolynomial::zbar(n_, j);
  for (const auto& p : pieces_) {
    out.add(p.a, p.k, p.P.d_dz(j));
    const BiPolynomial lifted = zb * p.P;
    out.add(p.a, p.k, lifted * p.a);
    if (p.k != 0) out.add(p.a, p.k - 2, lifted * (0.5 * p.k));
  }
  return out;
}

TypeFunction TypeFunction::d_dzbar(int j) const {
  if (j < 0 || j >= n_) throw DimensionError("d_dzbar: index out of range", j);
  TypeFunction out(n_);
  const BiPolynomial zz = BiPolynomial::z(n_, j);
  for (const auto& p : pieces_) {
    out.add(p.a, p.k, p.P.d_dzbar(j));
    const BiPolynomial lifted = zz * p.P;
    out.add(p.a, p.k, lifted * p.a);
    if (p.k != 0) out.add(p.a, p.k - 2, lifted * (0.5 * p.k));
  }
  return out;
}

bool TypeFunction::singular_at_origin() const {
  return std::any_of(pieces_.begin(), pieces_.end(), [](const TypePiece& p) { return p.k < 0; });
}

double TypeFunction::max_gaussian_real() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces_) m = std::max(m, p.a.real());
  return m;
}

cplx TypeFunction::operator()(const CVec& z) const {
  if (z.size() != n_) throw DimensionError("TypeFunction: evaluation point has wrong length", -1);
  const double rho = z.norm();
  if (rho <= 1e-12 && singular_at_origin())
    throw SingularityError("type function evaluated at its singular point 0", z);
  cplx sum = 0.0;
  for (const auto& p : pieces_) sum += std::exp(p.a * rho * rho) * std::pow(rho, p.k) * p.P(z);
  return sum;
}

RadialSum TypeFunction::as_radial() const {
  RadialSum out;
  const BiIndex zero(n_);
  for (const auto& p : pieces_) {
    if (p.P.size() != 1 || p.P.terms().begin()->first != zero)
      throw std::invalid_argument("TypeFunction is not radial");
    out.add(p.P.terms().begin()->second, p.a, p.k);
  }
  return out;
}

namespace {

/// Plain complex product; the library routine handles inf/nan recovery we never need here.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

}  // namespace

CompiledTypeFunction::CompiledTypeFunction(const TypeFunction& f) : n_(f.n()) {
  singular_ = f.singular_at_origin();
  for (const auto& p : f.pieces())
    for (const auto& [idx, c] : p.P.terms())
      for (int v : idx.raw()) max_exp_ = std::max(max_exp_, v);
  const int stride = max_exp_ + 1;
  for (const auto& p : f.pieces()) {
    Piece piece{p.a, p.k, coeffs_.size(), 0};
    for (const auto& [idx, c] : p.P.terms()) {
      // powers[(2l) * stride + e] = z_l^e, powers[(2l+1) * stride + e] = conj(z_l)^e
      for (int l = 0; l < n_; ++l) {
        if (idx.alpha(l)) factors_.push_back((2 * l) * stride + idx.alpha(l));
        if (idx.beta(l)) factors_.push_back((2 * l + 1) * stride + idx.beta(l));
      }
      factor_end_.push_back(factors_.size());
      coeffs_.push_back(c);
    }
    piece.last = coeffs_.size();
    pieces_.push_back(piece);
  }
}

cplx CompiledTypeFunction::operator()(const cplx* z) const {
  double rho2 = 0.0;
  for (int l = 0; l < n_; ++l) rho2 += std::norm(z[l]);
  const double rho = std::sqrt(rho2);
  if (singular_ && rho <= 1e-12)
    throw SingularityError("type function evaluated at its singular point 0",
                           Eigen::Map<const CVec>(z, n_));

  const int stride = max_exp_ + 1;
  const std::size_t table = static_cast<std::size_t>(2 * n_ * stride);
  // std::complex<double> is layout-compatible with double[2]; raw storage avoids zeroing
  double local[512];
  thread_local std::vector<cplx> heap;
  cplx* powers = reinterpret_cast<cplx*>(local);
  if (table > 256) {
    heap.resize(table);
    powers = heap.data();
  }
  for (int l = 0; l < n_; ++l) {
    cplx* zp = powers + (2 * l) * stride;
    cplx* zbp = powers + (2 * l + 1) * stride;
    zp[0] = zbp[0] = 1.0;
    const cplx zl = z[l], zbl = std::conj(z[l]);
    for (int e = 1; e <= max_exp_; ++e) {
      zp[e] = mul(zp[e - 1], zl);
      zbp[e] = mul(zbp[e - 1], zbl);
    }
  }

  cplx sum = 0.0;
  std::size_t f = 0;
  for (const auto& p : pieces_) {
    cplx poly = 0.0;
    for (std::size_t t = p.first; t < p.last; ++t) {
      cplx m = coeffs_[t];
      for (const std::size_t stop = factor_end_[t]; f < stop; ++f) m = mul(m, powers[factors_[f]]);
      poly += m;
    }
    double radial = p.k == 0 ? 1.0 : std::pow(rho, p.k);
    if (p.a.imag() == 0.0) {
      if (p.a.real() != 0.0) radial *= std::exp(p.a.real() * rho2);
      sum += radial * poly;
    } else {
      sum += mul(radial * std::exp(p.a * rho2), poly);
    }
  }
  return sum;
}

TypeFunction apply_Z(const TwistTable& table, int j, bool bar, const TypeFunction& f) {
  const int n = f.n();
  if (table.n() != n) throw DimensionError("apply_Z: twist table does not match function dimension", -1);
  if (j < 0 || j >= n) throw DimensionError("apply_Z: index out of range", j);
  BiPolynomial mult(n);
  for (int l = 0; l < n; ++l) {
    if (!bar) {
      mult += BiPolynomial::z(n, l) * (0.25 * table.eta(l, j));
      mult += BiPolynomial::zbar(n, l) * (0.25 * table.nu(l, j));
    } else {
      mult -= BiPolynomial::z(n, l) * (0.25 * std::conj(table.nu(l, j)));
      mult -= BiPolynomial::zbar(n, l) * (0.25 * std::conj(table.eta(l, j)));
    }
  }
  return (bar ? f.d_dzbar(j) : f.d_dz(j)) + f.times(mult);
}

TypeFunction apply_Z_reduced(const RVec& mu, int j, bool bar, const TypeFunction& f) {
  const int n = f.n();
  if (mu.size() != n) throw DimensionError("apply_Z_reduced: mu does not match function dimension", -1);
  if (j < 0 || j >= n) throw DimensionError("apply_Z_reduced: index out of range", j);
  if (!bar) return f.d_dz(j) + f.times(BiPolynomial::zbar(n, j) * cplx(-0.25 * mu[j]));
  return f.d_dzbar(j) + f.times(BiPolynomial::z(n, j) * cplx(0.25 * mu[j]));
}

TypeFunction apply_Z(const StepTwoGroup& group, const RVec& lambda, int j, bool bar,
                     const TypeFunction& f, bool reduced) {
  if (reduced) return apply_Z_reduced(reduce(group, lambda).mu, j, bar, f);
  return apply_Z(twist_coefficients(group, lambda), j, bar, f);
}

TypeFunction project_pq(const TypeFunction& f, int p, int q) {
  TypeFunction out(f.n());
  for (const auto& piece : f.pieces()) {
    for (const auto& [deg, part] : piece.P.bihomogeneous_parts()) {
      const int j = deg.first - p;
      if (j < 0 || deg.second - q != j) continue;
      const HarmonicLayers layers = harmonic_decompose(part, deg.first, deg.second);
      out.add(piece.a, piece.k + 2 * j, layers.layers[j]);
    }
  }
  return out;
}

TypeFunction project_pq(const BiPolynomial& f, int p, int q) {
  return project_pq(TypeFunction::polynomial(f), p, q);
}

}  // namespace tsmkit
