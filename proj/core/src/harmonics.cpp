#include "tsmkit/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsmkit {

BiPolynomial laplacian(const BiPolynomial& p) {
  const int n = p.n();
  BiPolynomial out(n);
  for (const auto& [idx, c] : p.terms()) {
    for (int j = 0; j < n; ++j) {
      const int a = idx.alpha(j), b = idx.beta(j);
      if (a == 0 || b == 0) continue;
      BiIndex d = idx;
      d.alpha(j) = a - 1;
      d.beta(j) = b - 1;
      out.add_term(d, c * (4.0 * a * b));
    }
  }
  return out;
}

double laplacian_norm_power_constant(int k, int m, int n) {
  return 4.0 * k * (k + m + n - 1);
}

BiPolynomial HarmonicLayers::reconstruct() const {
  BiPolynomial out(n);
  BiPolynomial rho2k = BiPolynomial::constant(n, 1.0);
  const BiPolynomial rho2 = BiPolynomial::norm_squared(n);
  for (const auto& layer : layers) {
    out += rho2k * layer;
    rho2k = rho2k * rho2;
  }
  return out;
}

double HarmonicLayers::max_laplacian_residual() const {
  double worst = 0.0;
  for (const auto& layer : layers) worst = std::max(worst, laplacian(layer).max_abs_coeff());
  return worst;
}

HarmonicLayers harmonic_decompose(const BiPolynomial& p) {
  const auto degs = p.bidegrees();
  if (degs.size() > 1) throw std::invalid_argument("harmonic_decompose: polynomial is not bi-homogeneous");
  if (degs.empty()) return harmonic_decompose(p, 0, 0);
  return harmonic_decompose(p, degs.begin()->first, degs.begin()->second);
}

HarmonicLayers harmonic_decompose(const BiPolynomial& p, int deg_z, int deg_zbar) {
  if (!p.is_bihomogeneous(deg_z, deg_zbar))
    throw std::invalid_argument("harmonic_decompose: polynomial is not bi-homogeneous of the given degree");
  const int n = p.n();
  const int lmax = std::min(deg_z, deg_zbar);
  HarmonicLayers out;
  out.n = n;
  out.p = deg_z;
  out.q = deg_zbar;
  out.layers.assign(lmax + 1, BiPolynomial(n));

  // Peel layers from the top: Delta^j kills every |z|^{2i} P_i with i < j.
  BiPolynomial rest = p;
  const BiPolynomial rho2 = BiPolynomial::norm_squared(n);
  for (int j = lmax; j >= 0; --j) {
    const int m = deg_z + deg_zbar - 2 * j;
    BiPolynomial top = rest;
    double scale = 1.0;
    for (int i = 1; i <= j; ++i) {
      top = laplacian(top);
      scale *= laplacian_norm_power_constant(i, m, n);
    }
    top *= cplx(1.0 / scale);
    out.layers[j] = top;
    if (j > 0) rest -= pow(rho2, j) * top;
  }
  out.layers[0] = rest;
  return out;
}

bool is_harmonic(const BiPolynomial& p, double tol) {
  return laplacian(p).max_abs_coeff() <= tol * std::max(1.0, p.max_abs_coeff());
}

HarmonicSplit harmonic_split(const BiPolynomial& p, int j, Side side) {
  const int n = p.n();
  if (j < 0 || j >= n) throw DimensionError("harmonic_split: index out of range", j);
  const auto degs = p.bidegrees();
  if (degs.size() > 1) throw std::invalid_argument("harmonic_split: polynomial is not bi-homogeneous");
  if (!is_harmonic(p)) throw std::invalid_argument("harmonic_split: polynomial is not harmonic");
  const int pp = degs.empty() ? 0 : degs.begin()->first;
  const int qq = degs.empty() ? 0 : degs.begin()->second;

  HarmonicSplit out;
  const long denom = n + pp + qq - 1;
  out.gamma = denom > 0 ? Rational{1, denom} : Rational{0, 1};
  BiPolynomial lifted(n);
  if (side == Side::zbar) {
    lifted = BiPolynomial::zbar(n, j) * p;
    out.derivative = p.d_dz(j);
  } else {
    lifted = BiPolynomial::z(n, j) * p;
    out.derivative = p.d_dzbar(j);
  }
  const BiPolynomial correction = BiPolynomial::norm_squared(n) * out.derivative * cplx(out.gamma.value());
  out.P0 = lifted - correction;
  out.reconstruction_residual = coefficient_distance(out.P0 + correction, lifted);
  out.harmonic_residual = laplacian(out.P0).max_abs_coeff();
  return out;
}

double sphere_moment(const std::vector<int>& alpha, const std::vector<int>& beta) {
  if (alpha.size() != beta.size()) throw DimensionError("sphere_moment: alpha and beta differ in length", -1);
  if (alpha != beta) return 0.0;
  const int n = static_cast<int>(alpha.size());
  // (n-1)! alpha! / (n-1+|alpha|)! as a product of ratios.
  double num = 1.0;
  int total = 0;
  for (int a : alpha) {
    for (int i = 2; i <= a; ++i) num *= i;
    total += a;
  }
  double den = 1.0;
  for (int i = n; i <= n - 1 + total; ++i) den *= i;
  return num / den;
}

double sphere_moment(const BiIndex& idx) { return sphere_moment(idx.alpha_vec(), idx.beta_vec()); }

cplx sphere_integral(const BiPolynomial& p) {
  cplx sum = 0.0;
  for (const auto& [idx, c] : p.terms()) {
    bool diagonal = true;
    for (int l = 0; l < p.n() && diagonal; ++l) diagonal = idx.alpha(l) == idx.beta(l);
    if (diagonal) sum += c * sphere_moment(idx);
  }
  return sum;
}

cplx sphere_inner(const BiPolynomial& p, const BiPolynomial& q) {
  return sphere_integral(p * q.conjugate());
}

BiPolynomial compose_linear(const BiPolynomial& p, const RMat& m) {
  const int n = p.n();
  if (m.rows() != 2 * n || m.cols() != 2 * n) throw DimensionError("compose_linear: matrix has wrong shape", -1);
  // z_l = sum_k c_{l,k} y_k with c_{l,k} = M_{l,k} + i M_{n+l,k};
  // y_k = (w_k + wbar_k)/2, y_{n+k} = (w_k - wbar_k)/(2i).
  std::vector<BiPolynomial> zsub, zbarsub;
  for (int l = 0; l < n; ++l) {
    BiPolynomial form(n);
    for (int k = 0; k < n; ++k) {
      const cplx c1(m(l, k), m(n + l, k));
      const cplx c2(m(l, n + k), m(n + l, n + k));
      BiIndex wk(n), wbk(n);
      wk.alpha(k) = 1;
      wbk.beta(k) = 1;
      form.add_term(wk, 0.5 * c1 + c2 / (2.0 * I));
      form.add_term(wbk, 0.5 * c1 - c2 / (2.0 * I));
    }
    zbarsub.push_back(form.conjugate());
    zsub.push_back(std::move(form));
  }
  return p.substitute(zsub, zbarsub);
}

BiPolynomial conjugate_poly(const BiPolynomial& p, const ReducedFrame& frame, Transport direction) {
  return direction == Transport::to_reduced ? compose_linear(p, frame.A)
                                            : compose_linear(p, frame.A.transpose());
}

bool is_Hlambda_pq(const BiPolynomial& poly, int p, int q, const ReducedFrame& frame, double tol) {
  const BiPolynomial pl = conjugate_poly(poly, frame);
  const double scale = std::max(1.0, pl.max_abs_coeff());
  for (const auto& [deg, part] : pl.bihomogeneous_parts()) {
    if (deg == std::make_pair(p, q)) continue;
    if (part.max_abs_coeff() > tol * scale) return false;
  }
  return laplacian(pl).max_abs_coeff() <= tol * scale;
}

}  // namespace tsmkit
