#include "tsmkit/bipolynomial.hpp"

#include <numeric>

namespace tsmkit {

BiIndex::BiIndex(std::span<const int> alpha, std::span<const int> beta) {
  if (alpha.size() != beta.size()) throw DimensionError("BiIndex: alpha and beta differ in length", -1);
  e_.reserve(2 * alpha.size());
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("BiIndex: negative exponent");
    e_.push_back(a);
  }
  for (int b : beta) {
    if (b < 0) throw std::invalid_argument("BiIndex: negative exponent");
    e_.push_back(b);
  }
}

int BiIndex::p() const { return std::accumulate(e_.begin(), e_.begin() + n(), 0); }
int BiIndex::q() const { return std::accumulate(e_.begin() + n(), e_.end(), 0); }

BiIndex BiIndex::operator+(const BiIndex& o) const {
  BiIndex r = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
  return r;
}

bool operator<(const BiIndex& a, const BiIndex& b) {
  const int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  return a.e_ < b.e_;
}

BiPolynomial BiPolynomial::constant(int n, cplx c) {
  BiPolynomial p(n);
  p.add_term(BiIndex(n), c);
  return p;
}

BiPolynomial BiPolynomial::monomial(std::span<const int> alpha, std::span<const int> beta, cplx c) {
  return monomial(BiIndex(alpha, beta), c);
}

BiPolynomial BiPolynomial::monomial(const BiIndex& idx, cplx c) {
  BiPolynomial p(idx.n());
  p.add_term(idx, c);
  return p;
}

BiPolynomial BiPolynomial::z(int n, int j) {
  BiIndex idx(n);
  idx.alpha(j) = 1;
  return monomial(idx);
}

BiPolynomial BiPolynomial::zbar(int n, int j) {
  BiIndex idx(n);
  idx.beta(j) = 1;
  return monomial(idx);
}

BiPolynomial BiPolynomial::norm_squared(int n) {
  BiPolynomial p(n);
  for (int j = 0; j < n; ++j) {
    BiIndex idx(n);
    idx.alpha(j) = 1;
    idx.beta(j) = 1;
    p.add_term(idx, 1.0);
  }
  return p;
}

cplx BiPolynomial::coefficient(const BiIndex& idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? cplx{} : it->second;
}

void BiPolynomial::add_term(const BiIndex& idx, cplx c) {
  if (idx.n() != n_) throw DimensionError("BiPolynomial: index dimension mismatch", -1);
  auto [it, inserted] = terms_.try_emplace(idx, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) <= kPruneTol) terms_.erase(it);
}

BiPolynomial& BiPolynomial::operator+=(const BiPolynomial& o) {
  if (o.n_ != n_) throw DimensionError("BiPolynomial: dimension mismatch in +", -1);
  for (const auto& [idx, c] : o.terms_) add_term(idx, c);
  return *this;
}

BiPolynomial& BiPolynomial::operator-=(const BiPolynomial& o) {
  if (o.n_ != n_) throw DimensionError("BiPolynomial: dimension mismatch in -", -1);
  for (const auto& [idx, c] : o.terms_) add_term(idx, -c);
  return *this;
}

BiPolynomial& BiPolynomial::operator*=(cplx s) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    if (std::abs(it->second) <= kPruneTol)
      it = terms_.erase(it);
    else
      ++it;
  }
  return *this;
}

BiPolynomial operator*(const BiPolynomial& a, const BiPolynomial& b) {
  if (a.n_ != b.n_) throw DimensionError("BiPolynomial: dimension mismatch in *", -1);
  BiPolynomial out(a.n_);
  for (const auto& [ia, ca] : a.terms_)
    for (const auto& [ib, cb] : b.terms_) out.add_term(ia + ib, ca * cb);
  return out;
}

cplx BiPolynomial::operator()(const CVec& z) const {
  if (z.size() != n_) throw DimensionError("BiPolynomial: evaluation point has wrong length", -1);
  cplx sum = 0.0;
  for (const auto& [idx, c] : terms_) {
    cplx t = c;
    for (int l = 0; l < n_; ++l) {
      for (int e = 0; e < idx.alpha(l); ++e) t *= z[l];
      for (int e = 0; e < idx.beta(l); ++e) t *= std::conj(z[l]);
    }
    sum += t;
  }
  return sum;
}

BiPolynomial BiPolynomial::d_dz(int j) const {
  BiPolynomial out(n_);
  for (const auto& [idx, c] : terms_) {
    const int a = idx.alpha(j);
    if (a == 0) continue;
    BiIndex d = idx;
    d.alpha(j) = a - 1;
    out.add_term(d, c * double(a));
  }
  return out;
}

BiPolynomial BiPolynomial::d_dzbar(int j) const {
  BiPolynomial out(n_);
  for (const auto& [idx, c] : terms_) {
    const int b = idx.beta(j);
    if (b == 0) continue;
    BiIndex d = idx;
    d.beta(j) = b - 1;
    out.add_term(d, c * double(b));
  }
  return out;
}

BiPolynomial BiPolynomial::conjugate() const {
  BiPolynomial out(n_);
  for (const auto& [idx, c] : terms_) {
    BiIndex sw(n_);
    for (int l = 0; l < n_; ++l) {
      sw.alpha(l) = idx.beta(l);
      sw.beta(l) = idx.alpha(l);
    }
    out.add_term(sw, std::conj(c));
  }
  return out;
}

int BiPolynomial::total_degree() const {
  int d = 0;
  for (const auto& [idx, c] : terms_) d = std::max(d, idx.degree());
  return d;
}

std::set<std::pair<int, int>> BiPolynomial::bidegrees() const {
  std::set<std::pair<int, int>> out;
  for (const auto& [idx, c] : terms_) out.emplace(idx.p(), idx.q());
  return out;
}

bool BiPolynomial::is_bihomogeneous(int p, int q) const {
  for (const auto& [idx, c] : terms_)
    if (idx.p() != p || idx.q() != q) return false;
  return true;
}

std::map<std::pair<int, int>, BiPolynomial> BiPolynomial::bihomogeneous_parts() const {
  std::map<std::pair<int, int>, BiPolynomial> out;
  for (const auto& [idx, c] : terms_) {
    auto [it, inserted] = out.try_emplace({idx.p(), idx.q()}, BiPolynomial(n_));
    it->second.add_term(idx, c);
  }
  return out;
}

double BiPolynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [idx, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

BiPolynomial BiPolynomial::substitute(const std::vector<BiPolynomial>& zsub,
                                      const std::vector<BiPolynomial>& zbarsub) const {
  if (static_cast<int>(zsub.size()) != n_ || static_cast<int>(zbarsub.size()) != n_)
    throw DimensionError("substitute: need one form per coordinate", -1);
  const int m = zsub.empty() ? n_ : zsub.front().n();
  // powers[l][e] = zsub[l]^e, grown on demand.
  std::vector<std::vector<BiPolynomial>> zp(n_), zbp(n_);
  auto power = [&](std::vector<std::vector<BiPolynomial>>& cache, const BiPolynomial& base, int l,
                   int e) -> const BiPolynomial& {
    auto& c = cache[l];
    if (c.empty()) c.push_back(BiPolynomial::constant(m, 1.0));
    while (static_cast<int>(c.size()) <= e) c.push_back(c.back() * base);
    return c[e];
  };
  BiPolynomial out(m);
  for (const auto& [idx, c] : terms_) {
    BiPolynomial t = BiPolynomial::constant(m, c);
    for (int l = 0; l < n_; ++l) {
      if (idx.alpha(l) > 0) t = t * power(zp, zsub[l], l, idx.alpha(l));
      if (idx.beta(l) > 0) t = t * power(zbp, zbarsub[l], l, idx.beta(l));
    }
    out += t;
  }
  return out;
}

BiPolynomial BiPolynomial::truncated(int max_degree) const {
  BiPolynomial out(n_);
  for (const auto& [idx, c] : terms_)
    if (idx.degree() <= max_degree) out.terms_.emplace(idx, c);
  return out;
}

BiPolynomial pow(const BiPolynomial& p, int k) {
  BiPolynomial out = BiPolynomial::constant(p.n(), 1.0);
  for (int i = 0; i < k; ++i) out = out * p;
  return out;
}

double coefficient_distance(const BiPolynomial& a, const BiPolynomial& b) {
  return (a - b).max_abs_coeff();
}

}  // namespace tsmkit
