#include "tsmkit/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsmkit {

namespace {

bool same_gaussian(cplx a, cplx b) {
  return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a));
}

bool term_order(const RadialTerm& x, const RadialTerm& y) {
  if (x.a.real() != y.a.real()) return x.a.real() < y.a.real();
  if (x.a.imag() != y.a.imag()) return x.a.imag() < y.a.imag();
  return x.k < y.k;
}

}  // namespace

RadialSum::RadialSum(std::vector<RadialTerm> terms) {
  for (const auto& t : terms) add(t.c, t.a, t.k);
}

double RadialSum::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.c));
  return m;
}

int RadialSum::min_power() const {
  int m = 0;
  bool first = true;
  for (const auto& t : terms_) {
    if (first || t.k < m) m = t.k;
    first = false;
  }
  return m;
}

void RadialSum::add(cplx c, cplx a, int k) {
  auto it = std::find_if(terms_.begin(), terms_.end(),
                         [&](const RadialTerm& t) { return t.k == k && same_gaussian(t.a, a); });
  if (it == terms_.end()) {
    if (std::abs(c) <= kPruneTol) return;
    RadialTerm t{c, a, k};
    terms_.insert(std::upper_bound(terms_.begin(), terms_.end(), t, term_order), t);
    return;
  }
  it->c += c;
  if (std::abs(it->c) <= kPruneTol) terms_.erase(it);
}

RadialSum& RadialSum::operator+=(const RadialSum& o) {
  for (const auto& t : o.terms_) add(t.c, t.a, t.k);
  return *this;
}

RadialSum& RadialSum::operator-=(const RadialSum& o) {
  for (const auto& t : o.terms_) add(-t.c, t.a, t.k);
  return *this;
}

RadialSum& RadialSum::operator*=(cplx s) {
  std::vector<RadialTerm> old;
  old.swap(terms_);
  for (const auto& t : old) add(t.c * s, t.a, t.k);
  return *this;
}

RadialSum operator*(const RadialSum& x, const RadialSum& y) {
  RadialSum out;
  for (const auto& s : x.terms_)
    for (const auto& t : y.terms_) out.add(s.c * t.c, s.a + t.a, s.k + t.k);
  return out;
}

cplx RadialSum::operator()(double rho) const {
  cplx sum = 0.0;
  const double r2 = rho * rho;
  for (const auto& t : terms_) sum += t.c * std::exp(t.a * r2) * std::pow(rho, t.k);
  return sum;
}

RadialSum RadialSum::shifted(int dk) const {
  RadialSum out;
  for (const auto& t : terms_) out.add(t.c, t.a, t.k + dk);
  return out;
}

RadialSum RadialSum::scaled_gaussian(cplx b) const {
  RadialSum out;
  for (const auto& t : terms_) out.add(t.c, t.a + b, t.k);
  return out;
}

// d/drho (c e^{a rho^2} rho^k) = c e^{a rho^2} (k rho^{k-1} + 2a rho^{k+1})
RadialSum RadialSum::d_drho() const {
  RadialSum out;
  for (const auto& t : terms_) {
    if (t.k != 0) out.add(t.c * double(t.k), t.a, t.k - 1);
    out.add(2.0 * t.a * t.c, t.a, t.k + 1);
  }
  return out;
}

RadialSum RadialSum::rho_d_drho() const { return d_drho().shifted(1); }

RadialSum RadialSum::d_drho2() const {
  RadialSum out;
  for (const auto& t : terms_) {
    if (t.k != 0) out.add(t.c * (0.5 * t.k), t.a, t.k - 2);
    out.add(t.a * t.c, t.a, t.k);
  }
  return out;
}

RadialSum apply_D(const RadialSum& a, cplx nu, bool bar) {
  const cplx shift = bar ? -0.5 * std::conj(nu) : 0.5 * nu;
  RadialSum out;
  for (const auto& t : a.terms()) {
    if (t.k != 0) out.add(t.c * double(t.k), t.a, t.k);
    out.add(2.0 * t.a * t.c, t.a, t.k + 2);
    out.add(shift * t.c, t.a, t.k + 2);
  }
  return out;
}

RadialSum apply_atom(const StackAtom& atom, const RadialSum& a) {
  switch (atom.kind) {
    case StackAtom::Kind::D:
    case StackAtom::Kind::Dbar: {
      RadialSum out = apply_D(a, atom.nu, atom.kind == StackAtom::Kind::Dbar) * cplx(atom.kappa);
      out += a * cplx(2.0);
      return out;
    }
    case StackAtom::Kind::rho_power:
      return a.shifted(2 * atom.power) * atom.weight;
  }
  return a;
}

RadialSum OperatorStack::apply(const RadialSum& a) const {
  RadialSum cur = a;
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) cur = apply_atom(*it, cur);
  return cur;
}

std::string to_string(KappaSchedule s) {
  return s == KappaSchedule::standard ? "standard" : "ascending";
}

KappaSchedule parse_kappa_schedule(const std::string& text) {
  if (text == "standard") return KappaSchedule::standard;
  if (text == "ascending") return KappaSchedule::ascending;
  throw std::invalid_argument("unknown kappa schedule '" + text + "'");
}

double gamma_pq(int n, int p, int q) {
  const int d = n + p + q - 1;
  if (d <= 0) throw std::invalid_argument("gamma_pq: n+p+q-1 must be positive");
  return 1.0 / d;
}

namespace {

StackAtom make_atom(StackAtom::Kind kind, double kappa, cplx nu, const std::string& label) {
  StackAtom a;
  a.kind = kind;
  a.kappa = kappa;
  a.nu = nu;
  a.label = label;
  return a;
}

void check_kappa(double kappa, int n, int p, int q) {
  // kappa = 1/(n+s-1) with 0 <= s <= 2(p+q)
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be of the form 1/(n+p'+q'-1)");
  const double s = 1.0 / kappa - (n - 1);
  const double r = std::round(s);
  if (std::abs(s - r) > 1e-9 || r < 0 || r > 2 * (p + q) || n + r - 1 <= 0)
    throw std::invalid_argument("kappa " + std::to_string(kappa) + " is not in the gamma set for n=" +
                                std::to_string(n));
}

}  // namespace

OperatorStack build_stack(int p, int q, int n, KappaSchedule schedule, cplx nu_l1, cplx nu_l2) {
  if (p < 0 || q < 0 || n < 1) throw std::invalid_argument("build_stack: need p, q >= 0 and n >= 1");
  std::vector<double> kappas;
  for (int i = 1; i <= p; ++i) kappas.push_back(gamma_pq(n, p - (i - 1), q));
  for (int k = 1; k <= q; ++k) {
    const int qk = schedule == KappaSchedule::standard ? q - (k - 1) : q + (k - 1);
    kappas.push_back(gamma_pq(n, p, qk));
  }
  return build_stack(p, q, n, kappas, nu_l1, nu_l2);
}

OperatorStack build_stack(int p, int q, int n, const std::vector<double>& kappas, cplx nu_l1,
                          cplx nu_l2) {
  if (p < 0 || q < 0 || n < 1) throw std::invalid_argument("build_stack: need p, q >= 0 and n >= 1");
  if (static_cast<int>(kappas.size()) != p + q)
    throw std::invalid_argument("build_stack: schedule must have p+q entries");
  for (double k : kappas) check_kappa(k, n, p, q);
  OperatorStack st;
  st.n = n;
  st.p = p;
  st.q = q;
  // Written order: Dbar atoms (k = 1..q) then D atoms (i = 1..p); the D atoms act first.
  for (int k = 1; k <= q; ++k)
    st.atoms.push_back(make_atom(StackAtom::Kind::Dbar, kappas[p + k - 1], nu_l2,
                                 "Dbar[k=" + std::to_string(k) + "]"));
  for (int i = 1; i <= p; ++i)
    st.atoms.push_back(
        make_atom(StackAtom::Kind::D, kappas[i - 1], nu_l1, "D[i=" + std::to_string(i) + "]"));
  return st;
}

RadialSum solution_family(int p, int q, int n, cplx nu_l1, cplx nu_l2, const std::vector<cplx>& A,
                          const std::vector<cplx>& B, bool conjugate_b) {
  if (static_cast<int>(A.size()) != p || static_cast<int>(B.size()) != q)
    throw std::invalid_argument("solution_family: need p A-coefficients and q B-coefficients");
  RadialSum out;
  for (int i = 1; i <= p; ++i) out.add(A[i - 1], -nu_l1 / 4.0, -2 * (p + q + n - i));
  const cplx b_gauss = (conjugate_b ? std::conj(nu_l2) : nu_l2) / 4.0;
  for (int k = 1; k <= q; ++k) out.add(B[k - 1], b_gauss, -2 * (p + q + n - k));
  return out;
}

AnnihilationReport annihilation_check(const OperatorStack& stack, const RadialSum& a, double tol) {
  AnnihilationReport r;
  r.result = stack.apply(a);
  r.residual = r.result.max_abs_coeff();
  r.tolerance = tol;
  r.pass = r.residual <= tol;
  return r;
}

}  // namespace tsmkit
