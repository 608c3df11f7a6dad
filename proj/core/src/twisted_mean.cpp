#include "tsmkit/twisted_mean.hpp"

#include "tsmkit/harmonics.hpp"
#include "tsmkit/laguerre.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace tsmkit {

// ---------------------------------------------------------------- Evaluable

Evaluable::Evaluable(TypeFunction f)
    : v_(std::move(f)), name_("type function") {
  compiled_ = std::make_shared<CompiledTypeFunction>(std::get<TypeFunction>(v_));
}

Evaluable::Evaluable(BlackBox f) : v_(std::move(f)) {
  const auto& bb = std::get<BlackBox>(v_);
  if (!bb.fn) throw std::invalid_argument("Evaluable: black box without a function");
  name_ = bb.name;
}

int Evaluable::n() const {
  if (const auto* tf = std::get_if<TypeFunction>(&v_)) return tf->n();
  return std::get<BlackBox>(v_).n;
}

cplx Evaluable::operator()(const cplx* z) const {
  if (compiled_) return (*compiled_)(z);
  const auto& bb = std::get<BlackBox>(v_);
  return bb.fn(Eigen::Map<const CVec>(z, bb.n));
}

cplx Evaluable::operator()(const CVec& z) const {
  if (z.size() != n()) throw DimensionError("Evaluable: point has wrong length", -1);
  return (*this)(z.data());
}

std::vector<CVec> Evaluable::singularities() const {
  if (const auto* tf = std::get_if<TypeFunction>(&v_)) {
    if (tf->singular_at_origin()) return {CVec::Zero(tf->n())};
    return {};
  }
  return std::get<BlackBox>(v_).singularities;
}

double Evaluable::envelope_rate() const {
  if (const auto* tf = std::get_if<TypeFunction>(&v_)) {
    if (tf->is_zero()) return std::numeric_limits<double>::infinity();
    return std::max(0.0, -4.0 * tf->max_gaussian_real());
  }
  return std::get<BlackBox>(v_).envelope_rate;
}

Evaluable Evaluable::pullback(const RMat& m) const {
  const int dim = n();
  if (m.rows() != 2 * dim || m.cols() != 2 * dim) throw DimensionError("pullback: matrix has wrong shape", -1);
  if (const auto* tf = std::get_if<TypeFunction>(&v_)) {
    const double orth = (m.transpose() * m - RMat::Identity(2 * dim, 2 * dim)).cwiseAbs().maxCoeff();
    if (orth > kSpectralTol)
      throw std::invalid_argument("pullback: type functions can only be pulled back by orthogonal maps");
    TypeFunction out(dim);
    for (const auto& piece : tf->pieces()) out.add(piece.a, piece.k, compose_linear(piece.P, m));
    return Evaluable(std::move(out));
  }
  const auto& bb = std::get<BlackBox>(v_);
  BlackBox out = bb;
  out.name = bb.name + " (pulled back)";
  const RMat inv = m.inverse();
  out.singularities.clear();
  for (const auto& p : bb.singularities) out.singularities.push_back(complexify(inv * realify(p)));
  auto fn = bb.fn;
  out.fn = [fn, m](const CVec& y) { return fn(complexify(m * realify(y))); };
  return Evaluable(std::move(out));
}

// ---------------------------------------------------------------- sphere means

namespace {

std::string format_point(const cplx* p, int n) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (int l = 0; l < n; ++l) os << (l ? ", " : "") << p[l].real() << (p[l].imag() < 0 ? "-" : "+") << std::abs(p[l].imag()) << "i";
  os << ")";
  return os.str();
}

void check_node(const std::vector<CVec>& singular, const cplx* arg, const cplx* w, int n) {
  for (const auto& p : singular) {
    double d2 = 0.0;
    for (int l = 0; l < n; ++l) d2 += std::norm(arg[l] - p[l]);
    if (d2 <= 1e-24) {
      throw SingularityError("quadrature node w = " + format_point(w, n) + " puts the argument within 1e-12 of the singular point " +
                                 format_point(p.data(), n),
                             Eigen::Map<const CVec>(w, n));
    }
  }
}

Estimate mean_on_nodes(const SphereNodes& rule, const RMat& V, const Evaluable& f, const CVec& z, double s) {
  const int n = static_cast<int>(z.size());
  const RVec b = 0.5 * V.transpose() * realify(z);
  const std::vector<CVec> singular = f.singularities();
  return integrate_sphere(rule, [&](const cplx* u) {
    cplx arg[16];
    cplx w[16];
    double phase = 0.0;
    for (int l = 0; l < n; ++l) {
      w[l] = s * u[l];
      arg[l] = z[l] - w[l];
      phase += b[l] * w[l].real() + b[n + l] * w[l].imag();
    }
    check_node(singular, arg, w, n);
    const cplx v = f(arg);
    const double c = std::cos(phase), sn = std::sin(phase);
    return cplx(v.real() * c - v.imag() * sn, v.real() * sn + v.imag() * c);
  });
}

// ---- closed-form path: series in the unit-sphere variable u, w = s u

double log_moment(const BiIndex& idx) {
  const int n = idx.n();
  double r = std::lgamma(static_cast<double>(n));
  int total = 0;
  for (int l = 0; l < n; ++l) {
    r += std::lgamma(idx.alpha(l) + 1.0);
    total += idx.alpha(l);
  }
  return r - std::lgamma(static_cast<double>(n + total));
}

/// Normalized integral of A B over the unit sphere; B is bucketed by alpha - beta.
cplx integrate_product(const BiPolynomial& A, const BiPolynomial& B) {
  const int n = A.n();
  std::map<std::vector<int>, std::vector<std::pair<const BiIndex*, cplx>>> buckets;
  for (const auto& [idx, c] : B.terms()) {
    std::vector<int> d(n);
    for (int l = 0; l < n; ++l) d[l] = idx.alpha(l) - idx.beta(l);
    buckets[d].emplace_back(&idx, c);
  }
  cplx sum = 0.0;
  std::vector<int> need(n);
  for (const auto& [ia, ca] : A.terms()) {
    for (int l = 0; l < n; ++l) need[l] = ia.beta(l) - ia.alpha(l);
    auto it = buckets.find(need);
    if (it == buckets.end()) continue;
    for (const auto& [ib, cb] : it->second) sum += ca * cb * std::exp(log_moment(ia + *ib));
  }
  return sum;
}

/// sum_i c_i xi_i with xi = realify(w), written in (w, wbar).
BiPolynomial linear_form(const CVec& c, int n) {
  BiPolynomial out(n);
  for (int l = 0; l < n; ++l) {
    BiIndex wl(n), wbl(n);
    wl.alpha(l) = 1;
    wbl.beta(l) = 1;
    out.add_term(wl, 0.5 * c[l] + c[n + l] / (2.0 * I));
    out.add_term(wbl, 0.5 * c[l] - c[n + l] / (2.0 * I));
  }
  return out;
}

constexpr double kSeriesTol = 1e-17;
constexpr int kSeriesCap = 400;

MeanResult exact_mean(const RMat& V, const TypeFunction& f, const CVec& z, double s, int truncation) {
  const int n = f.n();
  const RVec x = realify(z);
  const RVec b = 0.5 * V.transpose() * x;
  const double Q = z.squaredNorm() + s * s;
  const double zn = z.norm();
  const double ratio = 2.0 * zn * s / Q;  // sup |L| / Q on the sphere

  // L(u) = s sum (zbar_l u_l + z_l ubar_l), so |z - s u|^2 = Q - L.
  BiPolynomial L(n);
  for (int l = 0; l < n; ++l) {
    BiIndex ul(n), ubl(n);
    ul.alpha(l) = 1;
    ubl.beta(l) = 1;
    L.add_term(ul, s * std::conj(z[l]));
    L.add_term(ubl, s * z[l]);
  }
  std::vector<BiPolynomial> zsub, zbarsub;
  for (int l = 0; l < n; ++l) {
    zsub.push_back(BiPolynomial::constant(n, z[l]) - BiPolynomial::z(n, l) * cplx(s));
    zbarsub.push_back(BiPolynomial::constant(n, std::conj(z[l])) - BiPolynomial::zbar(n, l) * cplx(s));
  }

  MeanResult out;
  out.rule = truncation > 0 ? "exact:" + std::to_string(truncation) : "exact";
  for (const auto& piece : f.pieces()) {
    // exp(-a L + i b . xi) = exp(ell(u)), ell linear with coefficients c = s (-2 a x + i b)
    CVec c(2 * n);
    for (int i = 0; i < 2 * n; ++i) c[i] = s * (-2.0 * piece.a * x[i] + I * b[i]);
    const BiPolynomial ell = linear_form(c, n);
    const double lc = c.norm();

    int m1 = truncation;
    double tail1 = 0.0;
    if (m1 <= 0) {
      double term = 1.0;
      for (m1 = 0; m1 < kSeriesCap; ++m1) {
        term *= lc / (m1 + 1.0);
        if (term * std::exp(lc) < kSeriesTol) break;
      }
      tail1 = term * std::exp(lc);
    }

    const double kappa = 0.5 * piece.k;
    const bool finite_binomial = piece.k >= 0 && piece.k % 2 == 0;
    int m2 = finite_binomial ? piece.k / 2 : truncation;
    double tail2 = 0.0;
    if (!finite_binomial) {
      if (ratio >= 1.0 - 1e-12)
        throw SingularityError("exact_moments: the sphere |w| = s passes through the singular point of f", z);
      if (m2 <= 0) {
        double binom = 1.0, rp = 1.0;
        for (m2 = 0; m2 < kSeriesCap; ++m2) {
          const double next = binom * (kappa - m2) / (m2 + 1.0);
          const double next_next = next * (kappa - m2 - 1.0) / (m2 + 2.0);
          const double step_ratio = std::abs(next) > 0 ? std::abs(next_next / next) * ratio : 0.0;
          const double term = std::abs(next) * rp * ratio;
          if (step_ratio < 1.0 && term / (1.0 - step_ratio) < kSeriesTol) {
            tail2 = term / (1.0 - step_ratio);
            break;
          }
          binom = next;
          rp *= ratio;
        }
      }
    }

    BiPolynomial e1 = BiPolynomial::constant(n, 1.0), term1 = e1;
    for (int m = 1; m <= m1; ++m) {
      term1 = term1 * ell * cplx(1.0 / m);
      if (term1.is_zero()) break;
      e1 += term1;
    }
    BiPolynomial e2 = BiPolynomial::constant(n, 1.0), term2 = e2;
    for (int m = 1; m <= m2; ++m) {
      term2 = term2 * L * cplx(-(kappa - m + 1.0) / (m * Q));
      if (term2.is_zero()) break;
      e2 += term2;
    }
    const BiPolynomial pw = piece.P.substitute(zsub, zbarsub);
    const cplx prefactor = std::exp(piece.a * Q) * std::pow(Q, kappa);
    out.value += prefactor * integrate_product(e1 * pw, e2);

    double pbound = 0.0;
    for (const auto& [idx, coef] : piece.P.terms()) pbound += std::abs(coef) * std::pow(zn + s, idx.degree());
    const double e2bound = finite_binomial ? std::pow(1.0 + ratio, kappa) : std::pow(1.0 - ratio, kappa);
    out.err_estimate += std::abs(prefactor) * pbound * (tail1 * e2bound + tail2 * std::exp(lc));
  }
  out.nodes = 0;
  return out;
}

MeanResult sphere_mean(const RMat& V, const Evaluable& f, const CVec& z, double s, const QuadratureRule& rule) {
  const int n = f.n();
  if (z.size() != n) throw DimensionError("twisted mean: z has wrong length", -1);
  if (!(s > 0.0)) throw std::invalid_argument("twisted mean: radius s must be positive");
  if (n > 16) throw DimensionError("twisted mean: n > 16 is not supported", -1);
  MeanResult out;
  out.rule = rule.str();
  switch (rule.kind) {
    case QuadKind::product_angles: {
      const auto nodes = product_sphere_rule(n, rule.order);
      const Estimate e = mean_on_nodes(*nodes, V, f, z, s);
      out.value = e.value;
      out.nodes = e.nodes;
      if (rule.error_estimate && rule.order >= 2) {
        const auto coarse = product_sphere_rule(n, rule.order / 2);
        out.err_estimate = std::abs(e.value - mean_on_nodes(*coarse, V, f, z, s).value);
      }
      return out;
    }
    case QuadKind::monte_carlo: {
      const auto nodes = monte_carlo_sphere(n, rule.samples, rule.seed);
      const Estimate e = mean_on_nodes(*nodes, V, f, z, s);
      out.value = e.value;
      out.nodes = e.nodes;
      out.err_estimate = e.std_error;
      return out;
    }
    case QuadKind::exact_moments: {
      const TypeFunction* tf = f.type_function();
      if (!tf) throw std::invalid_argument("exact_moments quadrature needs a closed-form type function");
      return exact_mean(V, *tf, z, s, rule.truncation);
    }
    case QuadKind::grid:
      throw std::invalid_argument("grid quadrature applies to convolutions, not sphere means");
  }
  return out;
}

}  // namespace

MeanResult twisted_sphere_mean(const RMat& V, const Evaluable& f, const CVec& z, double s,
                               const QuadratureRule& rule) {
  if (V.rows() != 2 * f.n() || V.cols() != 2 * f.n()) throw DimensionError("twisted mean: V has wrong shape", -1);
  return sphere_mean(V, f, z, s, rule);
}

MeanResult tsm(const StepTwoGroup& group, const RVec& lambda, const Evaluable& f, const CVec& z,
               double s, const QuadratureRule& rule) {
  if (f.n() != group.n()) throw DimensionError("tsm: function dimension does not match the group", -1);
  return sphere_mean(build_V(group, lambda), f, z, s, rule);
}

MeanResult reduced_tsm(const RVec& mu, const Evaluable& f, const CVec& z, double s,
                       const QuadratureRule& rule) {
  if (mu.size() != f.n()) throw DimensionError("reduced_tsm: mu has wrong length", -1);
  return sphere_mean(canonical_block(mu), f, z, s, rule);
}

FrameCheck frame_equivalence_check(const StepTwoGroup& group, const ReducedFrame& frame,
                                   const Evaluable& f, const CVec& z, double s,
                                   const QuadratureRule& rule) {
  FrameCheck out;
  const CVec zt = transport_point(frame, z, Transport::from_reduced);
  const MeanResult lhs = tsm(group, frame.lambda, f, zt, s, rule);
  const MeanResult rhs = reduced_tsm(frame.mu, f.pullback(frame.A), z, s, rule);
  out.lhs = lhs.value;
  out.rhs = rhs.value;
  out.residual = std::abs(lhs.value - rhs.value);
  out.err_estimate = lhs.err_estimate + rhs.err_estimate;
  return out;
}

// ---------------------------------------------------------------- convolution

double truncation_radius(double center_norm, double rate) {
  if (!(rate > 0.0)) throw TruncationError("integrand has no Gaussian envelope; cannot choose a truncation radius");
  return center_norm + std::sqrt(-4.0 * std::log(1e-14) / rate);
}

namespace {

double combined_rate(double rf, double rg) {
  const bool df = rf > 0.0, dg = rg > 0.0;
  if (!df && !dg)
    throw TruncationError("twisted_convolution: neither factor decays; the full-space integral cannot be truncated");
  if (df && dg) return std::min(rf, rg);
  return df ? rf : rg;
}

constexpr std::size_t kMaxGridNodes = 60'000'000;

cplx convolution_on_grid(double lambda, const Evaluable& f, const Evaluable& g, const CVec& z, double R,
                         int order, std::size_t& nodes) {
  const int n = f.n();
  const int d = 2 * n;
  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  for (auto& v : gx) v *= R;
  for (auto& v : gw) v *= R;
  std::size_t count = 1;
  for (int i = 0; i < d; ++i) count *= static_cast<std::size_t>(order);
  if (count > kMaxGridNodes)
    throw std::invalid_argument("twisted_convolution: " + std::to_string(count) + " grid nodes exceed the limit; lower the order");
  nodes = count;
  const auto sf = f.singularities();
  const auto sg = g.singularities();
  return deterministic_sum<cplx>(count, [&](std::size_t idx) {
    cplx w[16], arg[16];
    double weight = 1.0;
    double re[32];
    std::size_t rest = idx;
    for (int i = d - 1; i >= 0; --i) {
      const std::size_t k = rest % order;
      rest /= order;
      re[i] = gx[k];
      weight *= gw[k];
    }
    double im_zw = 0.0;
    for (int l = 0; l < n; ++l) {
      w[l] = cplx(re[l], re[n + l]);
      arg[l] = z[l] - w[l];
      im_zw += (z[l] * std::conj(w[l])).imag();
    }
    check_node(sf, arg, w, n);
    check_node(sg, w, w, n);
    return weight * f(arg) * g(w) * std::polar(1.0, 0.5 * lambda * im_zw);
  });
}

}  // namespace

ConvolutionResult twisted_convolution(double lambda, const Evaluable& f, const Evaluable& g,
                                      const CVec& z, const QuadratureRule& rule) {
  const int n = f.n();
  if (g.n() != n || z.size() != n) throw DimensionError("twisted_convolution: dimension mismatch", -1);
  if (lambda == 0.0) throw std::invalid_argument("twisted_convolution: lambda must be nonzero");
  if (n > 16) throw DimensionError("twisted_convolution: n > 16 is not supported", -1);
  ConvolutionResult out;
  const double rf = f.envelope_rate(), rg = g.envelope_rate();
  if (std::isinf(rf) || std::isinf(rg)) return out;  // a zero factor
  const double rate = combined_rate(rf, rg);
  out.radius = truncation_radius(z.norm(), rate);

  if (rule.kind == QuadKind::grid) {
    out.value = convolution_on_grid(lambda, f, g, z, out.radius, rule.order, out.nodes);
    if (rule.error_estimate) {
      std::size_t coarse_nodes = 0;
      const int coarse = std::max(4, (3 * rule.order) / 4);
      out.err_estimate = std::abs(out.value - convolution_on_grid(lambda, f, g, z, out.radius, coarse, coarse_nodes));
    }
    return out;
  }
  if (rule.kind == QuadKind::monte_carlo) {
    // Gaussian importance sampling centred where the product envelope peaks.
    CVec center = CVec::Zero(n);
    if (rf > 0.0 && rg > 0.0)
      center = z * (rf / (rf + rg));
    else if (rf > 0.0)
      center = z;
    const double sigma2 = 2.0 / rate;
    const double sigma = std::sqrt(sigma2);
    const double log_norm = n * std::log(2.0 * kPi * sigma2);
    std::mt19937_64 rng(rule.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t N = rule.samples;
    std::vector<cplx> samples(N * n);
    for (auto& v : samples) {
      const double a = normal(rng);
      const double bb = normal(rng);
      v = cplx(a, bb);
    }
    const auto sf = f.singularities();
    const auto sg = g.singularities();
    struct Acc {
      cplx s;
      double s2 = 0.0;
      Acc operator+(const Acc& o) const { return {s + o.s, s2 + o.s2}; }
    };
    const Acc acc = deterministic_sum<Acc>(N, [&](std::size_t i) {
      cplx w[16], arg[16];
      double r2 = 0.0, im_zw = 0.0;
      for (int l = 0; l < n; ++l) {
        const cplx e = samples[i * n + l];
        w[l] = center[l] + sigma * e;
        r2 += std::norm(e);
        arg[l] = z[l] - w[l];
        im_zw += (z[l] * std::conj(w[l])).imag();
      }
      check_node(sf, arg, w, n);
      check_node(sg, w, w, n);
      const double inv_density = std::exp(log_norm + 0.5 * r2);
      const cplx v = inv_density * f(arg) * g(w) * std::polar(1.0, 0.5 * lambda * im_zw);
      return Acc{v, std::norm(v)};
    });
    const double dn = static_cast<double>(N);
    out.value = acc.s / dn;
    out.err_estimate = N > 1 ? std::sqrt(std::max(0.0, acc.s2 / dn - std::norm(out.value)) / (dn - 1.0)) : 0.0;
    out.nodes = N;
    return out;
  }
  throw std::invalid_argument("twisted_convolution supports grid and mc rules, got " + rule.str());
}

RadialProfile RadialProfile::from(const RadialSum& r) {
  RadialProfile p;
  p.fn = [r](double rho) { return r(rho); };
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& t : r.terms()) worst = std::max(worst, t.a.real());
  p.envelope_rate = r.is_zero() ? std::numeric_limits<double>::infinity() : std::max(0.0, -4.0 * worst);
  return p;
}

namespace {

cplx radial_convolution_grid(double lambda, const RadialProfile& g, const RadialProfile& h, int N, double r,
                             double R, int order, std::size_t& nodes) {
  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  std::vector<double> bx(order), bw(order), sx(order), sw(order);
  for (int i = 0; i < order; ++i) {
    bx[i] = R * gx[i];
    bw[i] = R * gw[i];
    sx[i] = 0.5 * R * (gx[i] + 1.0);
    sw[i] = 0.5 * R * gw[i];
  }
  // |S^{2N-3}| = 2 pi^{N-1} / Gamma(N-1)
  const double area = N >= 2 ? 2.0 * std::pow(kPi, N - 1) / std::tgamma(N - 1.0) : 1.0;
  const std::size_t per_sigma = N >= 2 ? static_cast<std::size_t>(order) : 1;
  const std::size_t count = static_cast<std::size_t>(order) * order * per_sigma;
  nodes = count;
  return deterministic_sum<cplx>(count, [&](std::size_t idx) {
    const std::size_t is = idx % per_sigma;
    const std::size_t iv = (idx / per_sigma) % order;
    const std::size_t iu = idx / (per_sigma * order);
    const double u = bx[iu], v = bx[iv];
    double weight = bw[iu] * bw[iv];
    double s2 = 0.0;
    if (N >= 2) {
      const double sg = sx[is];
      s2 = sg * sg;
      weight *= sw[is] * area * std::pow(sg, 2 * N - 3);
    }
    const double d1 = std::sqrt((r - u) * (r - u) + v * v + s2);
    const double d2 = std::sqrt(u * u + v * v + s2);
    // Im(z' . conj(w)) = -r v for z' = (r, 0, ..., 0)
    return weight * g.fn(d1) * h.fn(d2) * std::polar(1.0, -0.5 * lambda * r * v);
  });
}

}  // namespace

ConvolutionResult radial_twisted_convolution(double lambda, const RadialProfile& g, const RadialProfile& h,
                                             int N, double r, const QuadratureRule& rule) {
  if (N < 1) throw std::invalid_argument("radial_twisted_convolution: N must be >= 1");
  ConvolutionResult out;
  if (std::isinf(g.envelope_rate) || std::isinf(h.envelope_rate)) return out;
  out.radius = truncation_radius(r, combined_rate(g.envelope_rate, h.envelope_rate));
  const int order = rule.kind == QuadKind::grid ? rule.order : 120;
  out.value = radial_convolution_grid(lambda, g, h, N, r, out.radius, order, out.nodes);
  if (rule.error_estimate) {
    std::size_t coarse_nodes = 0;
    const int coarse = std::max(4, (3 * order) / 4);
    out.err_estimate = std::abs(out.value - radial_convolution_grid(lambda, g, h, N, r, out.radius, coarse, coarse_nodes));
  }
  return out;
}

HeckeBochnerResult hecke_bochner_check(int n, int p, int q, int k, double lambda, const RadialSum& g,
                                       const BiPolynomial& P, const CVec& z, const QuadratureRule& rule,
                                       HeckeConstant constant) {
  if (P.n() != n || z.size() != n) throw DimensionError("hecke_bochner_check: dimension mismatch", -1);
  if (k < 0 || p < 0 || q < 0) throw std::invalid_argument("hecke_bochner_check: k, p, q must be >= 0");
  if (lambda == 0.0) throw std::invalid_argument("hecke_bochner_check: lambda must be nonzero");
  const double ln = std::abs(lambda);
  HeckeBochnerResult out;

  const Evaluable f(TypeFunction::product(g, P));
  const Evaluable phi(TypeFunction::radial(n, laguerre_phi_radial(k, n, ln)));
  const ConvolutionResult lhs = twisted_convolution(lambda, f, phi, z, rule);
  out.lhs = lhs.value;
  out.lhs_err = lhs.err_estimate;

  const int shifted = lambda > 0 ? k - p : k - q;
  if (shifted < 0) {
    out.vanishing_branch = true;
    out.rhs = 0.0;
  } else {
    const int N = n + p + q;
    const ConvolutionResult rc = radial_twisted_convolution(
        lambda, RadialProfile::from(g), RadialProfile::from(laguerre_phi_radial(shifted, N, ln)), N, z.norm(), rule);
    const int two_pi_power = constant == HeckeConstant::two_pi_pq ? p + q : n;
    const double factor = std::pow(2.0 * kPi, -two_pi_power) * std::pow(ln, p + q);
    out.rhs = factor * P(z) * rc.value;
    out.rhs_err = factor * std::abs(P(z)) * rc.err_estimate;
  }
  out.residual = std::abs(out.lhs - out.rhs);
  out.relative = out.vanishing_branch ? out.residual : out.residual / std::max(std::abs(out.rhs), 1e-300);
  return out;
}

// ---------------------------------------------------------------- boundary ODE

namespace {

/// Lagrange interpolant through (x[first..first+5], y) evaluated at t.
cplx lagrange6(const std::vector<double>& x, const std::vector<cplx>& y, std::size_t first, double t) {
  cplx sum = 0.0;
  for (std::size_t j = first; j < first + 6; ++j) {
    double basis = 1.0;
    for (std::size_t m = first; m < first + 6; ++m)
      if (m != j) basis *= (t - x[m]) / (x[j] - x[m]);
    sum += basis * y[j];
  }
  return sum;
}

/// Derivative of the same interpolant at the node x[at].
cplx lagrange6_derivative_at_node(const std::vector<double>& x, const std::vector<cplx>& y, std::size_t first,
                                  std::size_t at) {
  cplx sum = 0.0;
  const double t = x[at];
  for (std::size_t j = first; j < first + 6; ++j) {
    double dj = 0.0;
    if (j == at) {
      for (std::size_t m = first; m < first + 6; ++m)
        if (m != j) dj += 1.0 / (x[j] - x[m]);
    } else {
      // only the product term that omits the factor vanishing at t survives
      double prod = 1.0 / (x[j] - x[at]);
      for (std::size_t m = first; m < first + 6; ++m)
        if (m != j && m != at) prod *= (t - x[m]) / (x[j] - x[m]);
      dj = prod;
    }
    sum += dj * y[j];
  }
  return sum;
}

std::size_t stencil_start(std::size_t i, std::size_t size) {
  const std::size_t lo = i >= 2 ? i - 2 : 0;
  return std::min(lo, size - 6);
}

}  // namespace

BoundaryProbe boundary_ode_check(double mu, const std::vector<double>& r, const std::vector<cplx>& F,
                                 double zero_tol) {
  const std::size_t N = r.size();
  if (N < 6 || F.size() != N) throw std::invalid_argument("boundary_ode_check: need at least 6 matching samples");
  for (std::size_t i = 0; i + 1 < N; ++i)
    if (!(r[i + 1] > r[i])) throw std::invalid_argument("boundary_ode_check: grid must be strictly increasing");
  if (!(r[0] > 0.0)) throw std::invalid_argument("boundary_ode_check: grid must be positive");

  BoundaryProbe out;
  out.mu = mu;
  out.r = r;
  out.F = F;
  out.integral_residual.assign(N, 0.0);
  out.ode_residual.assign(N, 0.0);
  out.c_estimate.resize(N);

  std::vector<double> gx, gw;
  gauss_legendre(4, gx, gw);
  cplx running = 0.0;
  const cplx anchor = F[0] / r[0];
  for (std::size_t i = 0; i < N; ++i) {
    if (i > 0) {
      const double a = r[i - 1], b = r[i];
      const std::size_t first = stencil_start(i - 1, N);
      for (int g = 0; g < 4; ++g) {
        const double t = 0.5 * (a + b) + 0.5 * (b - a) * gx[g];
        running += 0.5 * (b - a) * gw[g] * lagrange6(r, F, first, t);
      }
    }
    out.integral_residual[i] = std::abs(F[i] / r[i] - anchor - 0.5 * mu * running);
    const cplx dF = lagrange6_derivative_at_node(r, F, stencil_start(i, N), i);
    out.ode_residual[i] = std::abs(dF - (0.5 * mu * r[i] + 1.0 / r[i]) * F[i]);
    out.c_estimate[i] = r[i] * F[i] * std::exp(-0.25 * mu * r[i] * r[i]);
    out.max_integral_residual = std::max(out.max_integral_residual, out.integral_residual[i]);
    out.max_ode_residual = std::max(out.max_ode_residual, out.ode_residual[i]);
    out.max_abs_F = std::max(out.max_abs_F, std::abs(F[i]));
  }
  double cmax = 0.0;
  for (const auto& c : out.c_estimate) cmax = std::max(cmax, std::abs(c));
  out.c_zero_consistent = cmax <= zero_tol;
  return out;
}

BoundaryProbe boundary_ode_probe(const RVec& mu, const Evaluable& g, const CVec& z,
                                 const std::vector<double>& r_grid, const QuadratureRule& rule,
                                 double zero_tol) {
  if (mu.size() != g.n()) throw DimensionError("boundary_ode_probe: mu has wrong length", -1);
  const int n = g.n();
  std::vector<cplx> F(r_grid.size());
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double t = r_grid[i];
    F[i] = std::pow(t, 2 * n - 1) * reduced_tsm(mu, g, z, t, rule).value;
  }
  return boundary_ode_check(mu[0], r_grid, F, zero_tol);
}

std::vector<double> linear_grid(double lo, double hi, int count) {
  if (count < 2) throw std::invalid_argument("linear_grid: need at least 2 points");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1.0);
  return out;
}

}  // namespace tsmkit
