#include "tsmkit/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

namespace tsmkit {

QuadratureRule QuadratureRule::parse(const std::string& text) {
  QuadratureRule r;
  std::string body = text;
  if (auto at = body.find('@'); at != std::string::npos) {
    r.seed = std::stoull(body.substr(at + 1));
    body = body.substr(0, at);
  }
  std::string kind = body, arg;
  if (auto colon = body.find(':'); colon != std::string::npos) {
    kind = body.substr(0, colon);
    arg = body.substr(colon + 1);
  }
  auto positive = [&](const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("quadrature spec '" + text + "': order must be an integer");
    }
    if (used != s.size() || v < 1) throw std::invalid_argument("quadrature spec '" + text + "': order must be positive");
    return v;
  };
  if (kind == "angles" || kind == "product") {
    r.kind = QuadKind::product_angles;
    if (!arg.empty()) r.order = static_cast<int>(positive(arg));
  } else if (kind == "mc") {
    r.kind = QuadKind::monte_carlo;
    if (!arg.empty()) r.samples = static_cast<std::size_t>(positive(arg));
  } else if (kind == "exact") {
    r.kind = QuadKind::exact_moments;
    if (!arg.empty()) r.truncation = static_cast<int>(positive(arg));
  } else if (kind == "grid") {
    r.kind = QuadKind::grid;
    r.order = 120;
    if (!arg.empty()) r.order = static_cast<int>(positive(arg));
  } else {
    throw std::invalid_argument("unknown quadrature kind '" + kind + "' (expected angles, mc, exact or grid)");
  }
  return r;
}

std::string QuadratureRule::str() const {
  switch (kind) {
    case QuadKind::product_angles: return "angles:" + std::to_string(order);
    case QuadKind::monte_carlo: return "mc:" + std::to_string(samples) + "@" + std::to_string(seed);
    case QuadKind::exact_moments: return truncation > 0 ? "exact:" + std::to_string(truncation) : "exact";
    case QuadKind::grid: return "grid:" + std::to_string(order);
  }
  return "?";
}

void gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  x.assign(order, 0.0);
  w.assign(order, 0.0);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (t * p1 - p0) / (t * t - 1.0);
      const double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (t * p1 - p0) / (t * t - 1.0);
    const double wt = 2.0 / ((1.0 - t * t) * dp * dp);
    x[i] = -t;
    x[order - 1 - i] = t;
    w[i] = w[order - 1 - i] = wt;
  }
  if (order % 2 == 1) x[order / 2] = 0.0;
}

void gauss_jacobi(int order, double alpha, double beta, std::vector<double>& x, std::vector<double>& w) {
  if (order < 1) throw std::invalid_argument("gauss_jacobi: order must be positive");
  if (alpha <= -1.0 || beta <= -1.0) throw std::invalid_argument("gauss_jacobi: need alpha, beta > -1");
  const double ab = alpha + beta;
  RMat J = RMat::Zero(order, order);
  for (int k = 0; k < order; ++k) {
    const double s = 2.0 * k + ab;
    J(k, k) = (k == 0 && std::abs(ab) < 1e-300) ? (beta - alpha) / (ab + 2.0)
                                                 : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    if (k + 1 < order) {
      const double kk = k + 1.0;
      const double s1 = 2.0 * kk + ab;
      const double num = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab);
      const double den = s1 * s1 * (s1 + 1.0) * (s1 - 1.0);
      J(k, k + 1) = J(k + 1, k) = std::sqrt(num / den);
    }
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(J);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  x.resize(order);
  w.resize(order);
  for (int i = 0; i < order; ++i) {
    x[i] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    w[i] = mu0 * v0 * v0;
  }
}

std::size_t product_sphere_rule_size(int n, int order) {
  std::size_t count = 2 * static_cast<std::size_t>(order);
  for (int k = 1; k <= 2 * n - 2; ++k) count *= static_cast<std::size_t>(order);
  return count;
}

namespace {

constexpr std::size_t kMaxProductNodes = 50'000'000;

std::shared_ptr<const SphereNodes> build_product_rule(int n, int order) {
  const int d = 2 * n;
  const int levels = d - 2;
  std::vector<std::vector<double>> tx(levels), tw(levels);
  for (int k = 1; k <= levels; ++k) {
    const double a = 0.5 * (d - k - 2);
    gauss_jacobi(order, a, a, tx[k - 1], tw[k - 1]);
  }
  const int M = 2 * order;
  const std::size_t count = product_sphere_rule_size(n, order);

  auto rule = std::make_shared<SphereNodes>();
  rule->n = n;
  rule->points.resize(count * n);
  rule->weights.resize(count);

  std::vector<int> idx(levels, 0);
  std::vector<double> x(d);
  double total = 0.0;
  std::size_t node = 0;
  for (std::size_t outer = 0; outer < count / M; ++outer) {
    double sinprod = 1.0, weight = 1.0;
    for (int k = 0; k < levels; ++k) {
      const double t = tx[k][idx[k]];
      x[k] = sinprod * t;
      sinprod *= std::sqrt(std::max(0.0, 1.0 - t * t));
      weight *= tw[k][idx[k]];
    }
    for (int j = 0; j < M; ++j, ++node) {
      const double phi = 2.0 * kPi * j / M;
      x[d - 2] = sinprod * std::cos(phi);
      x[d - 1] = sinprod * std::sin(phi);
      for (int l = 0; l < n; ++l) rule->points[node * n + l] = cplx(x[l], x[n + l]);
      rule->weights[node] = weight;
      total += weight;
    }
    for (int k = levels - 1; k >= 0; --k) {
      if (++idx[k] < order) break;
      idx[k] = 0;
    }
  }
  for (auto& w : rule->weights) w /= total;
  return rule;
}

}  // namespace

std::shared_ptr<const SphereNodes> product_sphere_rule(int n, int order) {
  if (n < 1 || order < 1) throw std::invalid_argument("product_sphere_rule: need n >= 1 and order >= 1");
  if (product_sphere_rule_size(n, order) > kMaxProductNodes)
    throw std::invalid_argument("product_sphere_rule: " + std::to_string(product_sphere_rule_size(n, order)) +
                                " nodes requested for n=" + std::to_string(n) + ", order=" +
                                std::to_string(order) + "; use a lower order or mc");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SphereNodes>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, order}];
  if (!slot) slot = build_product_rule(n, order);
  return slot;
}

std::shared_ptr<const SphereNodes> monte_carlo_sphere(int n, std::size_t samples, std::uint64_t seed) {
  if (n < 1 || samples < 1) throw std::invalid_argument("monte_carlo_sphere: need n >= 1 and samples >= 1");
  auto rule = std::make_shared<SphereNodes>();
  rule->n = n;
  rule->random = true;
  rule->points.resize(samples * n);
  rule->weights.assign(samples, 1.0 / static_cast<double>(samples));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> g(2 * n);
  for (std::size_t s = 0; s < samples; ++s) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (auto& v : g) {
        v = normal(rng);
        norm2 += v * v;
      }
    } while (norm2 < 1e-300);
    const double inv = 1.0 / std::sqrt(norm2);
    for (int l = 0; l < n; ++l) rule->points[s * n + l] = cplx(g[l] * inv, g[n + l] * inv);
  }
  return rule;
}

}  // namespace tsmkit
