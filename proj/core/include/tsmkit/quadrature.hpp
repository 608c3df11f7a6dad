#pragma once

// Quadrature on S^{2n-1} and on boxes.

#include "tsmkit/common.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace tsmkit {

enum class QuadKind { product_angles, monte_carlo, exact_moments, grid };

struct QuadratureRule {
  QuadKind kind = QuadKind::product_angles;
  int order = 32;                 // product_angles: points per polar level; grid: points per axis
  std::size_t samples = 100000;   // monte_carlo
  std::uint64_t seed = 0;         // monte_carlo
  int truncation = 0;             // exact_moments: series order, 0 = automatic
  bool error_estimate = true;     // product_angles / grid: also run a coarser rule

  /// "angles:64", "mc:1000000", "exact", "exact:80", "grid:120". A trailing
  /// "@SEED" sets the Monte-Carlo seed, e.g. "mc:100000@7".
  static QuadratureRule parse(const std::string& text);
  std::string str() const;
};

/// Nodes on the unit sphere of C^n with weights summing to 1.
struct SphereNodes {
  int n = 0;
  std::vector<cplx> points;  // n entries per node
  std::vector<double> weights;
  bool random = false;

  std::size_t size() const noexcept { return weights.size(); }
  const cplx* node(std::size_t i) const { return &points[i * static_cast<std::size_t>(n)]; }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w);
/// Gauss-Jacobi for the weight (1-t)^alpha (1+t)^beta on [-1, 1] (Golub-Welsch).
void gauss_jacobi(int order, double alpha, double beta, std::vector<double>& x, std::vector<double>& w);

/// Hyperspherical-angle product rule: Gauss-Jacobi in the cosines of the polar
/// angles and 2*order uniform points in the azimuth. Exact for polynomials of
/// total degree <= 2*order - 1. Cached per (n, order).
std::shared_ptr<const SphereNodes> product_sphere_rule(int n, int order);
std::size_t product_sphere_rule_size(int n, int order);

/// Uniform random points (normalized Gaussian vectors), equal weights.
std::shared_ptr<const SphereNodes> monte_carlo_sphere(int n, std::size_t samples, std::uint64_t seed);

struct Estimate {
  cplx value;
  double std_error = 0.0;  // Monte-Carlo only
  std::size_t nodes = 0;
};

/// Weighted sum of f over the nodes with deterministic summation order.
template <class F>
Estimate integrate_sphere(const SphereNodes& rule, F&& f) {
  Estimate e;
  e.nodes = rule.size();
  if (!rule.random) {
    e.value = deterministic_sum<cplx>(rule.size(), [&](std::size_t i) { return rule.weights[i] * f(rule.node(i)); });
    return e;
  }
  struct Acc {
    cplx s;
    double s2 = 0.0;
    Acc operator+(const Acc& o) const { return {s + o.s, s2 + o.s2}; }
  };
  const Acc acc = deterministic_sum<Acc>(rule.size(), [&](std::size_t i) {
    const cplx v = f(rule.node(i));
    return Acc{v, std::norm(v)};
  });
  const double N = static_cast<double>(rule.size());
  e.value = acc.s / N;
  const double var = std::max(0.0, acc.s2 / N - std::norm(e.value));
  e.std_error = N > 1 ? std::sqrt(var / (N - 1)) : 0.0;
  return e;
}

}  // namespace tsmkit
