#include "generators.hpp"

#include "tsmkit/harmonics.hpp"
#include "tsmkit/quadrature.hpp"

#include <cstdlib>

using namespace tsmkit;

namespace {

cplx monomial_value(const cplx* w, const BiIndex& idx) {
  cplx v = 1.0;
  for (int l = 0; l < idx.n(); ++l) {
    for (int e = 0; e < idx.alpha(l); ++e) v *= w[l];
    for (int e = 0; e < idx.beta(l); ++e) v *= std::conj(w[l]);
  }
  return v;
}

// All bi-multi-indices on C^n with |alpha| + |beta| <= max_degree.
std::vector<BiIndex> all_indices(int n, int max_degree) {
  std::vector<BiIndex> out;
  std::vector<int> e(2 * n, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == 2 * n) {
      out.emplace_back(std::span<const int>(e.data(), n), std::span<const int>(e.data() + n, n));
      return;
    }
    for (int d = 0; d <= left; ++d) {
      e[pos] = d;
      self(self, pos + 1, left - d);
    }
    e[pos] = 0;
  };
  rec(rec, 0, max_degree);
  return out;
}

}  // namespace

TEST_CASE("quadrature rule parsing") {
  CHECK(QuadratureRule::parse("angles:64").order == 64);
  const QuadratureRule mc = QuadratureRule::parse("mc:1000@7");
  CHECK(mc.kind == QuadKind::monte_carlo);
  CHECK(mc.samples == 1000);
  CHECK(mc.seed == 7);
  CHECK(QuadratureRule::parse("exact").kind == QuadKind::exact_moments);
  CHECK(QuadratureRule::parse("exact:80").truncation == 80);
  CHECK(QuadratureRule::parse("grid:120").kind == QuadKind::grid);
  CHECK(QuadratureRule::parse(QuadratureRule::parse("mc:5@3").str()).seed == 3);
  CHECK_THROWS(QuadratureRule::parse("simpson:3"));
  CHECK_THROWS(QuadratureRule::parse("angles:x"));
}

TEST_CASE("Gauss-Legendre and Gauss-Jacobi moments") {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  for (int k = 0; k <= 15; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
    CHECK(s == doctest::Approx(k % 2 ? 0.0 : 2.0 / (k + 1)).epsilon(1e-13));
  }
  // Weight (1-t): int t^k (1-t) dt over [-1,1].
  gauss_jacobi(6, 1.0, 0.0, x, w);
  for (int k = 0; k <= 11; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
    const double even = k % 2 ? 0.0 : 2.0 / (k + 1);
    const double odd = k % 2 ? 2.0 / (k + 2) : 0.0;
    CHECK(s == doctest::Approx(even - odd).epsilon(1e-12));
  }
}

TEST_CASE("product rule reproduces every sphere moment up to degree 7") {
  for (int n = 1; n <= 3; ++n) {
    const auto rule = product_sphere_rule(n, 4);
    double wsum = 0.0;
    for (double w : rule->weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rule->size() == product_sphere_rule_size(n, 4));
    double worst = 0.0;
    for (const BiIndex& idx : all_indices(n, 7)) {
      const Estimate e = integrate_sphere(*rule, [&](const cplx* w) { return monomial_value(w, idx); });
      worst = std::max(worst, std::abs(e.value - sphere_moment(idx)));
    }
    CAPTURE(n);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("product rule cache returns the same nodes") {
  CHECK(product_sphere_rule(2, 16).get() == product_sphere_rule(2, 16).get());
}

TEST_CASE("Monte-Carlo moments fall within 4 standard errors") {
  for (int n = 1; n <= 3; ++n) {
    const auto rule = monte_carlo_sphere(n, 200000, 5 + n);
    gen::Rng g(40 + n);
    for (int t = 0; t < 8; ++t) {
      const int deg = g.integer(0, 3);
      const BiIndex idx = gen::bi_index(g, n, deg, t % 2 ? deg : g.integer(0, 3));
      const Estimate e = integrate_sphere(*rule, [&](const cplx* w) { return monomial_value(w, idx); });
      CAPTURE(n);
      CAPTURE(idx.alpha_vec());
      CAPTURE(idx.beta_vec());
      CHECK(std::abs(e.value - sphere_moment(idx)) <= 4.0 * e.std_error + 1e-14);
    }
  }
}

TEST_CASE("Monte-Carlo nodes lie on the sphere and are seeded") {
  const auto a = monte_carlo_sphere(2, 1000, 9);
  const auto b = monte_carlo_sphere(2, 1000, 9);
  CHECK(a->points == b->points);
  for (std::size_t i = 0; i < a->size(); ++i)
    CHECK(std::norm(a->node(i)[0]) + std::norm(a->node(i)[1]) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("deterministic sums do not depend on the thread count") {
  auto term = [](std::size_t i) { return std::sin(0.001 * double(i)) / (1.0 + double(i)); };
  ::setenv("TSMKIT_THREADS", "1", 1);
  const double serial = deterministic_sum<double>(100003, term);
  ::setenv("TSMKIT_THREADS", "7", 1);
  const double parallel = deterministic_sum<double>(100003, term);
  ::unsetenv("TSMKIT_THREADS");
  CHECK(serial == parallel);
  CHECK(deterministic_sum<double>(0, term) == 0.0);
}
