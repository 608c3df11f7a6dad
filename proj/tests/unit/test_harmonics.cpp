#include "generators.hpp"

#include "tsmkit/harmonics.hpp"
#include "tsmkit/io.hpp"
#include "tsmkit/type_function.hpp"

#include <random>

using namespace tsmkit;

namespace {

BiPolynomial mono(std::vector<int> a, std::vector<int> b, cplx c = 1.0) { return BiPolynomial::monomial(a, b, c); }

}  // namespace

TEST_CASE("bipolynomial arithmetic and pruning") {
  const BiPolynomial z1 = BiPolynomial::z(2, 0);
  BiPolynomial p = z1 - z1;
  CHECK(p.is_zero());
  p.add_term(BiIndex(std::vector<int>{1, 0}, std::vector<int>{0, 0}), 1e-16);
  CHECK(p.is_zero());

  const BiPolynomial q = (z1 + BiPolynomial::zbar(2, 1)) * (z1 - BiPolynomial::zbar(2, 1));
  CHECK(coefficient_distance(q, mono({2, 0}, {0, 0}) - mono({0, 0}, {0, 2})) == 0.0);
  CHECK(coefficient_distance(pow(z1, 3), z1 * z1 * z1) == 0.0);

  CVec z(2);
  z << cplx(0.5, 1.0), cplx(-1.0, 0.25);
  const BiPolynomial r = mono({1, 0}, {0, 1}, cplx(2, -1));
  CHECK(std::abs(r(z) - cplx(2, -1) * z[0] * std::conj(z[1])) <= 1e-15);
  CHECK(std::abs(r.conjugate()(z) - std::conj(r(z))) <= 1e-15);
  CHECK(coefficient_distance(r.d_dz(0), mono({0, 0}, {0, 1}, cplx(2, -1))) == 0.0);
  CHECK(r.d_dzbar(0).is_zero());
}

TEST_CASE("graded lexicographic index order") {
  const BiIndex a(std::vector<int>{1, 0}, std::vector<int>{0, 0});
  const BiIndex b(std::vector<int>{0, 0}, std::vector<int>{1, 1});
  const BiIndex c(std::vector<int>{0, 1}, std::vector<int>{0, 0});
  CHECK(a < b);
  CHECK(c < a);
  CHECK_FALSE(a < a);
}

TEST_CASE("laplacian examples") {
  CHECK(laplacian(mono({1, 0}, {0, 1})).is_zero());
  CHECK(coefficient_distance(laplacian(mono({1, 0}, {1, 0})), BiPolynomial::constant(2, 4.0)) == 0.0);
  CHECK(coefficient_distance(laplacian(BiPolynomial::norm_squared(2)), BiPolynomial::constant(2, 8.0)) == 0.0);
}

TEST_CASE("norm power constants agree with symbolic differentiation") {
  gen::for_all(30, 11, [](gen::Rng& g) {
    const int n = g.integer(1, 3), p = g.integer(0, 3), k = g.integer(1, 3);
    const int q = n == 1 ? 0 : g.integer(0, 3);
    const BiPolynomial h = gen::harmonic(g, n, p, q);
    const BiPolynomial lhs = laplacian(pow(BiPolynomial::norm_squared(n), k) * h);
    const BiPolynomial rhs = laplacian_norm_power_constant(k, p + q, n) * (pow(BiPolynomial::norm_squared(n), k - 1) * h);
    CHECK(coefficient_distance(lhs, rhs) <= 1e-12 * std::max(1.0, lhs.max_abs_coeff()));
  });
}

TEST_CASE("harmonic_decompose examples") {
  for (int n = 1; n <= 3; ++n) {
    const HarmonicLayers l = harmonic_decompose(BiPolynomial::norm_squared(n));
    REQUIRE(l.layers.size() == 2);
    CHECK(l.layers[0].is_zero());
    CHECK(coefficient_distance(l.layers[1], BiPolynomial::constant(n, 1.0)) <= 1e-15);
  }
  const HarmonicLayers l = harmonic_decompose(mono({1, 0}, {1, 0}));
  REQUIRE(l.layers.size() == 2);
  CHECK(coefficient_distance(l.layers[0], mono({1, 0}, {1, 0}) - 0.5 * BiPolynomial::norm_squared(2)) <= 1e-15);
  CHECK(coefficient_distance(l.layers[1], BiPolynomial::constant(2, 0.5)) <= 1e-15);

  const BiPolynomial h = mono({2, 0}, {0, 1});
  const HarmonicLayers hl = harmonic_decompose(h);
  CHECK(coefficient_distance(hl.layers[0], h) == 0.0);
  for (std::size_t k = 1; k < hl.layers.size(); ++k) CHECK(hl.layers[k].is_zero());

  CHECK_THROWS_AS(harmonic_decompose(mono({1, 0}, {0, 0}) + mono({0, 0}, {1, 0})), std::invalid_argument);
}

TEST_CASE("harmonic_decompose reconstructs random bi-homogeneous polynomials") {
  gen::for_all(60, 12, [](gen::Rng& g) {
    const int n = g.integer(1, 3), p = g.integer(0, 4), q = g.integer(0, 4);
    const BiPolynomial P = gen::bihomogeneous(g, n, p, q, 6);
    const HarmonicLayers l = harmonic_decompose(P);
    CHECK(coefficient_distance(l.reconstruct(), P) <= 1e-12);
    CHECK(l.max_laplacian_residual() <= 1e-12);
    for (std::size_t k = 0; k < l.layers.size(); ++k)
      if (!l.layers[k].is_zero()) CHECK(l.layers[k].is_bihomogeneous(p - int(k), q - int(k)));
  });
}

TEST_CASE("harmonic_split examples") {
  const HarmonicSplit s = harmonic_split(BiPolynomial::z(2, 0), 0, Side::zbar);
  CHECK(s.gamma.num == 1);
  CHECK(s.gamma.den == 2);
  CHECK(coefficient_distance(s.P0, mono({1, 0}, {1, 0}) - 0.5 * BiPolynomial::norm_squared(2)) <= 1e-15);
  CHECK(s.reconstruction_residual <= 1e-12);

  const HarmonicSplit c = harmonic_split(BiPolynomial::constant(2, 1.0), 0, Side::zbar);
  CHECK(coefficient_distance(c.P0, BiPolynomial::zbar(2, 0)) == 0.0);
  CHECK(c.derivative.is_zero());

  // Oracle: the harmonic layer of z1 zbar2 from the decomposition.
  const HarmonicSplit z = harmonic_split(BiPolynomial::zbar(2, 1), 0, Side::z);
  CHECK(z.reconstruction_residual <= 1e-12);
  CHECK(coefficient_distance(z.P0, harmonic_decompose(mono({1, 0}, {0, 1})).layers[0]) <= 1e-15);

  CHECK_THROWS_AS(harmonic_split(mono({1, 0}, {1, 0}), 0, Side::zbar), std::invalid_argument);
}

TEST_CASE("harmonic_split on random harmonics") {
  gen::for_all(60, 13, [](gen::Rng& g) {
    const int n = g.integer(1, 3), p = g.integer(0, 3);
    const int q = n == 1 ? 0 : g.integer(0, 3);
    const BiPolynomial P = gen::harmonic(g, n, p, q);
    const int j = g.integer(0, n - 1);
    const Side side = g.integer(0, 1) ? Side::z : Side::zbar;
    const HarmonicSplit s = harmonic_split(P, j, side);
    if (n + p + q > 1) CHECK(s.gamma.value() == doctest::Approx(1.0 / (n + p + q - 1)));
    const BiPolynomial mult = side == Side::zbar ? BiPolynomial::zbar(n, j) : BiPolynomial::z(n, j);
    const BiPolynomial recon = s.P0 + s.gamma.value() * (BiPolynomial::norm_squared(n) * s.derivative);
    CHECK(coefficient_distance(mult * P, recon) <= 1e-12);
    CHECK(is_harmonic(s.P0));
  });
}

TEST_CASE("sphere moments") {
  CHECK(sphere_moment({1, 0}, {0, 1}) == 0.0);
  CHECK(sphere_moment({1, 0}, {1, 0}) == doctest::Approx(0.5));
  CHECK(sphere_moment({2, 0}, {2, 0}) == doctest::Approx(1.0 / 3.0));
  CHECK(sphere_moment({0}, {0}) == 1.0);
}

TEST_CASE("sphere moments agree with an independent Monte-Carlo oracle") {
  // Uniform points on S^{2n-1} from normalized Gaussians, generated here rather
  // than through the library's sampler.
  const std::size_t N = 1000000;
  for (int n = 1; n <= 3; ++n) {
    std::mt19937_64 eng(90 + n);
    std::normal_distribution<double> nd;
    std::vector<cplx> pts(N * n);
    for (std::size_t s = 0; s < N; ++s) {
      double norm = 0.0;
      for (int l = 0; l < n; ++l) {
        pts[s * n + l] = cplx(nd(eng), nd(eng));
        norm += std::norm(pts[s * n + l]);
      }
      for (int l = 0; l < n; ++l) pts[s * n + l] /= std::sqrt(norm);
    }
    gen::Rng g(100 + n);
    for (int t = 0; t < 6; ++t) {
      const int deg = g.integer(0, 3);
      const BiIndex idx = t % 2 ? gen::bi_index(g, n, deg, deg) : gen::bi_index(g, n, deg, g.integer(0, 3));
      double s2 = 0.0;
      cplx mean = 0.0;
      for (std::size_t s = 0; s < N; ++s) {
        cplx v = 1.0;
        for (int l = 0; l < n; ++l) {
          for (int e = 0; e < idx.alpha(l); ++e) v *= pts[s * n + l];
          for (int e = 0; e < idx.beta(l); ++e) v *= std::conj(pts[s * n + l]);
        }
        mean += v;
        s2 += std::norm(v);
      }
      mean /= double(N);
      const double se = std::sqrt(std::max(0.0, s2 / N - std::norm(mean)) / (N - 1));
      CAPTURE(n);
      CAPTURE(idx.alpha_vec());
      CAPTURE(idx.beta_vec());
      CHECK(std::abs(mean - sphere_moment(idx)) <= 3.0 * se + 1e-12);
    }
  }
}

TEST_CASE("distinct harmonic layers are orthogonal on the sphere") {
  gen::for_all(40, 14, [](gen::Rng& g) {
    const int n = g.integer(1, 3);
    const int p = g.integer(0, 2), q = n == 1 ? 0 : g.integer(0, 2);
    int p2 = g.integer(0, 2), q2 = n == 1 ? 0 : g.integer(0, 2);
    if (p2 == p && q2 == q) p2 = p + 1;
    const BiPolynomial P = gen::harmonic(g, n, p, q);
    const BiPolynomial Q = gen::harmonic(g, n, p2, q2);
    CHECK(std::abs(sphere_inner(P, Q)) <= 1e-12);
    CHECK(std::abs(sphere_inner(P, P)) > 0.0);
  });
}

TEST_CASE("projections") {
  const BiPolynomial f = mono({1, 0}, {1, 0});
  const TypeFunction p11 = project_pq(f, 1, 1);
  const TypeFunction p00 = project_pq(f, 0, 0);
  gen::for_all(10, 15, [&](gen::Rng& g) {
    const CVec z = gen::complex_vector(g, 2);
    const double r2 = z.squaredNorm();
    CHECK(std::abs(p11(z) - (z[0] * std::conj(z[0]) - r2 / 2)) <= 1e-14);
    CHECK(std::abs(p00(z) - r2 / 2) <= 1e-14);
    CHECK(std::abs(project_pq(p11, 1, 1)(z) - p11(z)) <= 1e-14);
  });
  CHECK(project_pq(f, 1, 0).is_zero());

  gen::for_all(20, 16, [](gen::Rng& g) {
    const int n = g.integer(1, 3), p = g.integer(0, 2), q = n == 1 ? 0 : g.integer(0, 2);
    const BiPolynomial h = gen::harmonic(g, n, p, q);
    const TypeFunction f = TypeFunction::product(RadialSum::term(g.complex(), -0.25, 2), h);
    const CVec z = gen::complex_vector(g, n);
    CHECK(std::abs(project_pq(f, p, q)(z) - f(z)) <= 1e-12);
    CHECK(project_pq(f, p + 1, q).is_zero());
  });
}

TEST_CASE("conjugation by a frame") {
  RMat v(2, 2);
  v << 0, -1, 1, 0;
  const ReducedFrame id = reduce(v);
  const BiPolynomial P = mono({2}, {1}, cplx(1, 2));
  CHECK(coefficient_distance(conjugate_poly(P, id), P) <= 1e-14);

  const StepTwoGroup q = quaternionic_group();
  gen::for_all(30, 17, [&](gen::Rng& g) {
    const ReducedFrame f = reduce(q, gen::real_vector(g, 3));
    const int p = g.integer(0, 3), qq = g.integer(0, 3);
    const BiPolynomial h = gen::harmonic(g, 2, p, qq);
    const BiPolynomial hl = conjugate_poly(h, f);
    CHECK(laplacian(hl).max_abs_coeff() <= 1e-12 * std::max(1.0, h.max_abs_coeff()));
    CHECK(hl.total_degree() == p + qq);
    const CVec z = gen::complex_vector(g, 2);
    CHECK(std::abs(hl(z) - h(transport_point(f, z, Transport::from_reduced))) <= 1e-12 * std::max(1.0, std::abs(hl(z))));
    const BiPolynomial back = conjugate_poly(hl, f, Transport::from_reduced);
    CHECK(coefficient_distance(back, h) <= 1e-12);
    CHECK(is_Hlambda_pq(conjugate_poly(h, f, Transport::from_reduced), p, qq, f));
  });
}

TEST_CASE("polynomial JSON round trip") {
  const BiPolynomial P = mono({1, 2}, {0, 1}, cplx(0.5, -2)) + mono({0, 0}, {1, 0}, 3.0);
  CHECK(coefficient_distance(bipolynomial_from_json(to_json(P), 2), P) == 0.0);
  CHECK_THROWS(bipolynomial_from_json(json::parse(R"([{"alpha":[1],"beta":[0,0]}])"), 2));
}
