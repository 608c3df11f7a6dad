#include "generators.hpp"

#include "tsmkit/harmonics.hpp"
#include "tsmkit/laguerre.hpp"
#include "tsmkit/twisted_mean.hpp"

using namespace tsmkit;

namespace {

const QuadratureRule kAngles64 = QuadratureRule::parse("angles:64");

CVec vec1(cplx a) {
  CVec z(1);
  z << a;
  return z;
}

}  // namespace

TEST_CASE("Laguerre polynomials against closed forms") {
  gen::for_all(20, 31, [](gen::Rng& g) {
    const double a = g.uniform(0.0, 4.0), x = g.uniform(0.0, 6.0);
    CHECK(laguerre(0, a, x) == 1.0);
    CHECK(laguerre(1, a, x) == doctest::Approx(1.0 + a - x).epsilon(1e-14));
    CHECK(laguerre(2, a, x) == doctest::Approx((a + 1) * (a + 2) / 2 - (a + 2) * x + x * x / 2).epsilon(1e-13));
  });
  for (int n = 1; n <= 4; ++n) {
    CHECK(laguerre_phi(1, n, 1.0, 0.0) == doctest::Approx(double(n)));
    CHECK(laguerre_phi(0, n, 2.0, 0.0) == 1.0);
    CHECK(laguerre_phi(0, n, 2.0, 1.5) == doctest::Approx(std::exp(-2.0 * 2.25 / 4)));
    CHECK(std::abs(laguerre_phi(3, n, 1.0, 40.0)) < 1e-100);
  }
  const RadialSum r = laguerre_phi_radial(3, 2, 0.7);
  for (double rho : {0.0, 0.5, 2.0}) CHECK(std::abs(r(rho) - laguerre_phi(3, 2, 0.7, rho)) <= 1e-13);
}

TEST_CASE("twisted mean normalization and symmetry") {
  const TypeFunction one = TypeFunction::polynomial(BiPolynomial::constant(1, 1.0));
  for (double s : {0.3, 1.0, 4.0}) {
    CHECK(std::abs(tsm(heisenberg_group(1), RVec::Constant(1, 1.7), one, CVec::Zero(1), s, kAngles64).value - 1.0) <= 1e-12);
    const TypeFunction one2 = TypeFunction::polynomial(BiPolynomial::constant(2, 1.0));
    CHECK(std::abs(tsm(quaternionic_group(), RVec::Unit(3, 2), one2, CVec::Zero(2), s, kAngles64).value - 1.0) <= 1e-12);
    CHECK(std::abs(reduced_tsm(RVec::Constant(1, 2.0), one, CVec::Zero(1), s, kAngles64).value - 1.0) <= 1e-12);
  }
  const TypeFunction w1 = TypeFunction::polynomial(BiPolynomial::z(2, 0));
  CHECK(std::abs(tsm(quaternionic_group(), RVec::Unit(3, 0), w1, CVec::Zero(2), 1.3, kAngles64).value) <= 1e-14);
}

TEST_CASE("zero twist gives the Euclidean spherical mean") {
  // Mean of |z - w|^2 over |w| = s is |z|^2 + s^2.
  gen::for_all(10, 32, [](gen::Rng& g) {
    const int n = g.integer(1, 3);
    const CVec z = gen::complex_vector(g, n);
    const double s = g.uniform(0.2, 2.0);
    const TypeFunction f = TypeFunction::polynomial(BiPolynomial::norm_squared(n));
    const MeanResult m = reduced_tsm(RVec::Zero(n), f, z, s, QuadratureRule::parse("angles:8"));
    CHECK(std::abs(m.value - (z.squaredNorm() + s * s)) <= 1e-12 * (z.squaredNorm() + s * s));
  });
}

TEST_CASE("vanishing mean on the Heisenberg group") {
  const TypeFunction h = TypeFunction::product(RadialSum::term(1.0, 0.25, -2), BiPolynomial::z(1, 0));
  const CVec z = vec1(0.3);
  const MeanResult a = tsm(heisenberg_group(1), RVec::Constant(1, 1.0), h, z, 1.0, kAngles64);
  CHECK(std::abs(a.value) <= 1e-8);
  const MeanResult e = tsm(heisenberg_group(1), RVec::Constant(1, 1.0), h, z, 1.0, QuadratureRule::parse("exact"));
  CHECK(std::abs(e.value) <= 1e-8);
  // A flipped exponent is a different function and its mean does not vanish.
  const TypeFunction bad = TypeFunction::product(RadialSum::term(1.0, 0.25, 0), BiPolynomial::z(1, 0));
  CHECK(std::abs(tsm(heisenberg_group(1), RVec::Constant(1, 1.0), bad, z, 1.0, kAngles64).value) > 1e-3);
}

TEST_CASE("H-type mean equals the reduced mean with mu = |lambda|") {
  const StepTwoGroup q = quaternionic_group();
  gen::for_all(10, 33, [&](gen::Rng& g) {
    const RVec lambda = gen::real_vector(g, 3);
    const ReducedFrame fr = reduce(q, lambda);
    const TypeFunction f = TypeFunction::product(RadialSum::term(1.0, -0.3, 0), gen::bihomogeneous(g, 2, 1, 1, 3));
    const CVec z = gen::complex_vector(g, 2, 0.5);
    const double s = g.uniform(0.3, 1.5);
    const FrameCheck c = frame_equivalence_check(q, fr, f, z, s, kAngles64);
    CHECK(c.residual <= 1e-8);
    CHECK(c.residual <= std::max(10.0 * c.err_estimate, 1e-13));
    // All mu equal |lambda|, so the reduced mean is the scalar twisted mean.
    CHECK((fr.mu.array() - lambda.norm()).abs().maxCoeff() <= 1e-10);
  });

  // Radial functions ignore the frame.
  const TypeFunction radial = TypeFunction::radial(2, RadialSum::term(1.0, -0.5, 2));
  RVec lambda(3);
  lambda << 0.2, -1.0, 0.4;
  const ReducedFrame fr = reduce(q, lambda);
  CVec z(2);
  z << cplx(0.2, 0.1), cplx(-0.3, 0.4);
  const FrameCheck c = frame_equivalence_check(q, fr, radial, z, 0.8, kAngles64);
  const MeanResult direct = reduced_tsm(fr.mu, radial, z, 0.8, kAngles64);
  CHECK(std::abs(c.rhs - direct.value) <= 1e-12);
  CHECK(c.residual <= 1e-10);
}

TEST_CASE("Monte-Carlo mean within 4 standard errors of the product rule") {
  const StepTwoGroup q = quaternionic_group();
  const TypeFunction f = TypeFunction::product(RadialSum::term(1.0, -0.25, 0), BiPolynomial::z(2, 1));
  CVec z(2);
  z << cplx(0.4, -0.2), cplx(0.1, 0.3);
  RVec lambda(3);
  lambda << 0.5, 1.0, -0.7;
  const MeanResult ref = tsm(q, lambda, f, z, 1.1, kAngles64);
  const MeanResult mc = tsm(q, lambda, f, z, 1.1, QuadratureRule::parse("mc:200000@4"));
  CHECK(mc.err_estimate > 0.0);
  CHECK(std::abs(mc.value - ref.value) <= 4.0 * mc.err_estimate);
}

TEST_CASE("twisted convolution of Gaussians") {
  // Completing the square and the Gaussian Fourier transform give
  // 2 pi exp(-|z|^2 (1 + lambda^2) / 8).
  const Evaluable g(TypeFunction::radial(1, RadialSum::term(1.0, -0.25, 0)));
  for (double lambda : {1.0, -0.6}) {
    for (cplx z : {cplx(0.0), cplx(0.5, 0.2), cplx(-1.1, 0.7)}) {
      const ConvolutionResult r = twisted_convolution(lambda, g, g, vec1(z), QuadratureRule::parse("grid:120"));
      const double expect = 2 * kPi * std::exp(-std::norm(z) * (1 + lambda * lambda) / 8);
      CHECK(std::abs(r.value - expect) <= 1e-8);
    }
  }
  const Evaluable zero(TypeFunction(1));
  CHECK(std::abs(twisted_convolution(1.0, zero, zero, vec1(0.3), QuadratureRule::parse("grid:40")).value) == 0.0);
  CHECK(truncation_radius(1.0, 1.0) == doctest::Approx(1.0 + std::sqrt(-4 * std::log(1e-14))));
}

TEST_CASE("Laguerre function identity on C^1") {
  const RadialSum g = RadialSum::term(1.0, -0.4, 0);
  const QuadratureRule grid = QuadratureRule::parse("grid:120");
  const CVec z = vec1(cplx(0.5, 0.2));
  const HeckeBochnerResult r = hecke_bochner_check(1, 1, 0, 1, 1.0, g, BiPolynomial::z(1, 0), z, grid);
  CHECK_FALSE(r.vanishing_branch);
  CHECK(std::abs(r.lhs) > 1e-3);
  CHECK(r.relative <= 1e-6);

  const HeckeBochnerResult v = hecke_bochner_check(1, 2, 0, 1, 1.0, g, pow(BiPolynomial::z(1, 0), 2), z, grid);
  CHECK(v.vanishing_branch);
  CHECK(std::abs(v.lhs) <= 1e-6);
}

TEST_CASE("radial ODE check on sampled profiles") {
  const double mu = 1.4;
  const std::vector<double> r = linear_grid(0.05, 2.0, 1000);
  REQUIRE(r.size() == 1000);
  std::vector<cplx> sol, lin, zero(r.size(), 0.0);
  for (double t : r) {
    sol.emplace_back(0.7 * t * std::exp(mu * t * t / 4));
    lin.emplace_back(t);
  }
  const BoundaryProbe good = boundary_ode_check(mu, r, sol);
  CHECK(good.max_integral_residual <= 1e-10);
  CHECK(good.max_ode_residual <= 1e-10);
  CHECK(std::abs(good.c_estimate.back() - 0.7 * r.back() * r.back()) <= 1e-10);

  CHECK(boundary_ode_check(mu, r, lin).max_integral_residual > 1e-3);
  const BoundaryProbe z = boundary_ode_check(mu, r, zero);
  CHECK(z.max_abs_F == 0.0);
  CHECK(z.c_zero_consistent);
  CHECK_THROWS(boundary_ode_check(mu, {0.1, 0.2, 0.3}, {1.0, 1.0, 1.0}));
}

TEST_CASE("black boxes and pullbacks") {
  BlackBox b;
  b.n = 1;
  b.fn = [](const CVec& z) { return std::exp(-std::norm(z[0])); };
  b.envelope_rate = 4.0;
  const Evaluable e(b);
  CHECK_FALSE(e.is_type_function());
  const Evaluable tf(TypeFunction::radial(1, RadialSum::term(1.0, -1.0, 0)));
  const CVec z = vec1(cplx(0.3, -0.2));
  CHECK(std::abs(reduced_tsm(RVec::Constant(1, 1.0), e, z, 0.7, kAngles64).value -
                 reduced_tsm(RVec::Constant(1, 1.0), tf, z, 0.7, kAngles64).value) <= 1e-14);
  RMat rot(2, 2);
  rot << 0, -1, 1, 0;
  CHECK(std::abs(tf.pullback(rot)(z) - tf(z)) <= 1e-15);
}
