#include "generators.hpp"

#include "tsmkit/harmonics.hpp"
#include "tsmkit/io.hpp"
#include "tsmkit/radial.hpp"
#include "tsmkit/type_function.hpp"

using namespace tsmkit;

namespace {

RadialSum random_radial(gen::Rng& g, int terms, int kmin = 0) {
  RadialSum r;
  for (int t = 0; t < terms; ++t) r.add(g.complex(), cplx(-g.uniform(0.1, 1.0), g.uniform(-0.5, 0.5)), g.integer(kmin, 4));
  return r;
}

double radial_distance(const RadialSum& a, const RadialSum& b) {
  double worst = 0.0;
  for (double rho : {0.3, 0.7, 1.1, 1.9, 2.6}) worst = std::max(worst, std::abs(a(rho) - b(rho)));
  return worst;
}

double function_distance(const TypeFunction& a, const TypeFunction& b, gen::Rng& g) {
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const CVec z = gen::complex_vector(g, a.n() ? a.n() : b.n(), 0.8);
    worst = std::max(worst, std::abs(a(z) - b(z)));
  }
  return worst;
}

}  // namespace

TEST_CASE("radial sums combine, prune and differentiate") {
  RadialSum r = RadialSum::term(2.0, -0.5, 1) + RadialSum::term(3.0, -0.5, 1);
  CHECK(r.size() == 1);
  CHECK(r.terms()[0].c == cplx(5.0));
  r -= RadialSum::term(5.0, -0.5, 1);
  CHECK(r.is_zero());

  const RadialSum f = RadialSum::term(1.5, cplx(-0.3, 0.2), 3);
  const double h = 1e-6;
  for (double rho : {0.4, 1.0, 2.2}) {
    const cplx fd = (f(rho + h) - f(rho - h)) / (2 * h);
    CHECK(std::abs(f.d_drho()(rho) - fd) <= 1e-7);
    CHECK(std::abs(f.rho_d_drho()(rho) - rho * fd) <= 1e-7);
    CHECK(std::abs(f.d_drho2()(rho) - fd / (2 * rho)) <= 1e-7);
  }
  CHECK(std::abs(f.shifted(-2)(1.5) - f(1.5) / 2.25) <= 1e-14);
  CHECK(std::abs(f.scaled_gaussian(0.1)(1.5) - f(1.5) * std::exp(0.225)) <= 1e-14);
  CHECK(radial_distance(radial_from_json(to_json(f)), f) == 0.0);
}

TEST_CASE("D operator examples") {
  const cplx nu(0.3, -1.0);
  for (int k : {-4, 0, 3}) {
    const RadialSum g = RadialSum::term(1.0, -nu / 4.0, k);
    CHECK(radial_distance(apply_D(g, nu, false), cplx(k) * g) <= 1e-14);
    const RadialSum gb = RadialSum::term(1.0, std::conj(nu) / 4.0, k);
    CHECK(radial_distance(apply_D(gb, nu, true), cplx(k) * gb) <= 1e-14);
  }
  CHECK(radial_distance(apply_D(RadialSum::constant(1.0), nu, false), RadialSum::term(nu / 2.0, 0.0, 2)) == 0.0);
}

TEST_CASE("operator stacks") {
  const cplx nu = -1.0;
  const OperatorStack s10 = build_stack(1, 0, 3, KappaSchedule::standard, nu, nu);
  REQUIRE(s10.atoms.size() == 1);
  CHECK(s10.atoms[0].kappa == doctest::Approx(1.0 / 3.0));
  CHECK(build_stack(0, 0, 2, KappaSchedule::standard, nu, nu).atoms.empty());

  const OperatorStack s20 = build_stack(2, 0, 2, KappaSchedule::standard, nu, nu);
  REQUIRE(s20.atoms.size() == 2);
  // Written left to right, so the gamma_{2,0} atom acts last.
  CHECK(s20.atoms[0].kappa == doctest::Approx(gamma_pq(2, 2, 0)));
  CHECK(s20.atoms[1].kappa == doctest::Approx(gamma_pq(2, 1, 0)));

  CHECK_THROWS(build_stack(1, 0, 2, std::vector<double>{0.3}, nu, nu));
  CHECK(parse_kappa_schedule(to_string(KappaSchedule::ascending)) == KappaSchedule::ascending);
  CHECK_THROWS(parse_kappa_schedule("bogus"));
}

TEST_CASE("solution families") {
  const cplx nu = -1.0;
  const RadialSum s = solution_family(1, 0, 2, nu, nu, {cplx(2.0)}, {});
  REQUIRE(s.size() == 1);
  CHECK(s.terms()[0].k == -4);
  CHECK(s.terms()[0].a == nu * -0.25);
  CHECK(solution_family(2, 1, 2, nu, nu, {0.0, 0.0}, {0.0}).is_zero());
  const RadialSum s11 = solution_family(1, 1, 1, nu, nu, {1.0}, {1.0});
  CHECK(s11.size() == 2);
  for (const auto& t : s11.terms()) CHECK(t.k == -4);
}

TEST_CASE("pure holomorphic and antiholomorphic families are annihilated") {
  const cplx nu = -1.0;
  for (int n = 1; n <= 3; ++n)
    for (int p = 0; p <= 3; ++p) {
      std::vector<cplx> A;
      for (int i = 1; i <= p; ++i) A.emplace_back(1.0 + i, -0.5 * i);
      const auto rep = annihilation_check(build_stack(p, 0, n, KappaSchedule::standard, nu, nu),
                                          solution_family(p, 0, n, nu, nu, A, {}));
      CAPTURE(n);
      CAPTURE(p);
      CHECK(rep.pass);
    }
  const auto rep = annihilation_check(build_stack(0, 2, 2, KappaSchedule::standard, nu, nu),
                                      solution_family(0, 2, 2, nu, nu, {}, {1.0, cplx(0.5, 1)}));
  CHECK(rep.pass);
}

TEST_CASE("a pure power without Gaussian is not annihilated") {
  const int n = 2;
  const auto rep = annihilation_check(build_stack(1, 0, n, KappaSchedule::standard, -1.0, -1.0),
                                      RadialSum::term(1.0, 0.0, -2 * n));
  CHECK_FALSE(rep.pass);
  CHECK(rep.residual > 0.1);
}

TEST_CASE("operators are linear") {
  gen::for_all(30, 21, [](gen::Rng& g) {
    const RadialSum a = random_radial(g, 3, -3), b = random_radial(g, 3, -3);
    const cplx c = g.complex(), nu = g.complex();
    CHECK(radial_distance(apply_D(a + c * b, nu, false), apply_D(a, nu, false) + c * apply_D(b, nu, false)) <= 1e-12);
    const OperatorStack st = build_stack(g.integer(0, 2), g.integer(0, 2), g.integer(1, 3), KappaSchedule::standard, nu, nu);
    CHECK(radial_distance(st.apply(a + c * b), st.apply(a) + c * st.apply(b)) <= 1e-11);
  });
}

TEST_CASE("twisted fields on simple inputs") {
  RVec mu(1);
  mu << 1.3;
  // Z~ = d/dz - (mu/4) zbar kills e^{+mu rho^2/4}; its adjoint kills e^{-mu rho^2/4}.
  const TypeFunction grow = TypeFunction::radial(1, RadialSum::term(1.0, mu[0] / 4.0, 0));
  const TypeFunction decay = TypeFunction::radial(1, RadialSum::term(1.0, -mu[0] / 4.0, 0));
  CHECK(apply_Z_reduced(mu, 0, false, grow).is_zero());
  CHECK(apply_Z_reduced(mu, 0, true, decay).is_zero());
  gen::Rng g0(20);
  CHECK(function_distance(apply_Z_reduced(mu, 0, false, decay), (-mu[0] / 2.0) * decay.times(BiPolynomial::zbar(1, 0)), g0) <= 1e-14);

  const StepTwoGroup h = heisenberg_group(2);
  const RVec lambda = RVec::Constant(1, 0.7);
  const TwistTable t = twist_coefficients(h, lambda);
  const TypeFunction one = TypeFunction::polynomial(BiPolynomial::constant(2, 1.0));
  for (int j = 0; j < 2; ++j) {
    BiPolynomial expect(2);
    for (int l = 0; l < 2; ++l) {
      expect += (t.eta(l, j) / 4.0) * BiPolynomial::z(2, l);
      expect += (t.nu(l, j) / 4.0) * BiPolynomial::zbar(2, l);
    }
    gen::Rng g(22 + j);
    CHECK(function_distance(apply_Z(t, j, false, one), TypeFunction::polynomial(expect), g) <= 1e-14);
  }
}

TEST_CASE("fields agree with finite differences") {
  const StepTwoGroup q = quaternionic_group();
  gen::for_all(10, 23, [&](gen::Rng& g) {
    const RVec lambda = gen::real_vector(g, 3);
    const TwistTable t = twist_coefficients(q, lambda);
    const TypeFunction f = TypeFunction::product(random_radial(g, 2), gen::bihomogeneous(g, 2, 1, 1, 3));
    const int j = g.integer(0, 1);
    const CVec z = gen::complex_vector(g, 2, 0.7);
    const double h = 1e-6;
    auto partial = [&](bool bar) {
      CVec dx = z, dy = z;
      dx[j] += h;
      dy[j] += cplx(0, h);
      CVec mx = z, my = z;
      mx[j] -= h;
      my[j] -= cplx(0, h);
      const cplx fx = (f(dx) - f(mx)) / (2 * h), fy = (f(dy) - f(my)) / (2 * h);
      return bar ? 0.5 * (fx + I * fy) : 0.5 * (fx - I * fy);
    };
    cplx lin_z = 0.0, lin_zb = 0.0;
    for (int l = 0; l < 2; ++l) {
      lin_z += t.eta(l, j) * z[l] + t.nu(l, j) * std::conj(z[l]);
      lin_zb += std::conj(t.nu(l, j)) * z[l] + std::conj(t.eta(l, j)) * std::conj(z[l]);
    }
    const cplx Zf = partial(false) + 0.25 * lin_z * f(z);
    const cplx Zbf = partial(true) - 0.25 * lin_zb * f(z);
    CHECK(std::abs(apply_Z(t, j, false, f)(z) - Zf) <= 1e-6);
    CHECK(std::abs(apply_Z(t, j, true, f)(z) - Zbf) <= 1e-6);
  });
}

TEST_CASE("reduced commutator acts as mu/2 on Gaussians") {
  gen::for_all(10, 24, [](gen::Rng& g) {
    RVec mu(1);
    mu << g.uniform(0.2, 3.0);
    const TypeFunction f = TypeFunction::product(RadialSum::term(g.complex(), -g.uniform(0.1, 1.0), 0),
                                                 BiPolynomial::constant(1, 1.0));
    const TypeFunction zz = apply_Z_reduced(mu, 0, false, apply_Z_reduced(mu, 0, true, f));
    const TypeFunction zbz = apply_Z_reduced(mu, 0, true, apply_Z_reduced(mu, 0, false, f));
    const TypeFunction comm = zz - zbz;
    CHECK(function_distance(comm, (mu[0] / 2.0) * f, g) <= 1e-12);
  });
}

TEST_CASE("projected reduced field gives the first-order radial operator") {
  gen::for_all(10, 25, [](gen::Rng& g) {
    const int n = g.integer(1, 3);
    RVec mu(n);
    for (int j = 0; j < n; ++j) mu[j] = g.uniform(0.5, 2.0);
    const int j0 = g.integer(0, n - 1);
    const RadialSum a = random_radial(g, 2);
    const TypeFunction f = TypeFunction::product(a, BiPolynomial::z(n, j0));
    const RadialSum got = project_pq(apply_Z_reduced(mu, j0, false, f), 0, 0).as_radial();
    const RadialSum expect =
        (1.0 / (2.0 * n)) * (a.rho_d_drho() - (mu[j0] / 2.0) * a.shifted(2)) + a;
    CHECK(radial_distance(got, expect) <= 1e-12);
  });
}

TEST_CASE("compiled evaluation matches the symbolic form") {
  gen::for_all(30, 26, [](gen::Rng& g) {
    const int n = g.integer(1, 3);
    TypeFunction f(n);
    for (int s = 0; s < 3; ++s)
      f += TypeFunction::product(random_radial(g, 2), gen::bihomogeneous(g, n, g.integer(0, 3), g.integer(0, 3)));
    const CompiledTypeFunction c(f);
    const CVec z = gen::complex_vector(g, n);
    CHECK(std::abs(c(z) - f(z)) <= 1e-12 * std::max(1.0, std::abs(f(z))));
  });
  const TypeFunction sing = TypeFunction::radial(1, RadialSum::term(1.0, 0.0, -2));
  CHECK_THROWS_AS(sing(CVec::Zero(1)), SingularityError);
}

TEST_CASE("type functions stay closed under the operator chain") {
  gen::for_all(20, 27, [](gen::Rng& g) {
    const int n = 2;
    const StepTwoGroup q = quaternionic_group();
    const TwistTable t = twist_coefficients(q, gen::real_vector(g, 3));
    TypeFunction f = TypeFunction::product(random_radial(g, 2), gen::bihomogeneous(g, n, g.integer(0, 2), g.integer(0, 2)));
    for (int step = 0; step < 3; ++step) f = apply_Z(t, g.integer(0, 1), g.integer(0, 1) == 1, f);
    const TypeFunction back = type_function_from_json(to_json(f));
    const CVec z = gen::complex_vector(g, n);
    CHECK(std::abs(back(z) - f(z)) <= 1e-12 * std::max(1.0, std::abs(f(z))));
    TypeFunction total(n);
    for (int p = 0; p <= 5; ++p)
      for (int qq = 0; qq <= 5; ++qq) total += project_pq(f, p, qq);
    CHECK(std::abs(total(z) - f(z)) <= 1e-10 * std::max(1.0, std::abs(f(z))));
  });
}
