#include "generators.hpp"

#include "tsmkit/group.hpp"
#include "tsmkit/io.hpp"

using namespace tsmkit;

namespace {

RMat m2(double a, double b, double c, double d) {
  RMat m(2, 2);
  m << a, b, c, d;
  return m;
}

const ConditionResult& condition(const ValidationReport& r, const std::string& name) {
  for (const auto& c : r.conditions)
    if (c.name == name) return c;
  FAIL("missing condition " << name);
  return r.conditions.front();
}

}  // namespace

TEST_CASE("canonical symplectic matrix validates as Heisenberg") {
  const auto rep = validate_group({m2(0, -1, 1, 0)}, 1, 1, GroupMode::heisenberg);
  CHECK(rep.all_pass());
  CHECK(rep.worst_residual() <= 1e-12);
}

TEST_CASE("quaternionic triple satisfies the H-type conditions") {
  const StepTwoGroup q = quaternionic_group();
  // Independent construction from the quaternion multiplication table.
  const int table[4][4][2] = {{{0, 1}, {1, 1}, {2, 1}, {3, 1}},
                              {{1, 1}, {0, -1}, {3, 1}, {2, -1}},
                              {{2, 1}, {3, -1}, {0, -1}, {1, 1}},
                              {{3, 1}, {2, 1}, {1, -1}, {0, -1}}};
  for (int u = 1; u <= 3; ++u) {
    RMat expect = RMat::Zero(4, 4);
    for (int b = 0; b < 4; ++b) expect(table[u][b][0], b) = table[u][b][1];
    CHECK((q.U(u - 1) - expect).cwiseAbs().maxCoeff() == 0.0);
  }
  const auto rep = validate_group(q, GroupMode::htype);
  CHECK(rep.all_pass());
  CHECK(rep.worst_residual() <= 1e-12);
  CHECK(htype_residuals(q.structure()).holds());
}

TEST_CASE("symmetric structure matrix fails skew symmetry with residual 2") {
  const auto rep = validate_group({m2(0, 1, 1, 0)}, 1, 1, GroupMode::heisenberg);
  CHECK_FALSE(rep.all_pass());
  const auto& skew = condition(rep, "skew_symmetric");
  CHECK_FALSE(skew.pass);
  CHECK(skew.residual == doctest::Approx(2.0));
}

TEST_CASE("wrong matrix shape is rejected with its index") {
  const std::vector<RMat> mats = {m2(0, -1, 1, 0), RMat::Zero(3, 3)};
  try {
    validate_group(mats, 1, 2, GroupMode::metivier);
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(e.index() == 1);
  }
}

TEST_CASE("Metivier check certifies H-type groups and rejects a degenerate pair") {
  const auto heis = check_metivier(heisenberg_group(1));
  CHECK(heis.status == MetivierStatus::certified);
  CHECK(heis.min_abs_det == doctest::Approx(1.0));
  CHECK(check_metivier(quaternionic_group()).status == MetivierStatus::certified);

  const StepTwoGroup degenerate(1, 2, {m2(0, -1, 1, 0), RMat::Zero(2, 2)});
  const auto rep = check_metivier(degenerate);
  CHECK(rep.status == MetivierStatus::heuristic_fail);
  CHECK(rep.min_abs_det <= 1e-12);
  CHECK(std::abs(rep.argmin_lambda[1]) == doctest::Approx(1.0));
}

TEST_CASE("group law examples") {
  const StepTwoGroup h = heisenberg_group(1);
  GroupPoint p{RVec::Unit(2, 0), RVec::Zero(1)};
  GroupPoint q{RVec::Unit(2, 1), RVec::Zero(1)};
  const GroupPoint r = group_law(h, p, q);
  CHECK(r.x[0] == 1.0);
  CHECK(r.x[1] == 1.0);
  CHECK(r.t[0] == doctest::Approx(-0.5));

  const GroupPoint e = group_law(h, p, group_identity(h));
  CHECK((e.x - p.x).norm() == 0.0);
  const GroupPoint id = group_law(h, p, group_inverse(p));
  CHECK(id.x.norm() == 0.0);
  CHECK(id.t.norm() == 0.0);
}

TEST_CASE("group law is associative on random triples") {
  gen::for_all(50, 1, [](gen::Rng& g) {
    const int n = g.integer(1, 3), m = g.integer(1, 3);
    std::vector<RMat> mats;
    for (int k = 0; k < m; ++k) mats.push_back(gen::skew_matrix(g, 2 * n));
    const StepTwoGroup grp(n, m, mats);
    auto point = [&] { return GroupPoint{gen::real_vector(g, 2 * n), gen::real_vector(g, m)}; };
    const GroupPoint a = point(), b = point(), c = point();
    const GroupPoint l = group_law(grp, group_law(grp, a, b), c);
    const GroupPoint r = group_law(grp, a, group_law(grp, b, c));
    CHECK((l.x - r.x).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((l.t - r.t).cwiseAbs().maxCoeff() <= 1e-12);
  });
}

TEST_CASE("twist tables") {
  const TwistTable t = twist_coefficients(heisenberg_group(1), RVec::Constant(1, 1.0));
  CHECK(std::abs(t.eta(0, 0)) <= 1e-12);
  CHECK(std::abs(t.nu_diag(0)) > 0.5);
  CHECK_THROWS(twist_coefficients(heisenberg_group(1), RVec::Zero(1)));

  gen::for_all(100, 2, [](gen::Rng& g) {
    const int n = g.integer(1, 4), m = g.integer(1, 3);
    std::vector<RMat> mats;
    for (int k = 0; k < m; ++k) mats.push_back(gen::skew_matrix(g, 2 * n));
    const StepTwoGroup grp(n, m, mats);
    const RVec lambda = gen::real_vector(g, m);
    const TwistTable a = twist_coefficients(grp, lambda);
    CHECK(a.eta.diagonal().cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((a.nu - (-a.beta + I * a.alpha)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((a.eta - (a.beta + I * a.alpha)).cwiseAbs().maxCoeff() <= 1e-15);
    const TwistTable b = twist_coefficients(grp, 2.0 * lambda);
    CHECK((b.nu - 2.0 * a.nu).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((b.alpha - 2.0 * a.alpha).cwiseAbs().maxCoeff() <= 1e-12);
  });
}

TEST_CASE("H-type sums are |lambda| times an orthogonal matrix") {
  const StepTwoGroup q = quaternionic_group();
  gen::for_all(50, 3, [&](gen::Rng& g) {
    const RVec lambda = gen::real_vector(g, 3);
    RMat v = RMat::Zero(4, 4);
    for (int k = 0; k < 3; ++k) v += lambda[k] * q.U(k);
    const RMat w = v / lambda.norm();
    CHECK((w.transpose() * w - RMat::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);
  });
}

TEST_CASE("group JSON round trip and shape errors") {
  const StepTwoGroup q = quaternionic_group();
  const GroupSpec back = group_from_json(group_to_json(q, GroupMode::htype));
  CHECK(back.mode == GroupMode::htype);
  CHECK(group_hash(back.group) == group_hash(q));

  const json bad = {{"n", 1}, {"m", 2}, {"U", {{0, -1, 1, 0}, {0, 1, 0}}}};
  try {
    group_from_json(bad);
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(e.index() == 1);
  }
  CHECK_THROWS_AS(group_from_json(json{{"n", 1}, {"U", json::array()}}), std::invalid_argument);
}
