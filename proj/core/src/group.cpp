#include "tsmkit/group.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace tsmkit {

std::string to_string(GroupMode mode) {
  switch (mode) {
    case GroupMode::metivier: return "metivier";
    case GroupMode::htype: return "htype";
    case GroupMode::heisenberg: return "heisenberg";
  }
  return "unknown";
}

GroupMode parse_group_mode(const std::string& text) {
  if (text == "metivier") return GroupMode::metivier;
  if (text == "htype") return GroupMode::htype;
  if (text == "heisenberg") return GroupMode::heisenberg;
  throw std::invalid_argument("unknown group mode '" + text + "'");
}

std::string to_string(MetivierStatus status) {
  switch (status) {
    case MetivierStatus::certified: return "certified";
    case MetivierStatus::heuristic_pass: return "heuristic pass";
    case MetivierStatus::heuristic_fail: return "heuristic fail";
  }
  return "unknown";
}

namespace {

void check_shapes(const std::vector<RMat>& u, int n, int m) {
  if (n < 1) throw DimensionError("n must be positive", -1);
  if (m < 1) throw DimensionError("m must be positive", -1);
  if (static_cast<int>(u.size()) != m)
    throw DimensionError("expected " + std::to_string(m) + " structure matrices, got " +
                             std::to_string(u.size()),
                         static_cast<int>(u.size()));
  for (int k = 0; k < m; ++k) {
    if (u[k].rows() != 2 * n || u[k].cols() != 2 * n)
      throw DimensionError("structure matrix " + std::to_string(k) + " is " +
                               std::to_string(u[k].rows()) + "x" + std::to_string(u[k].cols()) +
                               ", expected " + std::to_string(2 * n) + "x" + std::to_string(2 * n),
                           k);
  }
}

double max_abs(const RMat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

RMat combine(const std::vector<RMat>& u, const RVec& lambda) {
  RMat v = RMat::Zero(u.front().rows(), u.front().cols());
  for (std::size_t k = 0; k < u.size(); ++k) v += lambda[static_cast<Eigen::Index>(k)] * u[k];
  return v;
}

}  // namespace

StepTwoGroup::StepTwoGroup(int n, int m, std::vector<RMat> structure)
    : n_(n), m_(m), u_(std::move(structure)) {
  check_shapes(u_, n_, m_);
}

bool ValidationReport::all_pass() const {
  for (const auto& c : conditions)
    if (!c.pass) return false;
  return !metivier || metivier->pass();
}

double ValidationReport::worst_residual() const {
  double worst = 0.0;
  for (const auto& c : conditions)
    if (c.name != "linear_independence") worst = std::max(worst, c.residual);
  return worst;
}

HTypeResiduals htype_residuals(const std::vector<RMat>& u) {
  HTypeResiduals r;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const RMat& a = u[j];
    r.skew = std::max(r.skew, max_abs(a + a.transpose()));
    r.orthogonal =
        std::max(r.orthogonal, max_abs(a.transpose() * a - RMat::Identity(a.rows(), a.cols())));
    for (std::size_t l = j + 1; l < u.size(); ++l)
      r.anticommute = std::max(r.anticommute, max_abs(a * u[l] + u[l] * a));
  }
  return r;
}

ValidationReport validate_group(const std::vector<RMat>& u, int n, int m, GroupMode mode,
                                const MetivierOptions& opts) {
  check_shapes(u, n, m);
  ValidationReport rep;
  rep.mode = mode;
  rep.n = n;
  rep.m = m;

  double skew = 0.0;
  for (const auto& a : u) skew = std::max(skew, max_abs(a + a.transpose()));
  rep.conditions.push_back({"skew_symmetric", skew <= kStructuralTol, skew, kStructuralTol});

  // Rank of the m x (2n)^2 stacking: smallest singular value.
  const Eigen::Index cells = 4 * static_cast<Eigen::Index>(n) * n;
  RMat stack(m, cells);
  for (int k = 0; k < m; ++k)
    stack.row(k) = Eigen::Map<const RMat>(u[k].data(), 1, cells);
  double sigma_min = 0.0;
  if (m <= cells) {
    Eigen::JacobiSVD<RMat> svd(stack);
    sigma_min = svd.singularValues()(m - 1);
  }
  rep.conditions.push_back(
      {"linear_independence", sigma_min > kSpectralTol, sigma_min, kSpectralTol});

  if (mode == GroupMode::htype || mode == GroupMode::heisenberg) {
    const HTypeResiduals h = htype_residuals(u);
    rep.conditions.push_back({"orthogonal", h.orthogonal <= kStructuralTol, h.orthogonal,
                              kStructuralTol});
    if (mode == GroupMode::htype)
      rep.conditions.push_back({"anticommuting", h.anticommute <= kStructuralTol, h.anticommute,
                                kStructuralTol});
  }
  if (mode == GroupMode::heisenberg) {
    rep.conditions.push_back({"one_dimensional_center", m == 1, m == 1 ? 0.0 : double(m - 1), 0.0});
  }
  if (mode == GroupMode::metivier && skew <= kStructuralTol) {
    rep.metivier = check_metivier(StepTwoGroup(n, m, u), opts);
  }
  return rep;
}

ValidationReport validate_group(const StepTwoGroup& group, GroupMode mode,
                                const MetivierOptions& opts) {
  return validate_group(group.structure(), group.n(), group.m(), mode, opts);
}

MetivierReport check_metivier(const StepTwoGroup& group, const MetivierOptions& opts) {
  if (opts.sample_count < 1) throw std::invalid_argument("check_metivier: sample_count must be >= 1");
  const int m = group.m();
  MetivierReport rep;
  rep.tolerance = opts.tolerance;
  rep.min_abs_det = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto direction = [&](int s) {
    RVec lam = RVec::Zero(m);
    if (s < 2 * m) {
      lam[s / 2] = (s % 2 == 0) ? 1.0 : -1.0;
      return lam;
    }
    double norm = 0.0;
    do {
      for (int k = 0; k < m; ++k) lam[k] = normal(rng);
      norm = lam.norm();
    } while (norm < 1e-12);
    return RVec(lam / norm);
  };

  for (int s = 0; s < opts.sample_count; ++s) {
    RVec lam = direction(s);
    const double det = std::abs(combine(group.structure(), lam).determinant());
    if (det < rep.min_abs_det) {
      rep.min_abs_det = det;
      rep.argmin_lambda = lam;
    }
  }
  rep.samples = opts.sample_count;

  if (htype_residuals(group.structure()).holds(kStructuralTol)) {
    // sum lambda_j U^(j) = |lambda| V with V orthogonal, so |det| = |lambda|^{2n}.
    rep.status = MetivierStatus::certified;
  } else {
    rep.status = rep.min_abs_det > opts.tolerance ? MetivierStatus::heuristic_pass
                                                  : MetivierStatus::heuristic_fail;
  }
  return rep;
}

GroupPoint group_law(const StepTwoGroup& group, const GroupPoint& p, const GroupPoint& q) {
  const Eigen::Index d = group.dim();
  const Eigen::Index m = group.m();
  if (p.x.size() != d || q.x.size() != d)
    throw DimensionError("group_law: x has wrong length", p.x.size() != d ? 0 : 1);
  if (p.t.size() != m || q.t.size() != m)
    throw DimensionError("group_law: t has wrong length", p.t.size() != m ? 0 : 1);
  GroupPoint out;
  out.x = p.x + q.x;
  out.t.resize(m);
  for (Eigen::Index j = 0; j < m; ++j)
    out.t[j] = p.t[j] + q.t[j] + 0.5 * p.x.dot(group.U(static_cast<int>(j)) * q.x);
  return out;
}

GroupPoint group_inverse(const GroupPoint& p) { return {-p.x, -p.t}; }

GroupPoint group_identity(const StepTwoGroup& group) {
  return {RVec::Zero(group.dim()), RVec::Zero(group.m())};
}

TwistTable twist_coefficients(const StepTwoGroup& group, const RVec& lambda) {
  if (lambda.size() != group.m())
    throw DimensionError("twist_coefficients: lambda must have length m", -1);
  if (lambda.norm() == 0.0) throw std::invalid_argument("twist_coefficients: lambda = 0");
  const int n = group.n();
  const RMat v = combine(group.structure(), lambda);
  TwistTable t;
  t.lambda = lambda;
  t.alpha.resize(n, n);
  t.beta.resize(n, n);
  for (int l = 0; l < n; ++l) {
    for (int j = 0; j < n; ++j) {
      t.alpha(l, j) = 0.5 * cplx(v(l, j), -v(l, n + j));
      t.beta(l, j) = 0.5 * cplx(v(n + l, j), -v(n + l, n + j));
    }
  }
  t.nu = -t.beta + I * t.alpha;
  t.eta = t.beta + I * t.alpha;
  return t;
}

StepTwoGroup heisenberg_group(int n) {
  RMat u = RMat::Zero(2 * n, 2 * n);
  u.topRightCorner(n, n) = -RMat::Identity(n, n);
  u.bottomLeftCorner(n, n) = RMat::Identity(n, n);
  return StepTwoGroup(n, 1, {u});
}

namespace {

using Quaternion = std::array<double, 4>;

Quaternion hamilton(const Quaternion& p, const Quaternion& q) {
  return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
          p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
          p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

}  // namespace

RMat quaternion_left_multiplication(int unit) {
  if (unit < 1 || unit > 3) throw std::invalid_argument("quaternion unit must be 1 (i), 2 (j) or 3 (k)");
  Quaternion e{0, 0, 0, 0};
  e[unit] = 1.0;
  RMat m(4, 4);
  for (int c = 0; c < 4; ++c) {
    Quaternion basis{0, 0, 0, 0};
    basis[c] = 1.0;
    const Quaternion img = hamilton(e, basis);
    for (int r = 0; r < 4; ++r) m(r, c) = img[r];
  }
  return m;
}

StepTwoGroup quaternionic_group() {
  return StepTwoGroup(2, 3,
                      {quaternion_left_multiplication(1), quaternion_left_multiplication(2),
                       quaternion_left_multiplication(3)});
}

}  // namespace tsmkit
