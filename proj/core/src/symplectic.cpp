#include "tsmkit/symplectic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tsmkit {

RMat build_V(const StepTwoGroup& group, const RVec& lambda) {
  if (lambda.size() != group.m()) throw DimensionError("build_V: lambda must have length m", -1);
  if (lambda.norm() == 0.0) throw std::invalid_argument("build_V: lambda = 0");
  RMat v = RMat::Zero(group.dim(), group.dim());
  for (int k = 0; k < group.m(); ++k) v += lambda[k] * group.U(k);
  return v;
}

RMat canonical_block(const RVec& mu) {
  const Eigen::Index n = mu.size();
  RMat u = RMat::Zero(2 * n, 2 * n);
  u.topRightCorner(n, n) = -mu.asDiagonal().toDenseMatrix();
  u.bottomLeftCorner(n, n) = mu.asDiagonal().toDenseMatrix();
  return u;
}

namespace {

struct Pair {
  double mu;
  RVec v;
  RVec u;
};

// Flip (v, u) together so that the first entry of v with |.| > 1e-12 is positive.
void fix_sign(Pair& p) {
  for (Eigen::Index i = 0; i < p.v.size(); ++i) {
    if (std::abs(p.v[i]) > 1e-12) {
      if (p.v[i] < 0) {
        p.v = -p.v;
        p.u = -p.u;
      }
      return;
    }
  }
}

}  // namespace

ReducedFrame reduce(const RMat& V) {
  if (V.rows() != V.cols() || V.rows() % 2 != 0 || V.rows() == 0)
    throw DimensionError("reduce: V must be square of even order", -1);
  const Eigen::Index d = V.rows();
  const Eigen::Index n = d / 2;

  const double skew = (V + V.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, V.cwiseAbs().maxCoeff());
  if (skew > kSpectralTol * scale)
    throw std::invalid_argument("reduce: V is not skew-symmetric (residual " +
                                std::to_string(skew) + ")");

  Eigen::JacobiSVD<RMat> svd(V);
  const double smin = svd.singularValues()(d - 1);
  if (smin <= kSpectralTol) {
    std::ostringstream os;
    os << "degenerate symplectic form (min singular value " << smin << ")";
    throw DegenerateFormError(os.str());
  }

  // Real Schur vectors: each consecutive pair spans a V-invariant plane.
  Eigen::RealSchur<RMat> schur(V);
  const RMat& Q = schur.matrixU();

  std::vector<Pair> pairs;
  pairs.reserve(n);
  RMat basis(d, 0);
  for (Eigen::Index b = 0; b < n; ++b) {
    // Start from whichever Schur vector of the plane survives projection best.
    RVec best;
    double best_norm = -1.0;
    for (Eigen::Index c : {2 * b, 2 * b + 1}) {
      RVec cand = Q.col(c);
      if (basis.cols() > 0) cand -= basis * (basis.transpose() * cand);
      if (basis.cols() > 0) cand -= basis * (basis.transpose() * cand);
      const double nrm = cand.norm();
      if (nrm > best_norm) {
        best_norm = nrm;
        best = cand;
      }
    }
    if (best_norm < 1e-8) throw NumericError("reduce: lost invariant plane during orthogonalization", best_norm);
    RVec v = best / best_norm;
    RVec w = V * v;
    if (basis.cols() > 0) w -= basis * (basis.transpose() * w);
    const double mu = w.norm();
    RVec u = w / mu;
    pairs.push_back({mu, v, u});
    basis.conservativeResize(d, basis.cols() + 2);
    basis.col(basis.cols() - 2) = v;
    basis.col(basis.cols() - 1) = u;
  }

  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.mu > b.mu; });
  for (auto& p : pairs) fix_sign(p);

  ReducedFrame f;
  f.V = V;
  f.mu.resize(n);
  f.A.resize(d, d);
  for (Eigen::Index j = 0; j < n; ++j) {
    f.mu[j] = pairs[j].mu;
    f.A.col(j) = pairs[j].v;
    f.A.col(n + j) = pairs[j].u;
  }
  f.Ucanon = canonical_block(f.mu);
  f.orthogonality_residual = (f.A.transpose() * f.A - RMat::Identity(d, d)).cwiseAbs().maxCoeff();
  f.conjugation_residual = (V * f.A - f.A * f.Ucanon).cwiseAbs().maxCoeff();
  const double tol = kSpectralTol * scale;
  if (f.orthogonality_residual > kSpectralTol || f.conjugation_residual > tol) {
    throw NumericError("reduce: residual above tolerance after re-orthogonalization",
                       std::max(f.orthogonality_residual, f.conjugation_residual));
  }
  return f;
}

ReducedFrame reduce(const StepTwoGroup& group, const RVec& lambda) {
  ReducedFrame f = reduce(build_V(group, lambda));
  f.lambda = lambda;
  return f;
}

CVec transport_point(const ReducedFrame& frame, const CVec& z, Transport direction) {
  if (z.size() != frame.n()) throw DimensionError("transport_point: z has wrong length", -1);
  const RVec x = realify(z);
  return direction == Transport::to_reduced ? complexify(frame.A.transpose() * x)
                                            : complexify(frame.A * x);
}

PhaseIdentity phase_identity_check(const StepTwoGroup& group, const ReducedFrame& frame,
                                   const CVec& z, const CVec& w) {
  const RVec x = realify(z);
  const RVec xi = realify(w);
  PhaseIdentity out;
  // Re(z . conj(U w)) is the real inner product <x, U xi>.
  for (int k = 0; k < group.m(); ++k) out.lhs += frame.lambda[k] * x.dot(group.U(k) * xi);
  const CVec zl = transport_point(frame, z);
  const CVec wl = transport_point(frame, w);
  for (int j = 0; j < frame.n(); ++j) out.rhs += frame.mu[j] * (zl[j] * std::conj(wl[j])).imag();
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace tsmkit
