#include "unifinsler/subspaces.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "unifinsler/random.hpp"

namespace unifinsler {

namespace {
constexpr double kPi = std::numbers::pi;
}

Unitary PairAction::apply(std::size_t i, const Unitary& u) const {
  return trusted_unitary(left.at(i).mat() * u.mat() *
                         right.at(i).mat().adjoint());
}

ProjectionPoint ProjectionPoint::from_matrix(const ComplexMatrix& p,
                                             double tol) {
  require_square_finite(p, "ProjectionPoint");
  if (op_norm(p - p.adjoint()) > tol) {
    throw NotProjection("ProjectionPoint: matrix is not Hermitian");
  }
  if (op_norm(p * p - p) > tol) {
    throw NotProjection("ProjectionPoint: matrix is not idempotent");
  }
  const double tr = p.trace().real();
  const double rounded = std::round(tr);
  if (std::abs(tr - rounded) > 1e-6) {
    throw NotProjection("ProjectionPoint: trace is not near an integer rank");
  }
  ProjectionPoint out;
  out.p = (p + p.adjoint()) / 2.0;
  out.rank = static_cast<Eigen::Index>(rounded);
  return out;
}

ProjectionPoint ProjectionPoint::from_symmetry(const Unitary& u, double tol) {
  const Eigen::Index n = u.dim();
  return from_matrix((ComplexMatrix::Identity(n, n) - u.mat()) / 2.0, tol);
}

ProjectionPoint ProjectionPoint::coordinate(Eigen::Index n, Eigen::Index axis) {
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  p(axis, axis) = Complex(1.0, 0.0);
  ProjectionPoint out;
  out.p = std::move(p);
  out.rank = 1;
  return out;
}

Unitary ProjectionPoint::symmetry() const {
  const Eigen::Index n = p.rows();
  return Unitary(ComplexMatrix::Identity(n, n) - 2.0 * p);
}

SubspaceSpec SubspaceSpec::full(Eigen::Index n) {
  return SubspaceSpec(Kind::full, n, kPi);
}

SubspaceSpec SubspaceSpec::special_unitary(Eigen::Index n) {
  const double lp = std::min(2.0 * kPi / static_cast<double>(n), kPi);
  return SubspaceSpec(Kind::special_unitary, n, lp);
}

SubspaceSpec SubspaceSpec::orthogonal(Eigen::Index n,
                                      std::optional<ComplexMatrix> basis) {
  SubspaceSpec s(Kind::orthogonal, n, kPi);
  if (basis) {
    require_square_finite(*basis, "SubspaceSpec::orthogonal");
    if (basis->rows() != n) {
      throw DimensionMismatch("SubspaceSpec::orthogonal: basis dimension");
    }
    Unitary check(*basis);  // basis columns must be orthonormal
    s.j_basis_ = std::move(*basis);
  } else {
    s.j_basis_ = ComplexMatrix::Identity(n, n);
  }
  return s;
}

SubspaceSpec SubspaceSpec::grassmannian_rank(Eigen::Index n, Eigen::Index m) {
  if (m < 0 || m > n) throw ConfigError("grassmannian: rank out of range");
  SubspaceSpec s(Kind::grassmannian, n, kPi);
  s.grassmann_rank_ = m;
  s.grassmann_uses_rank_ = true;
  return s;
}

SubspaceSpec SubspaceSpec::grassmannian_trace(Eigen::Index n, double sval) {
  if (sval < 0.0 || sval > 1.0) {
    throw ConfigError("grassmannian: trace value must be in [0, 1]");
  }
  SubspaceSpec s(Kind::grassmannian, n, kPi);
  s.grassmann_uses_rank_ = false;
  s.grassmann_trace_value_ = sval;
  return s;
}

SubspaceSpec SubspaceSpec::subgroup(Eigen::Index n, MembershipOracle oracle,
                                    double length_parameter) {
  if (!(length_parameter > 0.0) || length_parameter > kPi) {
    throw ConfigError("subgroup: length parameter must lie in (0, pi]");
  }
  SubspaceSpec s(Kind::subgroup, n, length_parameter);
  s.oracle_ = std::move(oracle);
  return s;
}

SubspaceSpec SubspaceSpec::fixed_point_set(PairAction action) {
  if (action.left.size() != action.right.size() || action.left.empty()) {
    throw ConfigError("fixed_point_set: left/right lists must match");
  }
  const Eigen::Index n = action.left.front().dim();
  SubspaceSpec s(Kind::fixed_point_set, n, kPi);
  s.action_ = std::move(action);
  return s;
}

SubspaceSpec SubspaceSpec::ball_intersection(std::vector<BallSpec> balls) {
  if (balls.empty()) throw ConfigError("ball_intersection: no balls given");
  const Eigen::Index n = balls.front().center.dim();
  SubspaceSpec s(Kind::ball_intersection, n, kPi);
  s.balls_ = std::move(balls);
  return s;
}

SubspaceSpec SubspaceSpec::convex_hull(std::vector<Unitary> seeds,
                                       Unitary center, double radius) {
  if (seeds.empty()) throw ConfigError("convex_hull: no seeds given");
  const Eigen::Index n = seeds.front().dim();
  SubspaceSpec s(Kind::convex_hull, n, kPi);
  s.hull_seeds_ = std::move(seeds);
  s.balls_.push_back(BallSpec::dinf(std::move(center), radius));
  return s;
}

MembershipResult member(const SubspaceSpec& subspace, const Unitary& u,
                        double tol, const Tolerances& tols) {
  if (u.dim() != subspace.dim()) {
    throw DimensionMismatch("member: dimension mismatch");
  }
  double residual = 0.0;
  switch (subspace.kind()) {
    case SubspaceSpec::Kind::full:
      residual = 0.0;
      break;
    case SubspaceSpec::Kind::special_unitary:
      residual = std::abs(u.mat().determinant() - Complex(1.0, 0.0));
      break;
    case SubspaceSpec::Kind::orthogonal: {
      const ComplexMatrix& b = subspace.j_basis();
      const ComplexMatrix juj =
          b * (b.adjoint() * u.mat() * b).conjugate() * b.adjoint();
      residual = op_norm(u.mat() - juj);
      break;
    }
    case SubspaceSpec::Kind::grassmannian: {
      residual = op_norm(u.mat() - u.mat().adjoint());
      const double tr = u.mat().trace().real();
      const double n = static_cast<double>(subspace.dim());
      if (subspace.grassmann_uses_rank()) {
        // Tr(id - u) = 2m
        residual = std::max(
            residual, std::abs((n - tr) -
                               2.0 * static_cast<double>(subspace.grassmann_rank())));
      } else {
        // tau(u) = 1 - 2s
        residual = std::max(
            residual,
            std::abs(tr / n - (1.0 - 2.0 * subspace.grassmann_trace_value())));
      }
      break;
    }
    case SubspaceSpec::Kind::subgroup:
      residual = subspace.oracle()(u);
      break;
    case SubspaceSpec::Kind::fixed_point_set: {
      const PairAction& act = subspace.action();
      for (std::size_t i = 0; i < act.left.size(); ++i) {
        residual = std::max(residual,
                            op_norm(act.apply(i, u).mat() - u.mat()));
      }
      break;
    }
    case SubspaceSpec::Kind::ball_intersection: {
      for (const BallSpec& ball : subspace.balls()) {
        const double excess =
            ball.metric == BallSpec::Metric::d_inf
                ? d_inf(ball.center, u, tols) - ball.radius
                : d_p(ball.center, u, ball.p, ball.conv, tols) - ball.radius;
        residual = std::max(residual, std::max(0.0, excess));
      }
      break;
    }
    case SubspaceSpec::Kind::convex_hull:
      throw UnsupportedKind(
          "member: convex hulls have no computable membership test; use "
          "convex_hull_sample");
  }
  return MembershipResult{residual <= tol, residual};
}

ClosureReport geodesic_closure_check(const SubspaceSpec& subspace,
                                     const Unitary& u, const Unitary& v,
                                     int samples, bool force,
                                     double member_tol,
                                     const Tolerances& tols) {
  if (samples < 2) throw ConfigError("geodesic_closure_check: samples < 2");
  const MembershipResult mu = member(subspace, u, member_tol, tols);
  const MembershipResult mv = member(subspace, v, member_tol, tols);
  if (!mu.member || !mv.member) {
    throw NotInSubspace("geodesic_closure_check: endpoints are not members");
  }

  ClosureReport report;
  report.endpoint_distance = d_inf(u, v, tols);
  report.length_ok = report.endpoint_distance < subspace.length_parameter();
  report.forced = force;
  if (!report.length_ok && !force) {
    throw LengthParameterExceeded(
        "geodesic_closure_check: d_inf(u, v) = " +
        std::to_string(report.endpoint_distance) +
        " >= length parameter " + std::to_string(subspace.length_parameter()));
  }

  // The forced run uses the principal-branch log even at the antipodal
  // boundary, which is exactly how the counterexamples are produced.
  const ComplexMatrix rel = u.mat().adjoint() * v.mat();
  const LogResult lr = log_unitary(trusted_unitary(rel), tols);
  const Geodesic g(u, lr.tangent, tols);

  report.grid = uniform_grid(0.0, 1.0, samples);
  report.residuals.reserve(report.grid.size());
  for (const double t : report.grid) {
    const double res = member(subspace, g.eval(t), member_tol, tols).residual;
    report.residuals.push_back(res);
    report.max_residual = std::max(report.max_residual, res);
  }
  return report;
}

std::vector<Unitary> convex_hull_sample(const std::vector<Unitary>& seeds,
                                        const Unitary& w, double r, int depth,
                                        int count, std::uint64_t seed,
                                        const Tolerances& tols) {
  if (seeds.empty()) throw ConfigError("convex_hull_sample: empty seed set");
  if (!(r < kPi / 2.0)) {
    throw RadiusViolation("convex_hull_sample: requires r < pi/2");
  }
  for (const Unitary& a : seeds) {
    if (d_inf(w, a, tols) > r + 1e-9) {
      throw RadiusViolation(
          "convex_hull_sample: a seed lies outside B_inf[w, r]");
    }
  }
  if (depth < 1 || count < 1) {
    throw ConfigError("convex_hull_sample: depth and count must be positive");
  }

  Rng rng(seed);
  std::vector<Unitary> pool = seeds;
  std::vector<Unitary> out;
  out.reserve(count);
  const int per_round = (count + depth - 1) / depth;
  for (int round = 0; round < depth && static_cast<int>(out.size()) < count;
       ++round) {
    const int pool_size = static_cast<int>(pool.size());
    for (int i = 0; i < per_round && static_cast<int>(out.size()) < count;
         ++i) {
      const int a = rng.uniform_int(0, pool_size - 1);
      const int b = rng.uniform_int(0, pool_size - 1);
      const double t = rng.uniform(0.0, 1.0);
      if (a == b) {
        out.push_back(pool[a]);
        continue;
      }
      const Unitary point = geodesic_between(pool[a], pool[b], tols).eval(t);
      out.push_back(point);
      pool.push_back(point);
    }
  }
  return out;
}

}  // namespace unifinsler
