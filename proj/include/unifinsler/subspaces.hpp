#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "unifinsler/metric.hpp"

namespace unifinsler {

// Action data sufficient for membership tests of fixed-point sets:
// pi(i)(u) = left[i] * u * right[i]^{-1}.
struct PairAction {
  std::vector<Unitary> left;
  std::vector<Unitary> right;

  Unitary apply(std::size_t i, const Unitary& u) const;
};

// Projection p onto an m-dimensional subspace, encoded alongside its
// symmetry e_p = id - 2p; the Grassmannian machinery runs on the unitary
// side and recovers p = (id - u)/2.
struct ProjectionPoint {
  ComplexMatrix p;
  Eigen::Index rank = 0;

  static ProjectionPoint from_matrix(const ComplexMatrix& p, double tol = 1e-9);
  static ProjectionPoint from_symmetry(const Unitary& u, double tol = 1e-9);
  static ProjectionPoint coordinate(Eigen::Index n, Eigen::Index axis);

  Unitary symmetry() const;  // id - 2p
};

// caller-supplied membership test: returns a residual (0 = member).
using MembershipOracle = std::function<double(const Unitary&)>;

class SubspaceSpec {
 public:
  enum class Kind {
    full,
    special_unitary,
    orthogonal,
    grassmannian,
    subgroup,
    fixed_point_set,
    ball_intersection,
    convex_hull,
  };

  static SubspaceSpec full(Eigen::Index n);
  static SubspaceSpec special_unitary(Eigen::Index n);
  // J is entrywise conjugation in the orthonormal basis given by the columns
  // of `basis` (identity basis by default: real orthogonal matrices).
  static SubspaceSpec orthogonal(Eigen::Index n,
                                 std::optional<ComplexMatrix> basis = {});
  static SubspaceSpec grassmannian_rank(Eigen::Index n, Eigen::Index m);
  static SubspaceSpec grassmannian_trace(Eigen::Index n, double s);
  static SubspaceSpec subgroup(Eigen::Index n, MembershipOracle oracle,
                               double length_parameter);
  static SubspaceSpec fixed_point_set(PairAction action);
  static SubspaceSpec ball_intersection(std::vector<BallSpec> balls);
  static SubspaceSpec convex_hull(std::vector<Unitary> seeds, Unitary center,
                                  double radius);

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return n_; }
  double length_parameter() const { return length_parameter_; }

  const ComplexMatrix& j_basis() const { return j_basis_; }
  Eigen::Index grassmann_rank() const { return grassmann_rank_; }
  bool grassmann_uses_rank() const { return grassmann_uses_rank_; }
  double grassmann_trace_value() const { return grassmann_trace_value_; }
  const PairAction& action() const { return action_; }
  const std::vector<BallSpec>& balls() const { return balls_; }
  const MembershipOracle& oracle() const { return oracle_; }
  const std::vector<Unitary>& hull_seeds() const { return hull_seeds_; }

 private:
  SubspaceSpec(Kind kind, Eigen::Index n, double length_parameter)
      : kind_(kind), n_(n), length_parameter_(length_parameter) {}

  Kind kind_;
  Eigen::Index n_;
  double length_parameter_;

  ComplexMatrix j_basis_;
  Eigen::Index grassmann_rank_ = 0;
  bool grassmann_uses_rank_ = true;
  double grassmann_trace_value_ = 0.0;
  PairAction action_;
  std::vector<BallSpec> balls_;
  MembershipOracle oracle_;
  std::vector<Unitary> hull_seeds_;
};

struct MembershipResult {
  bool member = false;
  double residual = 0.0;  // max violation of the defining equations
};

MembershipResult member(const SubspaceSpec& subspace, const Unitary& u,
                        double tol = 1e-8,
                        const Tolerances& tols = Tolerances::global());

struct ClosureReport {
  double endpoint_distance = 0.0;
  bool length_ok = true;  // d_inf(u, v) < length parameter
  bool forced = false;
  std::vector<double> grid;
  std::vector<double> residuals;
  double max_residual = 0.0;
};

// Samples the geodesic between two members and reports the worst membership
// residual. With force=true the length-parameter precondition may be
// violated so counterexamples can be exhibited.
ClosureReport geodesic_closure_check(const SubspaceSpec& subspace,
                                     const Unitary& u, const Unitary& v,
                                     int samples = 33, bool force = false,
                                     double member_tol = 1e-8,
                                     const Tolerances& tols = Tolerances::global());

// Seeded sampler of the geodesic convex hull of A inside B_inf[w, r],
// r < pi/2. Draws (u, v, t) triples instead of expanding the recursion.
std::vector<Unitary> convex_hull_sample(const std::vector<Unitary>& seeds,
                                        const Unitary& w, double r, int depth,
                                        int count, std::uint64_t seed,
                                        const Tolerances& tols = Tolerances::global());

}  // namespace unifinsler
