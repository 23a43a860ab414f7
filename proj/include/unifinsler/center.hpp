#pragma once

#include <cstdint>
#include <vector>

#include "unifinsler/subspaces.hpp"

namespace unifinsler {

struct CenterOptions {
  enum class StepRule { armijo, fixed };

  int max_iters = 100000;
  double stop_tol = 1e-9;  // d_2 length of the accepted step
  StepRule step_rule = StepRule::armijo;
  double fixed_eta = 0.1;  // used by StepRule::fixed
  int max_backtracks = 40;
  double feasibility_margin = -1e-9;  // in_ball margins must stay above this
  double member_tol = 1e-8;
  bool record_trace = false;
};

struct IterationRecord {
  int iter = 0;
  double f_value = 0.0;
  double step = 0.0;
};

// Minimax center problem: minimize f_A(u) = max_a d_2(u, a)^2 over
// C = M intersect (intersection of B_inf[a, r]). Requires a feasible start
// and radius_M(A) < r < min(pi, length parameter of M)/2.
struct CenterProblem {
  std::vector<Unitary> sites;
  SubspaceSpec subspace;
  double radius = 0.0;
  TraceConvention conv = TraceConvention::standard;
  Unitary start;
  CenterOptions options;
};

struct CenterCertificates {
  std::vector<double> ball_margins;  // final Lemma-test margin per site ball
  double member_residual = 0.0;
  double f_lower = 0.0;      // (max pairwise d_2)^2 / 4, triangle inequality
  double lambda = 0.0;       // sin(2r)/(2r)
  double gap_bound_d2 = 0.0; // sqrt(max(0, value - f_lower)/lambda)
};

struct CenterResult {
  Unitary center;
  double value = 0.0;  // f_A(center)
  int iterations = 0;
  double max_move_last = 0.0;
  bool stalled = false;  // max_iters hit with the last move above stop_tol
  CenterCertificates certificates;
  std::vector<IterationRecord> trace;
};

// max_a d_2(u, a)^2 over the site list.
double f_A(const std::vector<Unitary>& sites, const Unitary& u,
           TraceConvention conv = TraceConvention::standard);

struct FarthestSite {
  double value = 0.0;
  std::size_t index = 0;
};
FarthestSite farthest_site(const std::vector<Unitary>& sites, const Unitary& u,
                           TraceConvention conv = TraceConvention::standard);

// max_a d_inf(a, c) for a candidate center c in M; upper-bounds the
// circumradius of A relative to M.
double circumradius_upper(const std::vector<Unitary>& sites,
                          const SubspaceSpec& subspace, const Unitary& c,
                          const Tolerances& tols = Tolerances::global());

// Heuristic witness search for the circumradius: a mean-of-logs start plus
// farthest-point pulls, constrained to M. Best-effort; the returned bound
// is always a valid upper bound at the returned witness.
struct WitnessResult {
  Unitary witness;
  double bound = 0.0;
};
WitnessResult circumradius_witness(const std::vector<Unitary>& sites,
                                   const SubspaceSpec& subspace,
                                   int pull_iters = 200,
                                   const Tolerances& tols = Tolerances::global());

// Farthest-site geodesic pull with backtracking, feasibility-preserving by
// geodesic convexity of C. Returns the flagged best iterate on stall.
CenterResult solve_center(const CenterProblem& problem,
                          const Tolerances& tols = Tolerances::global());

struct UniquenessReport {
  std::vector<CenterResult> results;
  double max_pairwise_d2 = 0.0;
  double gap_bound = 0.0;  // 2 * max gap_bound_d2 over the runs
};

// Re-solves from perturbed feasible starts; the spread of the returned
// centers must stay inside the strong-convexity gap bound.
UniquenessReport verify_uniqueness(const CenterProblem& problem, int restarts,
                                   std::uint64_t seed,
                                   const Tolerances& tols = Tolerances::global());

}  // namespace unifinsler
