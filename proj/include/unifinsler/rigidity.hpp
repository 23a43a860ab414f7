#pragma once

#include <string>
#include <vector>

#include "unifinsler/center.hpp"

namespace unifinsler {

// Finite group acting on unitaries by u -> phi(h) u rho(h)^{-1}. The group
// is presented by a full multiplication table (small groups only), which
// keeps orbits finite and lets the homomorphism property be checked
// exactly on every pair.
struct FiniteGroupAction {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> table;  // table[i][j] = index of g_i * g_j
  std::vector<Unitary> left;            // phi
  std::vector<Unitary> right;           // rho

  std::size_t size() const { return labels.size(); }
  int identity_index() const;
  Unitary apply(std::size_t h, const Unitary& u) const;

  // Throws NotHomomorphism unless phi and rho respect the table within tol.
  void validate(double tol = 1e-9) const;

  static FiniteGroupAction conjugation(std::vector<std::string> labels,
                                       std::vector<std::vector<int>> table,
                                       std::vector<Unitary> reps);
  static FiniteGroupAction two_sided(std::vector<std::string> labels,
                                     std::vector<std::vector<int>> table,
                                     std::vector<Unitary> phi,
                                     std::vector<Unitary> rho);
};

struct OrbitReport {
  std::vector<Unitary> points;  // deduplicated orbit
  double radius_bound = 0.0;    // circumradius upper bound at the witness
  Unitary witness;
};

OrbitReport orbit(const FiniteGroupAction& action, const Unitary& v,
                  double dedup_tol = 1e-8,
                  const Tolerances& tols = Tolerances::global());

// Fixed point of the action via the circumcenter of the orbit: uniqueness
// plus invariance of f_A force every group element to fix the center.
// Requires the measured orbit radius bound < r < min(pi, length of M)/2.
Unitary find_fixed_point(const FiniteGroupAction& action, const Unitary& v,
                         const SubspaceSpec& subspace, double r,
                         const CenterOptions& options = {},
                         double fix_tol = 1e-6,
                         const Tolerances& tols = Tolerances::global());

// max_h d_inf(pi(h)(g), g).
double fixed_point_residual(const FiniteGroupAction& action, const Unitary& g,
                            const Tolerances& tols = Tolerances::global());

// Unitary equivalence of two representations into the geodesic subgroup G:
// returns g in G with phi(h) = g rho(h) g^{-1} for all h, provided the
// orbit {phi(h) u0 rho(h)^{-1}} has a measured circumradius below the
// fixed-point threshold of G.
Unitary find_intertwiner(const std::vector<std::string>& labels,
                         const std::vector<std::vector<int>>& table,
                         const std::vector<Unitary>& phi,
                         const std::vector<Unitary>& rho,
                         const SubspaceSpec& subgroup, const Unitary& u0,
                         const CenterOptions& options = {},
                         double fix_tol = 1e-6,
                         const Tolerances& tols = Tolerances::global());

double intertwiner_residual(const std::vector<Unitary>& phi,
                            const std::vector<Unitary>& rho, const Unitary& g);

// Rank-m projection commuting with every generator, found as the
// circumcenter of the conjugation orbit of e_{p0} inside the Grassmannian.
ProjectionPoint find_invariant_projection(
    const std::vector<Unitary>& generators, Eigen::Index m,
    const ProjectionPoint& p0, const CenterOptions& options = {},
    double fix_tol = 1e-6, const Tolerances& tols = Tolerances::global());

// Multiplication-table closure of a generator list (identity included),
// capped to keep the enumeration honest for small groups.
std::vector<Unitary> generate_group(const std::vector<Unitary>& generators,
                                    std::size_t max_elements = 512,
                                    double dedup_tol = 1e-8);

}  // namespace unifinsler
