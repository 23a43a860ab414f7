#include "unifinsler/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace unifinsler {

namespace {

constexpr double kPi = std::numbers::pi;

bool near(const Unitary& a, const Unitary& b, double tol) {
  return op_norm(a.mat() - b.mat()) <= tol;
}

// Gradient-style polish: pull the candidate toward the mean log of its own
// orbit until the action fixes it to machine precision. Keeps feasibility
// by explicit re-checks, reverting on any violation.
Unitary action_average_polish(const FiniteGroupAction& action, Unitary g,
                              const SubspaceSpec& subspace,
                              const std::vector<Unitary>& sites, double radius,
                              const CenterOptions& opt,
                              const Tolerances& tols) {
  double residual = fixed_point_residual(action, g, tols);
  for (int iter = 0; iter < 60 && residual > 1e-14; ++iter) {
    const Eigen::Index n = g.dim();
    ComplexMatrix mean = ComplexMatrix::Zero(n, n);
    for (std::size_t h = 0; h < action.size(); ++h) {
      const Unitary moved = action.apply(h, g);
      mean += log_unitary(trusted_unitary(g.mat().adjoint() * moved.mat()),
                          tols)
                  .tangent.mat();
    }
    mean /= static_cast<double>(action.size());
    const Unitary cand = g * exp_skew(SkewHermitian(mean, tols), tols);
    if (member(subspace, cand, opt.member_tol, tols).residual >
        opt.member_tol) {
      break;
    }
    bool ok = true;
    for (const Unitary& a : sites) {
      if (in_ball(cand, BallSpec::dinf(a, radius), tols).margin <
          opt.feasibility_margin) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
    const double cand_residual = fixed_point_residual(action, cand, tols);
    if (cand_residual >= residual) break;
    g = cand;
    residual = cand_residual;
  }
  return g;
}

Unitary fixed_point_via_center(const FiniteGroupAction& action,
                               const std::vector<Unitary>& sites,
                               const SubspaceSpec& subspace, double r,
                               const Unitary& start,
                               const CenterOptions& options, double fix_tol,
                               const Tolerances& tols) {
  CenterProblem problem{sites, subspace, r, TraceConvention::standard, start,
                        options};
  const CenterResult res = solve_center(problem, tols);
  const Unitary g = action_average_polish(action, res.center, subspace, sites,
                                          r, options, tols);
  const double residual = fixed_point_residual(action, g, tols);
  if (residual > fix_tol) {
    throw NoConvergence("fixed point residual " + std::to_string(residual) +
                        " exceeds fix_tol " + std::to_string(fix_tol));
  }
  return g;
}

}  // namespace

int FiniteGroupAction::identity_index() const {
  const std::size_t n = size();
  for (std::size_t e = 0; e < n; ++e) {
    bool ok = true;
    for (std::size_t h = 0; h < n && ok; ++h) {
      ok = table[e][h] == static_cast<int>(h) &&
           table[h][e] == static_cast<int>(h);
    }
    if (ok) return static_cast<int>(e);
  }
  return -1;
}

Unitary FiniteGroupAction::apply(std::size_t h, const Unitary& u) const {
  return trusted_unitary(left.at(h).mat() * u.mat() *
                         right.at(h).mat().adjoint());
}

void FiniteGroupAction::validate(double tol) const {
  const std::size_t n = size();
  if (n == 0 || table.size() != n || left.size() != n || right.size() != n) {
    throw NotHomomorphism("FiniteGroupAction: inconsistent table sizes");
  }
  for (const auto& row : table) {
    if (row.size() != n) {
      throw NotHomomorphism("FiniteGroupAction: ragged multiplication table");
    }
    for (int idx : row) {
      if (idx < 0 || idx >= static_cast<int>(n)) {
        throw NotHomomorphism("FiniteGroupAction: table index out of range");
      }
    }
  }
  if (identity_index() < 0) {
    throw NotHomomorphism("FiniteGroupAction: table has no identity element");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = static_cast<std::size_t>(table[i][j]);
      if (op_norm(left[i].mat() * left[j].mat() - left[k].mat()) > tol) {
        throw NotHomomorphism("FiniteGroupAction: phi is not a homomorphism");
      }
      if (op_norm(right[i].mat() * right[j].mat() - right[k].mat()) > tol) {
        throw NotHomomorphism("FiniteGroupAction: rho is not a homomorphism");
      }
    }
  }
}

FiniteGroupAction FiniteGroupAction::conjugation(
    std::vector<std::string> labels, std::vector<std::vector<int>> table,
    std::vector<Unitary> reps) {
  FiniteGroupAction a;
  a.labels = std::move(labels);
  a.table = std::move(table);
  a.left = reps;
  a.right = std::move(reps);
  return a;
}

FiniteGroupAction FiniteGroupAction::two_sided(
    std::vector<std::string> labels, std::vector<std::vector<int>> table,
    std::vector<Unitary> phi, std::vector<Unitary> rho) {
  FiniteGroupAction a;
  a.labels = std::move(labels);
  a.table = std::move(table);
  a.left = std::move(phi);
  a.right = std::move(rho);
  return a;
}

OrbitReport orbit(const FiniteGroupAction& action, const Unitary& v,
                  double dedup_tol, const Tolerances& tols) {
  action.validate();
  OrbitReport report;
  report.witness = v;
  for (std::size_t h = 0; h < action.size(); ++h) {
    const Unitary point = action.apply(h, v);
    bool fresh = true;
    for (const Unitary& existing : report.points) {
      if (near(existing, point, dedup_tol)) {
        fresh = false;
        break;
      }
    }
    if (fresh) report.points.push_back(point);
  }
  const WitnessResult wit =
      circumradius_witness(report.points, SubspaceSpec::full(v.dim()), 200,
                           tols);
  report.radius_bound = wit.bound;
  report.witness = wit.witness;
  return report;
}

double fixed_point_residual(const FiniteGroupAction& action, const Unitary& g,
                            const Tolerances& tols) {
  double residual = 0.0;
  for (std::size_t h = 0; h < action.size(); ++h) {
    residual = std::max(residual, d_inf(action.apply(h, g), g, tols));
  }
  return residual;
}

Unitary find_fixed_point(const FiniteGroupAction& action, const Unitary& v,
                         const SubspaceSpec& subspace, double r,
                         const CenterOptions& options, double fix_tol,
                         const Tolerances& tols) {
  action.validate();
  OrbitReport rep = orbit(action, v, 1e-8, tols);
  const WitnessResult wit =
      circumradius_witness(rep.points, subspace, 200, tols);
  const double cap = std::min(kPi, subspace.length_parameter()) / 2.0;
  if (!(wit.bound < r) || !(r < cap)) {
    std::ostringstream msg;
    msg << "find_fixed_point: need orbit radius bound < r < " << cap
        << "; measured bound " << wit.bound << ", r = " << r;
    throw RadiusTooLarge(msg.str());
  }
  return fixed_point_via_center(action, rep.points, subspace, r, wit.witness,
                                options, fix_tol, tols);
}

Unitary find_intertwiner(const std::vector<std::string>& labels,
                         const std::vector<std::vector<int>>& table,
                         const std::vector<Unitary>& phi,
                         const std::vector<Unitary>& rho,
                         const SubspaceSpec& subgroup, const Unitary& u0,
                         const CenterOptions& options, double fix_tol,
                         const Tolerances& tols) {
  const FiniteGroupAction action =
      FiniteGroupAction::two_sided(labels, table, phi, rho);
  action.validate();
  if (member(subgroup, u0, options.member_tol, tols).residual >
      options.member_tol) {
    throw NotInSubspace("find_intertwiner: u0 is not in G");
  }
  OrbitReport rep = orbit(action, u0, 1e-8, tols);
  for (const Unitary& site : rep.points) {
    if (member(subgroup, site, options.member_tol, tols).residual >
        options.member_tol) {
      throw NotInSubspace("find_intertwiner: orbit leaves G");
    }
  }
  const WitnessResult wit = circumradius_witness(rep.points, subgroup, 200,
                                                 tols);
  const double cap = std::min(kPi, subgroup.length_parameter()) / 2.0;
  if (!(wit.bound < cap - 1e-9)) {
    std::ostringstream msg;
    msg << "find_intertwiner: measured orbit radius bound " << wit.bound
        << " is not below the fixed-point threshold " << cap;
    throw RadiusTooLarge(msg.str());
  }
  const double r = (wit.bound + cap) / 2.0;
  return fixed_point_via_center(action, rep.points, subgroup, r, wit.witness,
                                options, fix_tol, tols);
}

double intertwiner_residual(const std::vector<Unitary>& phi,
                            const std::vector<Unitary>& rho,
                            const Unitary& g) {
  double residual = 0.0;
  for (std::size_t h = 0; h < phi.size(); ++h) {
    residual = std::max(
        residual, op_norm(phi[h].mat() -
                          g.mat() * rho[h].mat() * g.mat().adjoint()));
  }
  return residual;
}

std::vector<Unitary> generate_group(const std::vector<Unitary>& generators,
                                    std::size_t max_elements,
                                    double dedup_tol) {
  if (generators.empty()) throw ConfigError("generate_group: no generators");
  const Eigen::Index n = generators.front().dim();
  std::vector<Unitary> elements;
  elements.push_back(Unitary::identity(n));
  std::size_t frontier = 0;
  while (frontier < elements.size()) {
    const Unitary current = elements[frontier++];
    for (const Unitary& gen : generators) {
      const Unitary next = current * gen;
      bool fresh = true;
      for (const Unitary& e : elements) {
        if (near(e, next, dedup_tol)) {
          fresh = false;
          break;
        }
      }
      if (fresh) {
        if (elements.size() >= max_elements) {
          throw ConfigError(
              "generate_group: closure exceeds the small-group cap");
        }
        elements.push_back(next);
      }
    }
  }
  return elements;
}

ProjectionPoint find_invariant_projection(
    const std::vector<Unitary>& generators, Eigen::Index m,
    const ProjectionPoint& p0, const CenterOptions& options, double fix_tol,
    const Tolerances& tols) {
  if (generators.empty()) {
    throw ConfigError("find_invariant_projection: no generators");
  }
  const Eigen::Index n = generators.front().dim();
  if (p0.rank != m) {
    throw NotProjection("find_invariant_projection: p0 does not have rank m");
  }

  const std::vector<Unitary> group = generate_group(generators);
  std::vector<std::string> labels(group.size());
  std::vector<std::vector<int>> table(group.size(),
                                      std::vector<int>(group.size(), -1));
  for (std::size_t i = 0; i < group.size(); ++i) {
    labels[i] = "g" + std::to_string(i);
    for (std::size_t j = 0; j < group.size(); ++j) {
      const Unitary prod = group[i] * group[j];
      for (std::size_t k = 0; k < group.size(); ++k) {
        if (near(prod, group[k], 1e-7)) {
          table[i][j] = static_cast<int>(k);
          break;
        }
      }
      if (table[i][j] < 0) {
        throw ConfigError(
            "find_invariant_projection: generated set is not closed");
      }
    }
  }
  const FiniteGroupAction action =
      FiniteGroupAction::conjugation(labels, table, group);

  const SubspaceSpec grassmannian = SubspaceSpec::grassmannian_rank(n, m);
  const Unitary e0 = p0.symmetry();
  OrbitReport rep = orbit(action, e0, 1e-8, tols);
  const WitnessResult wit =
      circumradius_witness(rep.points, grassmannian, 200, tols);
  const double cap = kPi / 2.0;
  if (!(wit.bound < cap - 1e-9)) {
    std::ostringstream msg;
    msg << "find_invariant_projection: measured orbit radius bound "
        << wit.bound << " is not below pi/2";
    throw RadiusTooLarge(msg.str());
  }
  const double r = (wit.bound + cap) / 2.0;
  const Unitary center = fixed_point_via_center(
      action, rep.points, grassmannian, r, wit.witness, options, fix_tol,
      tols);

  if (op_norm(center.mat() - center.mat().adjoint()) > 1e-6) {
    throw NotProjection(
        "find_invariant_projection: center escaped the symmetry subspace");
  }

  // Snap (id - center)/2 to an exact projection by rounding its spectrum.
  const ComplexMatrix q_raw =
      (ComplexMatrix::Identity(n, n) - center.mat()) / 2.0;
  const ComplexMatrix q_herm = (q_raw + q_raw.adjoint()) / 2.0;
  const SpectralDecomposition s =
      spectral_normal(q_herm, tols, NormalityCheck::assume);
  ComplexMatrix scaled = s.eigenvectors;
  Eigen::Index rank = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lam = s.eigenvalues[j].real();
    const double rounded = std::round(lam);
    if (std::abs(lam - rounded) > 0.2 || rounded < 0.0 || rounded > 1.0) {
      throw NotProjection(
          "find_invariant_projection: center spectrum is not near {1, -1}");
    }
    rank += static_cast<Eigen::Index>(rounded);
    scaled.col(j) *= Complex(rounded, 0.0);
  }
  if (rank != m) {
    throw NotProjection("find_invariant_projection: recovered rank mismatch");
  }
  const ComplexMatrix q = scaled * s.eigenvectors.adjoint();

  double comm = 0.0;
  for (const Unitary& h : generators) {
    comm = std::max(comm, op_norm(h.mat() * q - q * h.mat()));
  }
  if (comm > fix_tol) {
    throw NoConvergence("find_invariant_projection: commutator residual " +
                        std::to_string(comm) + " exceeds fix_tol");
  }
  return ProjectionPoint::from_matrix(q, 1e-9);
}

}  // namespace unifinsler
