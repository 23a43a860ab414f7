#pragma once

namespace unifinsler {

// Central tolerance configuration. All residual checks and branch decisions
// in the library read from one of these records so that property tests can
// state their tolerances explicitly.
//
// The environment variable UNIFINSLER_TOL_SCALE (a positive float) scales
// every field of the global record once at startup. It exists for debugging
// only and is non-normative.
struct Tolerances {
  double unit_tol = 1e-10;    // ||u*u - id||_inf for unitary points
  double skew_tol = 1e-12;    // ||x + x*||_inf / ||x||_inf for tangents
  double eig_tol = 1e-10;     // spectral residual per dimension
  double normal_tol = 1e-8;   // ||m m* - m* m||_inf relative to ||m||_inf^2
  double branch_tol = 1e-8;   // distance of an eigenvalue to -1 that marks
                              // the principal-branch boundary
  double fix_tol = 1e-6;      // fixed-point residual for group actions

  Tolerances scaled(double s) const;

  // Process-wide defaults (already scaled by UNIFINSLER_TOL_SCALE).
  static const Tolerances& global();
};

}  // namespace unifinsler
