#pragma once

#include <vector>

#include "unifinsler/linalg.hpp"

namespace unifinsler {

// Principal angles of spec(u^{-1} v), ascending. Eigenvalues within
// branch_tol of -1 contribute angle +pi.
RealVector relative_angles(const Unitary& u, const Unitary& v,
                           const Tolerances& tol = Tolerances::global());

// Geodesic distance induced by the operator norm: ||log(u^{-1}v)||_inf,
// values in [0, pi].
double d_inf(const Unitary& u, const Unitary& v,
             const Tolerances& tol = Tolerances::global());

// Geodesic distance induced by the Schatten p-norm: ||log(u^{-1}v)||_p.
double d_p(const Unitary& u, const Unitary& v, int p,
           TraceConvention conv = TraceConvention::standard,
           const Tolerances& tol = Tolerances::global());

inline double d_2(const Unitary& u, const Unitary& v,
                  TraceConvention conv = TraceConvention::standard) {
  return d_p(u, v, 2, conv);
}

// The curve t -> base * exp(t * direction). The spectral decomposition of
// the direction is cached so that evaluation costs one matrix product.
class Geodesic {
 public:
  Geodesic(Unitary base, const SkewHermitian& direction,
           const Tolerances& tol = Tolerances::global());

  const Unitary& base() const { return base_; }
  const SkewHermitian& direction() const { return direction_; }

  Unitary eval(double t) const;

  double speed_inf() const;                   // ||direction||_inf
  double speed_2(TraceConvention conv) const; // ||direction||_2

 private:
  Unitary base_;
  SkewHermitian direction_;
  ComplexMatrix vecs_;
  RealVector angles_;  // direction = V diag(i * angles) V*
};

// Unique short geodesic from u to v (principal logarithm). Throws
// AntipodalSpectrum when some eigenvalue of u^{-1}v sits within branch_tol
// of -1, where the geodesic is not unique.
Geodesic geodesic_between(const Unitary& u, const Unitary& v,
                          const Tolerances& tol = Tolerances::global());

struct BallSpec {
  enum class Metric { d_inf, d_p };

  Unitary center;
  double radius = 0.0;
  Metric metric = Metric::d_inf;
  int p = 2;
  TraceConvention conv = TraceConvention::standard;

  static BallSpec dinf(Unitary center, double radius);
  static BallSpec dp(Unitary center, double radius, int p,
                     TraceConvention conv);
};

struct BallMembership {
  bool inside = false;
  // For d_inf balls the signed margin of the Lemma-style eigenvalue test:
  // lambda_min(w^{-1}u + (w^{-1}u)*) - 2 cos(r). For d_p balls: r - d_p.
  double margin = 0.0;
};

BallMembership in_ball(const Unitary& u, const BallSpec& ball,
                       const Tolerances& tol = Tolerances::global());

struct SpectralFlowSample {
  double t = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  bool branch_ok = true;  // spectrum of u e^{tx} stays away from -1
};

// Extremes of spec(-i log(u e^{tx})) over the given grid. Branch failures
// are reported per sample instead of aborting the scan.
std::vector<SpectralFlowSample> spectral_flow(
    const Unitary& u, const SkewHermitian& x, const std::vector<double>& grid,
    const Tolerances& tol = Tolerances::global());

std::vector<double> uniform_grid(double lo, double hi, int points = 201);

}  // namespace unifinsler
