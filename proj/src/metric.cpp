#include "unifinsler/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace unifinsler {

namespace {
constexpr double kPi = std::numbers::pi;
}

RealVector relative_angles(const Unitary& u, const Unitary& v,
                           const Tolerances& tol) {
  if (u.dim() != v.dim()) {
    throw DimensionMismatch("relative_angles: dimension mismatch");
  }
  const ComplexMatrix w = u.mat().adjoint() * v.mat();
  const SpectralDecomposition s =
      spectral_normal(w, tol, NormalityCheck::assume);
  RealVector angles(u.dim());
  for (Eigen::Index i = 0; i < u.dim(); ++i) {
    const Complex lambda = s.eigenvalues[i];
    double theta = std::atan2(lambda.imag(), lambda.real());
    if (std::abs(lambda + Complex(1.0, 0.0)) <= tol.branch_tol) theta = kPi;
    angles[i] = theta;
  }
  std::sort(angles.data(), angles.data() + angles.size());
  return angles;
}

double d_inf(const Unitary& u, const Unitary& v, const Tolerances& tol) {
  const RealVector angles = relative_angles(u, v, tol);
  double m = 0.0;
  for (Eigen::Index i = 0; i < angles.size(); ++i) {
    m = std::max(m, std::abs(angles[i]));
  }
  return m;
}

double d_p(const Unitary& u, const Unitary& v, int p, TraceConvention conv,
           const Tolerances& tol) {
  if (p < 2 || p % 2 != 0) {
    throw InvalidP("d_p: p must be even and >= 2, got " + std::to_string(p));
  }
  const RealVector angles = relative_angles(u, v, tol);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < angles.size(); ++i) {
    sum += std::pow(std::abs(angles[i]), p);
  }
  if (conv == TraceConvention::normalized) {
    sum /= static_cast<double>(angles.size());
  }
  return std::pow(sum, 1.0 / static_cast<double>(p));
}

Geodesic::Geodesic(Unitary base, const SkewHermitian& direction,
                   const Tolerances& tol)
    : base_(std::move(base)), direction_(direction) {
  if (base_.dim() != direction_.dim()) {
    throw DimensionMismatch("Geodesic: base/direction dimension mismatch");
  }
  const SpectralDecomposition s =
      spectral_normal(direction_.mat(), tol, NormalityCheck::assume);
  vecs_ = s.eigenvectors;
  angles_.resize(direction_.dim());
  for (Eigen::Index i = 0; i < direction_.dim(); ++i) {
    angles_[i] = s.eigenvalues[i].imag();
  }
  if (speed_inf() > kPi + tol.branch_tol) {
    throw InvalidMatrix("Geodesic: ||direction||_inf exceeds pi");
  }
}

Unitary Geodesic::eval(double t) const {
  const Eigen::Index n = base_.dim();
  ComplexMatrix scaled = vecs_;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double theta = t * angles_[j];
    scaled.col(j) *= Complex(std::cos(theta), std::sin(theta));
  }
  return trusted_unitary(base_.mat() * (scaled * vecs_.adjoint()));
}

double Geodesic::speed_inf() const {
  double m = 0.0;
  for (Eigen::Index i = 0; i < angles_.size(); ++i) {
    m = std::max(m, std::abs(angles_[i]));
  }
  return m;
}

double Geodesic::speed_2(TraceConvention conv) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < angles_.size(); ++i) {
    sum += angles_[i] * angles_[i];
  }
  if (conv == TraceConvention::normalized) {
    sum /= static_cast<double>(angles_.size());
  }
  return std::sqrt(sum);
}

Geodesic geodesic_between(const Unitary& u, const Unitary& v,
                          const Tolerances& tol) {
  if (u.dim() != v.dim()) {
    throw DimensionMismatch("geodesic_between: dimension mismatch");
  }
  const ComplexMatrix w = u.mat().adjoint() * v.mat();
  const SpectralDecomposition s =
      spectral_normal(w, tol, NormalityCheck::assume);
  for (Eigen::Index i = 0; i < u.dim(); ++i) {
    if (std::abs(s.eigenvalues[i] + Complex(1.0, 0.0)) <= tol.branch_tol) {
      throw AntipodalSpectrum(
          "geodesic_between: an eigenvalue of u^{-1}v lies at -1; the "
          "geodesic is not unique");
    }
  }
  ComplexMatrix scaled = s.eigenvectors;
  for (Eigen::Index j = 0; j < u.dim(); ++j) {
    const Complex lambda = s.eigenvalues[j];
    scaled.col(j) *= Complex(0.0, std::atan2(lambda.imag(), lambda.real()));
  }
  return Geodesic(u, SkewHermitian(scaled * s.eigenvectors.adjoint(), tol),
                  tol);
}

BallSpec BallSpec::dinf(Unitary center, double radius) {
  if (radius < 0.0 || radius > kPi) {
    throw InvalidMatrix("BallSpec: d_inf radius must lie in [0, pi]");
  }
  BallSpec b{std::move(center), radius, Metric::d_inf, 2,
             TraceConvention::standard};
  return b;
}

BallSpec BallSpec::dp(Unitary center, double radius, int p,
                      TraceConvention conv) {
  if (radius < 0.0) throw InvalidMatrix("BallSpec: radius must be >= 0");
  if (p < 2 || p % 2 != 0) throw InvalidP("BallSpec: p must be even and >= 2");
  BallSpec b{std::move(center), radius, Metric::d_p, p, conv};
  return b;
}

BallMembership in_ball(const Unitary& u, const BallSpec& ball,
                       const Tolerances& tol) {
  if (u.dim() != ball.center.dim()) {
    throw DimensionMismatch("in_ball: dimension mismatch");
  }
  BallMembership out;
  if (ball.metric == BallSpec::Metric::d_inf) {
    // Eigenvalue test: u in B_inf[w, r] iff w^{-1}u + (w^{-1}u)* >= 2cos(r).
    // Robust at the branch cut, unlike the log-based distance.
    const ComplexMatrix a = ball.center.mat().adjoint() * u.mat();
    const ComplexMatrix herm = a + a.adjoint();
    RealVector evals;
    ComplexMatrix vecs;
    detail::jacobi_hermitian(herm, evals, vecs);
    out.margin = evals[0] - 2.0 * std::cos(ball.radius);
    out.inside = out.margin >= 0.0;
  } else {
    const double dist = d_p(ball.center, u, ball.p, ball.conv, tol);
    out.margin = ball.radius - dist;
    out.inside = out.margin >= 0.0;
  }
  return out;
}

std::vector<SpectralFlowSample> spectral_flow(const Unitary& u,
                                              const SkewHermitian& x,
                                              const std::vector<double>& grid,
                                              const Tolerances& tol) {
  if (u.dim() != x.dim()) {
    throw DimensionMismatch("spectral_flow: dimension mismatch");
  }
  // The one-parameter group is defined for any direction norm; rescale so
  // the cached curve satisfies the geodesic-direction cap.
  const double nx = op_norm(x.mat());
  const double rescale = std::max(1.0, nx / kPi);
  const Geodesic curve(u, x.scaled(1.0 / rescale), tol);
  std::vector<SpectralFlowSample> out;
  out.reserve(grid.size());
  for (const double t : grid) {
    const Unitary point = curve.eval(t * rescale);
    const SpectralDecomposition s =
        spectral_normal(point.mat(), tol, NormalityCheck::assume);
    SpectralFlowSample sample;
    sample.t = t;
    sample.theta_min = kPi;
    sample.theta_max = -kPi;
    sample.branch_ok = true;
    for (Eigen::Index i = 0; i < u.dim(); ++i) {
      const Complex lambda = s.eigenvalues[i];
      if (std::abs(lambda + Complex(1.0, 0.0)) <= tol.branch_tol) {
        sample.branch_ok = false;
      }
      const double theta = std::atan2(lambda.imag(), lambda.real());
      sample.theta_min = std::min(sample.theta_min, theta);
      sample.theta_max = std::max(sample.theta_max, theta);
    }
    out.push_back(sample);
  }
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
  if (points < 2) throw InvalidMatrix("uniform_grid: need at least 2 points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) /
                    static_cast<double>(points - 1);
  }
  g.back() = hi;
  return g;
}

}  // namespace unifinsler
