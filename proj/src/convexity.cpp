#include "unifinsler/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace unifinsler {

namespace {

constexpr double kPi = std::numbers::pi;

enum class VerdictRule { chord_primary, second_difference_primary };

ConvexityScanReport make_report(std::vector<double> grid,
                                std::vector<double> values, double floor,
                                VerdictRule rule, const ScanOptions& opts,
                                bool hypothesis_ok, std::string context) {
  if (grid.size() != values.size() || grid.size() < 3) {
    throw ConfigError("convexity scan: grid needs at least 3 points");
  }
  ConvexityScanReport rep;
  rep.grid = std::move(grid);
  rep.values = std::move(values);
  rep.floor = floor;
  rep.chord_tol = opts.chord_tol;
  rep.hypothesis_ok = hypothesis_ok;
  rep.forced = opts.force;
  rep.context = std::move(context);

  const std::size_t n = rep.grid.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    rep.h = std::max(rep.h, rep.grid[i + 1] - rep.grid[i]);
    if (!(rep.grid[i + 1] > rep.grid[i])) {
      throw ConfigError("convexity scan: grid must be strictly increasing");
    }
  }
  rep.scan_tol = opts.curvature_coeff * rep.h * rep.h + 1e-6;

  // Three-point second differences; the nonuniform formula reduces to the
  // central one on uniform grids.
  rep.second_differences.reserve(n - 2);
  rep.min_second_difference = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = rep.grid[i] - rep.grid[i - 1];
    const double h2 = rep.grid[i + 1] - rep.grid[i];
    const double d2 = 2.0 * (rep.values[i - 1] / (h1 * (h1 + h2)) -
                             rep.values[i] / (h1 * h2) +
                             rep.values[i + 1] / (h2 * (h1 + h2)));
    rep.second_differences.push_back(d2);
    rep.min_second_difference = std::min(rep.min_second_difference, d2);
  }
  rep.strict_interior = rep.min_second_difference > 0.0;

  auto chord_slack = [&](std::size_t i, std::size_t j, std::size_t k) {
    const double theta = (rep.grid[k] - rep.grid[j]) / (rep.grid[k] - rep.grid[i]);
    return theta * rep.values[i] + (1.0 - theta) * rep.values[k] - rep.values[j];
  };

  rep.chord_min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    rep.chord_min_slack = std::min(rep.chord_min_slack,
                                   chord_slack(i - 1, i, i + 1));
  }
  std::mt19937_64 rng(opts.chord_seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (int s = 0; s < opts.chord_samples; ++s) {
    std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
    std::size_t lo = std::min({a, b, c});
    std::size_t hi = std::max({a, b, c});
    std::size_t mid = a + b + c - lo - hi;
    if (lo == mid || mid == hi) continue;
    rep.chord_min_slack = std::min(rep.chord_min_slack, chord_slack(lo, mid, hi));
  }

  if (rule == VerdictRule::chord_primary) {
    rep.pass = rep.chord_min_slack >= -rep.chord_tol;
  } else {
    rep.pass = rep.min_second_difference >= rep.floor - rep.scan_tol;
  }
  return rep;
}

Geodesic forced_geodesic(const Unitary& u, const Unitary& v,
                         const Tolerances& tols) {
  const ComplexMatrix rel = u.mat().adjoint() * v.mat();
  const LogResult lr = log_unitary(trusted_unitary(rel), tols);
  return Geodesic(u, lr.tangent, tols);
}

}  // namespace

ConvexityScanReport scan_dinf_convexity(const Unitary& w, const Unitary& u,
                                        const Unitary& v,
                                        const std::vector<double>& grid,
                                        const ScanOptions& opts,
                                        const Tolerances& tols) {
  const double du = d_inf(w, u, tols);
  const double dv = d_inf(w, v, tols);
  const double duv = d_inf(u, v, tols);
  const bool hypothesis_ok =
      du <= kPi / 2.0 + 1e-12 && dv <= kPi / 2.0 + 1e-12 &&
      duv < kPi - tols.branch_tol;
  if (!hypothesis_ok && !opts.force) {
    std::ostringstream msg;
    msg << "scan_dinf_convexity: need u, v within pi/2 of w and "
           "d_inf(u,v) < pi (d(w,u)=" << du << ", d(w,v)=" << dv
        << ", d(u,v)=" << duv << ")";
    throw HypothesisViolation(msg.str());
  }

  const Geodesic g = forced_geodesic(u, v, tols);
  std::vector<double> values;
  values.reserve(grid.size());
  for (const double t : grid) values.push_back(d_inf(w, g.eval(t), tols));

  std::ostringstream ctx;
  ctx << "d_inf(w, gamma(t)), n=" << w.dim() << ", d(w,u)=" << du
      << ", d(w,v)=" << dv;
  return make_report(grid, std::move(values), 0.0,
                     VerdictRule::chord_primary, opts, hypothesis_ok,
                     ctx.str());
}

ConvexityScanReport scan_dp_convexity(const Unitary& u, const Geodesic& beta,
                                      int p, TraceConvention conv,
                                      const std::vector<double>& grid,
                                      const ScanOptions& opts,
                                      const Tolerances& tols) {
  if (p < 2 || p % 2 != 0) throw InvalidP("scan_dp_convexity: invalid p");
  bool hypothesis_ok = true;
  double max_dist = 0.0;
  std::vector<Unitary> points;
  points.reserve(grid.size());
  for (const double t : grid) {
    points.push_back(beta.eval(t));
    const double d = d_inf(u, points.back(), tols);
    max_dist = std::max(max_dist, d);
    if (d >= kPi / 2.0 - 1e-12) hypothesis_ok = false;
  }
  if (!hypothesis_ok && !opts.force) {
    throw HypothesisViolation(
        "scan_dp_convexity: beta leaves the open ball B_inf(u, pi/2); max "
        "distance " + std::to_string(max_dist));
  }

  std::vector<double> values;
  values.reserve(grid.size());
  for (const Unitary& pt : points) {
    values.push_back(std::pow(d_p(u, pt, p, conv, tols), p));
  }

  std::ostringstream ctx;
  ctx << "d_" << p << "(u, beta(t))^" << p << ", n=" << u.dim()
      << ", conv=" << (conv == TraceConvention::standard ? "standard" : "normalized")
      << ", max d_inf=" << max_dist;
  return make_report(grid, std::move(values), 0.0,
                     VerdictRule::second_difference_primary, opts,
                     hypothesis_ok, ctx.str());
}

ConvexityScanReport scan_strong_convexity_d2(const Unitary& w,
                                             const Geodesic& beta, double r,
                                             TraceConvention conv,
                                             const std::vector<double>& grid,
                                             const ScanOptions& opts,
                                             const Tolerances& tols) {
  bool hypothesis_ok = r > 0.0 && r < kPi / 2.0;
  const BallSpec ball = BallSpec::dinf(w, std::min(r, kPi));
  std::vector<Unitary> points;
  points.reserve(grid.size());
  std::ostringstream offenders;
  for (const double t : grid) {
    points.push_back(beta.eval(t));
    if (in_ball(points.back(), ball, tols).margin < -1e-9) {
      hypothesis_ok = false;
      offenders << " t=" << t;
    }
  }
  if (!hypothesis_ok && !opts.force) {
    throw HypothesisViolation(
        "scan_strong_convexity_d2: beta leaves B_inf[w, r] or r >= pi/2;"
        " offending grid points:" + offenders.str());
  }

  std::vector<double> values;
  values.reserve(grid.size());
  for (const Unitary& pt : points) {
    const double d = d_2(w, pt, conv);
    values.push_back(d * d);
  }

  const double c = beta.speed_2(conv);
  const double floor = c * c * std::sin(2.0 * r) / r;

  std::ostringstream ctx;
  ctx << "d_2(w, beta(t))^2, n=" << w.dim() << ", r=" << r
      << ", speed=" << c
      << ", conv=" << (conv == TraceConvention::standard ? "standard" : "normalized");
  return make_report(grid, std::move(values), floor,
                     VerdictRule::second_difference_primary, opts,
                     hypothesis_ok, ctx.str());
}

CounterexampleFlowResult counterexample_flow(double theta,
                                             const std::vector<double>& grid,
                                             const Tolerances& tols) {
  if (!(theta > 0.0) || !(theta < kPi)) {
    throw ConfigError("counterexample_flow: theta must lie in (0, pi)");
  }
  ComplexMatrix um(2, 2);
  um.setZero();
  um(0, 0) = Complex(std::cos(theta), std::sin(theta));
  um(1, 1) = Complex(std::cos(theta), -std::sin(theta));
  ComplexMatrix xm(2, 2);
  xm.setZero();
  xm(0, 1) = Complex(-1.0, 0.0);
  xm(1, 0) = Complex(1.0, 0.0);
  const Unitary u(um);
  const SkewHermitian x(xm);

  CounterexampleFlowResult out;
  out.theta = theta;
  out.grid = grid;
  out.cot_theta = std::cos(theta) / std::sin(theta);
  out.measured = spectral_flow(u, x, grid, tols);

  auto closed = [theta](double t) {
    const double c = std::clamp(std::cos(theta) * std::cos(t), -1.0, 1.0);
    return std::acos(c);
  };
  out.closed_form.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.closed_form.push_back(closed(grid[i]));
    out.max_disagreement =
        std::max(out.max_disagreement,
                 std::abs(out.closed_form[i] - out.measured[i].theta_max));
  }

  // f''(0) by a central second difference at a step small enough for the
  // truncation error and large enough for roundoff.
  const double h = 1e-3;
  const std::vector<double> stencil{-h, 0.0, h};
  const std::vector<SpectralFlowSample> probes =
      spectral_flow(u, x, stencil, tols);
  out.f2_measured = (probes[0].theta_max - 2.0 * probes[1].theta_max +
                     probes[2].theta_max) /
                    (h * h);
  out.f2_closed = (closed(-h) - 2.0 * closed(0.0) + closed(h)) / (h * h);
  return out;
}

ThetaExtremesReport scan_theta_extremes(const Unitary& u,
                                        const SkewHermitian& x,
                                        const std::vector<double>& grid,
                                        const ScanOptions& opts,
                                        const Tolerances& tols) {
  ThetaExtremesReport out;
  out.flow = spectral_flow(u, x, grid, tols);
  out.spread_ok.reserve(out.flow.size());
  std::ostringstream offenders;
  for (const SpectralFlowSample& s : out.flow) {
    const bool ok = s.branch_ok && (s.theta_max - s.theta_min < kPi);
    out.spread_ok.push_back(ok);
    if (!ok) {
      out.all_hypotheses_ok = false;
      offenders << " t=" << s.t;
    }
  }
  if (!out.all_hypotheses_ok && !opts.force) {
    throw SpreadViolation(
        "scan_theta_extremes: spectral spread reaches pi or the spectrum "
        "hits -1 at:" + offenders.str());
  }

  std::vector<double> maxvals, negmin;
  maxvals.reserve(out.flow.size());
  negmin.reserve(out.flow.size());
  for (const SpectralFlowSample& s : out.flow) {
    maxvals.push_back(s.theta_max);
    negmin.push_back(-s.theta_min);
  }
  out.max_report =
      make_report(grid, std::move(maxvals), 0.0, VerdictRule::chord_primary,
                  opts, out.all_hypotheses_ok, "theta_max(t)");
  out.min_report =
      make_report(grid, std::move(negmin), 0.0, VerdictRule::chord_primary,
                  opts, out.all_hypotheses_ok, "-theta_min(t)");
  return out;
}

}  // namespace unifinsler
