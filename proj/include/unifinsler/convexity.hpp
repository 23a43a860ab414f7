#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unifinsler/metric.hpp"

namespace unifinsler {

struct ScanOptions {
  bool force = false;          // run even when the hypotheses fail
  int chord_samples = 50;      // random chord triples per scan
  std::uint64_t chord_seed = 0x5eedc0deULL;
  double chord_tol = 1e-8;
  double curvature_coeff = 10.0;  // C in scan_tol = C h^2 + 1e-6
};

// Scan of f along a grid with both convexity tests. Second differences are
// quantitative but need smoothness; chord slacks survive the kinks of
// d_inf, which is a max of eigenvalue angles. Which test decides the
// verdict depends on the operation (see each scan function).
struct ConvexityScanReport {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> second_differences;  // interior points
  double min_second_difference = 0.0;
  double chord_min_slack = 0.0;
  double floor = 0.0;  // required lower bound for f'' (0 = plain convexity)
  double h = 0.0;
  double scan_tol = 0.0;
  double chord_tol = 0.0;
  bool hypothesis_ok = true;
  bool forced = false;
  bool strict_interior = false;  // every interior second difference > 0
  bool pass = false;
  std::string context;
};

// f(t) = d_inf(w, gamma_{u,v}(t)). Hypotheses: u, v within pi/2 of w and
// d_inf(u, v) < pi. Verdict by chord test (f is piecewise smooth).
ConvexityScanReport scan_dinf_convexity(
    const Unitary& w, const Unitary& u, const Unitary& v,
    const std::vector<double>& grid, const ScanOptions& opts = {},
    const Tolerances& tols = Tolerances::global());

// f(t) = d_p(u, beta(t))^p. Hypothesis: beta stays inside B_inf(u, pi/2).
// Verdict by second differences (floor 0); strictness reported.
ConvexityScanReport scan_dp_convexity(
    const Unitary& u, const Geodesic& beta, int p, TraceConvention conv,
    const std::vector<double>& grid, const ScanOptions& opts = {},
    const Tolerances& tols = Tolerances::global());

// f(t) = d_2(w, beta(t))^2 with floor c^2 sin(2r)/r, c the d_2-speed of
// beta under the chosen convention. Hypothesis: every sampled beta(t) lies
// in B_inf[w, r], r < pi/2.
ConvexityScanReport scan_strong_convexity_d2(
    const Unitary& w, const Geodesic& beta, double r, TraceConvention conv,
    const std::vector<double>& grid, const ScanOptions& opts = {},
    const Tolerances& tols = Tolerances::global());

// The 2x2 family u = diag(e^{i theta}, e^{-i theta}), x = [[0,-1],[1,0]]:
// theta_max(t) has the closed form arccos(cos(theta) cos(t)) with
// f''(0) = cot(theta), which turns negative past theta = pi/2.
struct CounterexampleFlowResult {
  double theta = 0.0;
  std::vector<double> grid;
  std::vector<double> closed_form;
  std::vector<SpectralFlowSample> measured;
  double max_disagreement = 0.0;
  double f2_measured = 0.0;  // central second difference of theta_max at 0
  double f2_closed = 0.0;
  double cot_theta = 0.0;
};

CounterexampleFlowResult counterexample_flow(
    double theta, const std::vector<double>& grid,
    const Tolerances& tols = Tolerances::global());

// Convexity of theta_max and concavity of theta_min along t -> u e^{tx},
// valid while theta_max - theta_min < pi. The min_report scans -theta_min,
// so both verdicts are convexity verdicts.
struct ThetaExtremesReport {
  std::vector<SpectralFlowSample> flow;
  std::vector<bool> spread_ok;
  bool all_hypotheses_ok = true;
  ConvexityScanReport max_report;
  ConvexityScanReport min_report;
};

ThetaExtremesReport scan_theta_extremes(
    const Unitary& u, const SkewHermitian& x, const std::vector<double>& grid,
    const ScanOptions& opts = {},
    const Tolerances& tols = Tolerances::global());

}  // namespace unifinsler
