#include <doctest.h>

#include <cmath>
#include <numbers>

#include "unifinsler/convexity.hpp"
#include "unifinsler/random.hpp"

using namespace unifinsler;

namespace {

constexpr double kPi = std::numbers::pi;

Unitary u1(double angle) {
  ComplexMatrix m(1, 1);
  m(0, 0) = std::polar(1.0, angle);
  return Unitary(m);
}

Unitary diag_u(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, a);
  m(1, 1) = std::polar(1.0, b);
  return Unitary(m);
}

}  // namespace

TEST_CASE("scan_dinf_convexity: constant, commuting, random") {
  const std::vector<double> grid = uniform_grid(0.0, 1.0, 101);

  // u = v = w: the scan is identically zero and passes.
  const Unitary id2 = Unitary::identity(2);
  const ConvexityScanReport zero = scan_dinf_convexity(id2, id2, id2, grid);
  CHECK(zero.pass);
  CHECK(zero.chord_min_slack >= -1e-12);

  // Commuting diagonals: f is piecewise linear in t; the chord test holds.
  const double a = 0.9, b = 1.2;
  const ConvexityScanReport commuting =
      scan_dinf_convexity(id2, diag_u(-a, 0.0), diag_u(b, 0.0), grid);
  CHECK(commuting.pass);
  CHECK(commuting.hypothesis_ok);

  Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 7;
    const Unitary w = random_unitary(rng, n, 3.0);
    const Unitary u = random_in_ball(rng, w, 1.4);
    const Unitary v = random_in_ball(rng, w, 1.4);
    const ConvexityScanReport rep = scan_dinf_convexity(w, u, v, grid);
    CHECK(rep.chord_min_slack >= -1e-8);
  }
}

TEST_CASE("scan_dinf_convexity: sharpness of the pi/2 radius on the circle") {
  const std::vector<double> grid = uniform_grid(0.0, 1.0, 101);
  const double eps = 0.05;
  const Unitary w = u1(0.0);
  const Unitary u = u1(kPi / 2.0 + eps);
  const Unitary v = u1(-(kPi / 2.0 + eps));

  CHECK_THROWS_AS(scan_dinf_convexity(w, u, v, grid), HypothesisViolation);

  ScanOptions forced;
  forced.force = true;
  const ConvexityScanReport rep = scan_dinf_convexity(w, u, v, grid, forced);
  CHECK_FALSE(rep.hypothesis_ok);
  CHECK_FALSE(rep.pass);
  // The geodesic passes through -1 where f = pi while the endpoints sit at
  // pi/2 + eps: a macroscopic chord violation.
  CHECK(rep.chord_min_slack <= -1e-3);
}

TEST_CASE("scan_dp_convexity: prolongation closed form and strictness") {
  const std::vector<double> grid = uniform_grid(0.0, 1.0, 101);
  Rng rng(52);

  // Geodesic through u: f(t) = ||x||_p^p |t|^p exactly.
  const Unitary u = random_unitary(rng, 4, 1.0);
  const SkewHermitian x = random_skew(rng, 4, 0.9);
  const Geodesic through(u, x);
  for (const int p : {2, 4}) {
    const ConvexityScanReport rep =
        scan_dp_convexity(u, through, p, TraceConvention::standard, grid);
    CHECK(rep.pass);
    const double xp = std::pow(schatten_norm(x.mat(), p), p);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(std::abs(rep.values[i] - xp * std::pow(grid[i], p)) <= 1e-9);
    }
  }

  // Commuting diagonal case with p = 2: f(t) = sum_i angle_i(t)^2, an
  // exact quadratic in t.
  {
    ComplexMatrix zd = ComplexMatrix::Zero(2, 2);
    zd(0, 0) = Complex(0.0, 0.9);
    zd(1, 1) = Complex(0.0, -0.3);
    const Geodesic diag_curve(diag_u(-0.4, 0.2), SkewHermitian(zd));
    const ConvexityScanReport quad = scan_dp_convexity(
        Unitary::identity(2), diag_curve, 2, TraceConvention::standard, grid);
    CHECK(quad.pass);
    const double f0 = 0.4 * 0.4 + 0.2 * 0.2;
    CHECK(quad.values.front() == doctest::Approx(f0));
    // Quadratic: constant second differences.
    for (const double d2f : quad.second_differences) {
      CHECK(d2f == doctest::Approx(quad.second_differences.front())
                       .epsilon(1e-6));
    }
  }

  // Random instances within the hypotheses: strict interior positivity.
  for (int trial = 0; trial < 10; ++trial) {
    const Unitary base = random_unitary(rng, 6, 0.5);
    const SkewHermitian z = random_skew(rng, 6, rng.uniform(0.2, 0.8));
    const Geodesic beta(base, z);
    const ConvexityScanReport rep = scan_dp_convexity(
        Unitary::identity(6), beta, 4, TraceConvention::standard, grid);
    CHECK(rep.pass);
    CHECK(rep.strict_interior);
  }

  // Hypothesis violation: the curve leaves B(u, pi/2).
  const Geodesic far(exp_skew(random_skew(rng, 3, 1.5)),
                     random_skew(rng, 3, 1.5));
  CHECK_THROWS_AS(scan_dp_convexity(Unitary::identity(3), far, 2,
                                    TraceConvention::standard, grid),
                  HypothesisViolation);
}

TEST_CASE("scan_strong_convexity_d2: floor value and quadratic case") {
  const std::vector<double> grid = uniform_grid(0.0, 1.0, 201);
  Rng rng(53);

  // Unit-speed geodesic at r = pi/4: floor = sin(pi/2)/(pi/4) = 4/pi.
  {
    const Eigen::Index n = 2;
    SkewHermitian z = random_skew(rng, n, 0.4);
    const double c = std::sqrt(trace_inner(z, z));
    z = z.scaled(1.0 / c);  // unit d_2-speed
    const Unitary w = Unitary::identity(n);
    const Geodesic beta(w, z);
    // Keep the parameter range inside B_inf[w, pi/4].
    const double t_max = 0.95 * (kPi / 4.0) / op_norm(z.mat());
    const ConvexityScanReport rep =
        scan_strong_convexity_d2(w, beta, kPi / 4.0,
                                 TraceConvention::standard,
                                 uniform_grid(0.0, t_max, 201));
    CHECK(rep.floor == doctest::Approx(4.0 / kPi));
    CHECK(rep.pass);
  }

  // w on the prolongation: f(t) = c^2 t^2, second differences exactly 2c^2,
  // and sin(2r)/r <= 2 keeps the verdict green.
  {
    const Unitary w = random_unitary(rng, 3, 0.5);
    const SkewHermitian z = random_skew(rng, 3, 0.45);
    const Geodesic beta(w, z);
    const double c = beta.speed_2(TraceConvention::standard);
    const ConvexityScanReport rep = scan_strong_convexity_d2(
        w, beta, 1.0, TraceConvention::standard, grid);
    CHECK(rep.pass);
    CHECK(rep.min_second_difference ==
          doctest::Approx(2.0 * c * c).epsilon(1e-6));
  }

  // Random instances, both conventions.
  for (int trial = 0; trial < 10; ++trial) {
    const Unitary w = random_unitary(rng, 6, 2.0);
    const Unitary base =
        w * exp_skew(random_skew(rng, 6, rng.uniform(0.0, 0.5)));
    const SkewHermitian z = random_skew(rng, 6, rng.uniform(0.05, 0.45));
    const Geodesic beta(base, z);
    for (TraceConvention conv :
         {TraceConvention::standard, TraceConvention::normalized}) {
      CHECK(scan_strong_convexity_d2(w, beta, 1.0, conv, grid).pass);
    }
  }

  // Offending grid points are a hypothesis violation unless forced.
  {
    const Unitary w = Unitary::identity(3);
    const Geodesic beta(exp_skew(random_skew(rng, 3, 0.9)),
                        random_skew(rng, 3, 0.9));
    CHECK_THROWS_AS(scan_strong_convexity_d2(w, beta, 1.0,
                                             TraceConvention::standard, grid),
                    HypothesisViolation);
  }
}

TEST_CASE("counterexample_flow: cot(theta) and the pi/2 breakdown") {
  const std::vector<double> grid = uniform_grid(-0.5, 0.5, 101);

  const CounterexampleFlowResult quarter =
      counterexample_flow(kPi / 4.0, grid);
  CHECK(std::abs(quarter.f2_measured - 1.0) <= 1e-4);
  CHECK(quarter.max_disagreement <= 1e-9);

  const CounterexampleFlowResult past = counterexample_flow(kPi / 2.0 + 0.1,
                                                            grid);
  CHECK(past.f2_measured < 0.0);
  CHECK(std::abs(past.f2_measured - past.cot_theta) <= 1e-4);

  // theta -> 0+: f(t) ~ |t|, still chord-convex.
  const CounterexampleFlowResult tiny = counterexample_flow(1e-3, grid);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double chord =
        (tiny.closed_form[i - 1] + tiny.closed_form[i + 1]) / 2.0 -
        tiny.closed_form[i];
    CHECK(chord >= -1e-8);
  }

  CHECK_THROWS_AS(counterexample_flow(0.0, grid), ConfigError);
  CHECK_THROWS_AS(counterexample_flow(kPi, grid), ConfigError);
}

TEST_CASE("scan_theta_extremes: commuting, family, spread violation") {
  const std::vector<double> grid = uniform_grid(0.0, 0.5, 101);
  Rng rng(54);

  // x commuting with u: both extremes are affine in t.
  {
    const SkewHermitian x = random_skew(rng, 4, 0.5);
    const Unitary u = exp_skew(x.scaled(0.6));
    const ThetaExtremesReport rep = scan_theta_extremes(u, x, grid);
    CHECK(rep.max_report.pass);
    CHECK(rep.min_report.pass);
  }

  // The closed-form family below pi/2 is convex.
  {
    const double theta = 0.9;
    ComplexMatrix xm = ComplexMatrix::Zero(2, 2);
    xm(0, 1) = Complex(-1.0, 0.0);
    xm(1, 0) = Complex(1.0, 0.0);
    const ThetaExtremesReport rep = scan_theta_extremes(
        diag_u(theta, -theta), SkewHermitian(xm), grid);
    CHECK(rep.max_report.pass);
    CHECK(rep.min_report.pass);
  }

  // Random 4x4 instances under the spread hypothesis.
  int done = 0;
  for (int trial = 0; trial < 60 && done < 30; ++trial) {
    const Unitary u = random_unitary(rng, 4, rng.uniform(0.1, 0.9));
    const SkewHermitian x = random_skew(rng, 4, rng.uniform(0.1, 0.8));
    try {
      const ThetaExtremesReport rep = scan_theta_extremes(u, x, grid);
      CHECK(rep.max_report.pass);
      CHECK(rep.min_report.pass);
      ++done;
    } catch (const SpreadViolation&) {
    }
  }
  CHECK(done >= 30);

  // Spread >= pi when theta = 2: rejected unless forced.
  {
    ComplexMatrix xm = ComplexMatrix::Zero(2, 2);
    xm(0, 1) = Complex(-1.0, 0.0);
    xm(1, 0) = Complex(1.0, 0.0);
    const Unitary u = diag_u(2.0, -2.0);
    CHECK_THROWS_AS(scan_theta_extremes(u, SkewHermitian(xm), grid),
                    SpreadViolation);
    ScanOptions forced;
    forced.force = true;
    const ThetaExtremesReport rep =
        scan_theta_extremes(u, SkewHermitian(xm), grid, forced);
    CHECK_FALSE(rep.all_hypotheses_ok);
  }
}

TEST_CASE("scan consistency: halving h moves the estimate by O(h^2)") {
  // Fixed interior evaluation points, shrinking stencil width: the minimum
  // second difference converges at the central-difference rate.
  const double theta = 1.0;
  auto f = [theta](double t) {
    return std::acos(std::cos(theta) * std::cos(t));
  };
  auto min_d2f = [&](double h) {
    double m = 1e300;
    for (const double t : {-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3}) {
      m = std::min(m, (f(t - h) - 2.0 * f(t) + f(t + h)) / (h * h));
    }
    return m;
  };
  const double h = 0.8 / 100.0;
  const double first = std::abs(min_d2f(h) - min_d2f(h / 2.0));
  const double second = std::abs(min_d2f(h / 2.0) - min_d2f(h / 4.0));
  CHECK(first <= 10.0 * h * h + 1e-9);
  CHECK(second <= first / 3.0 + 1e-12);
}

TEST_CASE("strong-convexity gap shrinks toward the floor as r -> pi/2") {
  // Family instances at growing radius: measured min f'' (per unit speed)
  // approaches the floor sin(2r)/r from above.
  ComplexMatrix xm = ComplexMatrix::Zero(2, 2);
  xm(0, 1) = Complex(-1.0, 0.0);
  xm(1, 0) = Complex(1.0, 0.0);
  const SkewHermitian x(xm);
  const std::vector<double> grid = uniform_grid(-0.2, 0.2, 201);

  double previous_gap = 1e300;
  for (const double delta : {0.5, 0.35, 0.25, 0.15}) {
    const double theta = kPi / 2.0 - delta;
    const Unitary base = diag_u(theta, -theta);
    const Geodesic beta(base, x);
    const double r = std::acos(std::cos(theta) * std::cos(0.2)) + 1e-9;
    REQUIRE(r < kPi / 2.0);
    const ConvexityScanReport rep = scan_strong_convexity_d2(
        Unitary::identity(2), beta, r, TraceConvention::standard, grid);
    const double c = beta.speed_2(TraceConvention::standard);
    const double gap =
        rep.min_second_difference / (c * c) - std::sin(2.0 * r) / r;
    CHECK(gap >= -rep.scan_tol);
    CHECK(gap <= previous_gap + 1e-9);
    previous_gap = gap;
  }
}

TEST_CASE("two-uniform convexity midpoint inequality") {
  // d_2(x, gamma(t))^2 <= (1-t) d_2(x,y)^2 + t d_2(x,z)^2
  //                        - (C_r/2) t (1-t) d_2(y,z)^2,  C_r = sin(2r)/r,
  // for triples inside B_inf[w, r/2].
  Rng rng(55);
  const double r = 1.0;
  const double c_r = std::sin(2.0 * r) / r;
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 3;
    const Unitary w = random_unitary(rng, n, 2.0);
    const Unitary x = w * exp_skew(random_skew(rng, n, rng.uniform(0.0, r / 2)));
    const Unitary y = w * exp_skew(random_skew(rng, n, rng.uniform(0.0, r / 2)));
    const Unitary z = w * exp_skew(random_skew(rng, n, rng.uniform(0.0, r / 2)));
    const Geodesic g = geodesic_between(y, z);
    const double dxy = d_2(x, y), dxz = d_2(x, z), dyz = d_2(y, z);
    for (const double t : {0.25, 0.5, 0.75}) {
      const double lhs = std::pow(d_2(x, g.eval(t)), 2);
      const double rhs = (1.0 - t) * dxy * dxy + t * dxz * dxz -
                         (c_r / 2.0) * t * (1.0 - t) * dyz * dyz;
      CHECK(lhs <= rhs + 1e-8);
    }
  }
}
