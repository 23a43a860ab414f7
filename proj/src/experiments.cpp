#include "unifinsler/experiments.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "unifinsler/io.hpp"
#include "unifinsler/random.hpp"

namespace unifinsler {

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string outpath(const RunConfig& cfg, const std::string& name) {
  return cfg.out_dir + "/" + name;
}

void write_meta(const RunConfig& cfg) {
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  Json meta{{"experiment", cfg.experiment_id},
            {"seed", cfg.seed},
            {"unix_time",
             std::chrono::duration_cast<std::chrono::seconds>(now).count()}};
  write_text_file(outpath(cfg, cfg.experiment_id + "_meta.json"),
                  meta.dump(2) + "\n");
}

CriterionOutcome make_outcome(int criterion, const std::string& id, bool pass,
                              double secs, const std::string& detail) {
  return CriterionOutcome{criterion, id, pass, secs, detail};
}

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

// ------------------------------------------------------------------
// prop23: exponential chord identity, log/exp roundtrip, norm/metric
// bridges (criteria 1, 2, 11).

std::vector<CriterionOutcome> exp_prop23(const RunConfig& cfg) {
  std::vector<CriterionOutcome> out;
  Rng rng(cfg.seed);

  const auto t1 = Clock::now();
  CsvWriter chord_csv(outpath(cfg, "prop23_chord.csv"));
  chord_csv.row({"trial", "n", "norm_x", "abs_err"});
  double worst_chord = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = 2 + trial % 11;
    const SkewHermitian x = random_skew(rng, n, rng.uniform(1e-3, kPi));
    const Unitary u = exp_skew(x);
    const double nx = op_norm(x.mat());
    const double lhs =
        op_norm(ComplexMatrix::Identity(n, n) - u.mat());
    const double err = std::abs(lhs - 2.0 * std::sin(nx / 2.0));
    worst_chord = std::max(worst_chord, err);
    chord_csv.numeric_row({static_cast<double>(trial),
                           static_cast<double>(n), nx, err});
  }
  const double secs1 = seconds_since(t1);
  {
    std::ostringstream d;
    d << "max | ||id-e^x|| - 2 sin(||x||/2) | = " << worst_chord
      << " (<= 1e-9), " << secs1 << " s (< 10 s)";
    out.push_back(make_outcome(1, cfg.experiment_id,
                               worst_chord <= 1e-9 && secs1 < 10.0, secs1,
                               d.str()));
  }

  const auto t2 = Clock::now();
  CsvWriter rt_csv(outpath(cfg, "prop23_roundtrip.csv"));
  rt_csv.row({"trial", "n", "norm_x", "abs_err"});
  double worst_rt = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = 2 + trial % 11;
    const SkewHermitian x =
        random_skew(rng, n, rng.uniform(1e-3, kPi - 0.1));
    const LogResult lr = log_unitary(exp_skew(x));
    const double err = op_norm(lr.tangent.mat() - x.mat());
    worst_rt = std::max(worst_rt, err);
    rt_csv.numeric_row({static_cast<double>(trial), static_cast<double>(n),
                        op_norm(x.mat()), err});
  }
  {
    std::ostringstream d;
    d << "max ||log(exp(x)) - x|| = " << worst_rt << " (<= 1e-8)";
    out.push_back(make_outcome(2, cfg.experiment_id, worst_rt <= 1e-8,
                               seconds_since(t2), d.str()));
  }

  const auto t3 = Clock::now();
  CsvWriter br_csv(outpath(cfg, "prop23_bridges.csv"));
  br_csv.row({"trial", "n", "d_inf", "chord_inf", "d_2", "chord_2",
              "min_slack"});
  const double c_low = std::sqrt(1.0 - kPi * kPi / 12.0);
  double worst_slack = 1e300;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = 2 + trial % 11;
    const Unitary u = random_unitary(rng, n, kPi);
    const Unitary v = random_unitary(rng, n, kPi);
    const double di = d_inf(u, v);
    const double ci = Unitary::chord_norm(u, v);
    const double d2 = d_2(u, v);
    const double c2 = schatten_norm(u.mat() - v.mat(), 2);
    const double slack =
        std::min({ci - (2.0 / kPi) * di, di - ci, c2 - c_low * d2, d2 - c2});
    worst_slack = std::min(worst_slack, slack);
    br_csv.numeric_row({static_cast<double>(trial), static_cast<double>(n),
                        di, ci, d2, c2, slack});
  }
  {
    std::ostringstream d;
    d << "min bridge slack = " << worst_slack << " (>= -1e-9)";
    out.push_back(make_outcome(11, cfg.experiment_id, worst_slack >= -1e-9,
                               seconds_since(t3), d.str()));
  }
  return out;
}

// ------------------------------------------------------------------
// thm35: convexity of d_inf along geodesics in balls of radius <= pi/2,
// plus the circle counterexample past the sharp radius (criterion 3).

std::vector<CriterionOutcome> exp_thm35(const RunConfig& cfg) {
  Rng rng(cfg.seed);
  const auto t0 = Clock::now();
  CsvWriter csv(outpath(cfg, "thm35.csv"));
  csv.row({"trial", "n", "d_wu", "d_wv", "d_uv", "chord_min_slack"});
  const std::vector<double> grid = uniform_grid(0.0, 1.0, 101);
  bool all_pass = true;
  double worst_slack = 1e300;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = 2 + trial % 7;
    const Unitary w = random_unitary(rng, n, 3.0);
    const Unitary u = random_in_ball(rng, w, 1.4);
    const Unitary v = random_in_ball(rng, w, 1.4);
    ScanOptions opts;
    opts.chord_seed = cfg.seed ^ (0x9e3779b97f4a7c15ULL * (trial + 1));
    const ConvexityScanReport rep = scan_dinf_convexity(w, u, v, grid, opts);
    all_pass = all_pass && rep.chord_min_slack >= -1e-8;
    worst_slack = std::min(worst_slack, rep.chord_min_slack);
    csv.numeric_row({static_cast<double>(trial), static_cast<double>(n),
                     d_inf(w, u), d_inf(w, v), d_inf(u, v),
                     rep.chord_min_slack});
  }

  // Sharpness: on the circle, endpoints at angle +-(pi/2 + eps) connect
  // through -1 and the distance to 1 bulges above the chord.
  const double eps = 0.05;
  ComplexMatrix one(1, 1), up(1, 1), vp(1, 1);
  one(0, 0) = Complex(1.0, 0.0);
  up(0, 0) = std::polar(1.0, kPi / 2.0 + eps);
  vp(0, 0) = std::polar(1.0, -(kPi / 2.0 + eps));
  ScanOptions forced;
  forced.force = true;
  const ConvexityScanReport ce =
      scan_dinf_convexity(Unitary(one), Unitary(up), Unitary(vp), grid,
                          forced);
  const double violation = -ce.chord_min_slack;
  const bool pass = all_pass && violation >= 1e-3;

  std::ostringstream d;
  d << "min chord slack = " << worst_slack
    << " (>= -1e-8); circle violation = " << violation << " (>= 1e-3)";
  return {make_outcome(3, cfg.experiment_id, pass, seconds_since(t0),
                       d.str())};
}

// ------------------------------------------------------------------
// cor310: theta_max convex / theta_min concave under the spread-< pi
// hypothesis on random 4x4 instances (criterion 4, scan half).

std::vector<CriterionOutcome> exp_cor310(const RunConfig& cfg) {
  Rng rng(cfg.seed);
  const auto t0 = Clock::now();
  CsvWriter csv(outpath(cfg, "cor310.csv"));
  csv.row({"trial", "norm_u_log", "norm_x", "max_slack", "min_slack"});
  const std::vector<double> grid = uniform_grid(0.0, 0.5, 101);
  bool all_pass = true;
  for (int trial = 0; trial < 200; ++trial) {
    ScanOptions opts;
    opts.chord_seed = cfg.seed ^ (0xdeadbeefULL + trial);
    bool done = false;
    for (int attempt = 0; attempt < 100 && !done; ++attempt) {
      const double nu = rng.uniform(0.1, 0.9);
      const double nx = rng.uniform(0.1, 0.8);
      const Unitary u = random_unitary(rng, 4, nu);
      const SkewHermitian x = random_skew(rng, 4, nx);
      try {
        const ThetaExtremesReport rep = scan_theta_extremes(u, x, grid, opts);
        const bool ok = rep.max_report.chord_min_slack >= -1e-8 &&
                        rep.min_report.chord_min_slack >= -1e-8;
        all_pass = all_pass && ok;
        csv.numeric_row({static_cast<double>(trial), nu, nx,
                         rep.max_report.chord_min_slack,
                         rep.min_report.chord_min_slack});
        done = true;
      } catch (const SpreadViolation&) {
        // hypothesis not met; redraw
      }
    }
    all_pass = all_pass && done;
  }
  std::ostringstream d;
  d << "200 4x4 spectral-flow instances: theta_max convex, theta_min "
       "concave by chord test";
  return {make_outcome(4, cfg.experiment_id, all_pass, seconds_since(t0),
                       d.str())};
}

// ------------------------------------------------------------------
// ex311: the closed-form flow family, f''(0) = cot(theta), including the
// negative value past pi/2 (criterion 4, closed-form half).

std::vector<CriterionOutcome> exp_ex311(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  CsvWriter csv(outpath(cfg, "ex311.csv"));
  csv.row({"theta", "f2_measured", "f2_closed", "cot_theta", "abs_err",
           "flow_agreement"});
  const std::vector<double> grid = uniform_grid(-0.5, 0.5, 101);
  bool pass = true;
  std::ostringstream d;
  for (const double theta : {0.5, 1.0, 2.0, kPi / 2.0 + 0.1}) {
    const CounterexampleFlowResult r = counterexample_flow(theta, grid);
    const double err = std::abs(r.f2_measured - r.cot_theta);
    csv.numeric_row({theta, r.f2_measured, r.f2_closed, r.cot_theta, err,
                     r.max_disagreement});
    pass = pass && err <= 1e-4 && r.max_disagreement <= 1e-9;
    if (theta > kPi / 2.0) pass = pass && r.f2_measured < 0.0;
    d << "theta=" << theta << ": f''(0)=" << r.f2_measured << " vs cot="
      << r.cot_theta << "; ";
  }
  return {make_outcome(4, cfg.experiment_id, pass, seconds_since(t0),
                       d.str())};
}

// ------------------------------------------------------------------
// thm43/thm44: strong convexity floor c^2 sin(2r)/r for d_2(w, beta(t))^2
// (criterion 5, one trace convention each).

std::vector<CriterionOutcome> exp_strong_convexity(const RunConfig& cfg,
                                                   TraceConvention conv,
                                                   int criterion_tag) {
  Rng rng(cfg.seed);
  const auto t0 = Clock::now();
  CsvWriter csv(outpath(cfg, cfg.experiment_id + ".csv"));
  csv.row({"trial", "speed", "floor", "min_d2f", "margin"});
  const double r = 1.0;
  const std::vector<double> grid = uniform_grid(0.0, 1.0, 201);
  bool all_pass = true;
  double worst_margin = 1e300;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 6;
    const Unitary w = random_unitary(rng, n, 2.0);
    const Unitary base = w * exp_skew(random_skew(rng, n, rng.uniform(0.0, 0.5)));
    const SkewHermitian z = random_skew(rng, n, rng.uniform(0.05, 0.45));
    const Geodesic beta(base, z);
    const ConvexityScanReport rep =
        scan_strong_convexity_d2(w, beta, r, conv, grid);
    const double margin =
        rep.min_second_difference - (rep.floor - rep.scan_tol);
    worst_margin = std::min(worst_margin, margin);
    all_pass = all_pass && rep.pass;
    csv.numeric_row({static_cast<double>(trial), beta.speed_2(conv),
                     rep.floor, rep.min_second_difference, margin});
  }
  std::ostringstream d;
  d << "min (second difference - floor + scan_tol) = " << worst_margin
    << " (>= 0), conv=" << trace_convention_name(conv);
  return {make_outcome(criterion_tag, cfg.experiment_id, all_pass,
                       seconds_since(t0), d.str())};
}

// ------------------------------------------------------------------
// symmetry-geodesic: geodesics between symmetries stay symmetric, follow
// the conjugation form, and keep the trace constant (criterion 7).

std::vector<CriterionOutcome> exp_symmetry_geodesic(const RunConfig& cfg) {
  Rng rng(cfg.seed);
  const auto t0 = Clock::now();
  CsvWriter csv(outpath(cfg, "symmetry_geodesic.csv"));
  csv.row({"trial", "n", "rank", "d_uv", "sym_res", "conj_res", "trace_res"});
  bool all_pass = true;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 7;
    const Eigen::Index rank = 1 + rng.uniform_int(0, static_cast<int>(n) - 2);
    const Unitary u = random_symmetry(rng, n, rank);
    const Unitary conj = exp_skew(random_skew(rng, n, rng.uniform(0.05, 0.7)));
    const Unitary v =
        trusted_unitary(conj.mat() * u.mat() * conj.mat().adjoint());
    const Geodesic g = geodesic_between(u, v);
    const Geodesic one_param(Unitary::identity(n), g.direction());
    double sym_res = 0.0, conj_res = 0.0, trace_res = 0.0;
    const Complex tr_u = u.mat().trace();
    for (const double t : uniform_grid(0.0, 1.0, 21)) {
      const Unitary e = g.eval(t);
      sym_res = std::max(sym_res, op_norm(e.mat() - e.mat().adjoint()));
      const ComplexMatrix half = one_param.eval(-t / 2.0).mat();
      conj_res = std::max(
          conj_res, op_norm(e.mat() - half * u.mat() * half.adjoint()));
      trace_res = std::max(trace_res, std::abs(e.mat().trace() - tr_u));
    }
    const bool ok = sym_res <= 1e-8 && conj_res <= 1e-8 && trace_res <= 1e-9;
    all_pass = all_pass && ok;
    csv.numeric_row({static_cast<double>(trial), static_cast<double>(n),
                     static_cast<double>(rank), d_inf(u, v), sym_res,
                     conj_res, trace_res});
  }
  std::ostringstream d;
  d << "200 symmetry pairs: eval symmetric, conjugation form, constant "
       "trace";
  return {make_outcome(7, cfg.experiment_id, all_pass, seconds_since(t0),
                       d.str())};
}

// ------------------------------------------------------------------
// su-length: SU(n) geodesics stay special below the length parameter
// 2 pi / n; at the antipodal pair the determinant leaves 1 (criterion 8).

std::vector<CriterionOutcome> exp_su_length(const RunConfig& cfg) {
  Rng rng(cfg.seed);
  const auto t0 = Clock::now();
  CsvWriter csv(outpath(cfg, "su_length.csv"));
  csv.row({"n", "pair", "d_uv", "max_residual"});
  bool all_pass = true;
  double worst = 0.0;
  for (const Eigen::Index n : {2, 3, 4, 5}) {
    const SubspaceSpec su = SubspaceSpec::special_unitary(n);
    for (int pair = 0; pair < 13; ++pair) {
      const Unitary u =
          exp_skew(random_traceless_skew(rng, n, rng.uniform(0.0, 1.0)));
      const double max_step = 0.98 * su.length_parameter();
      const SkewHermitian z =
          random_traceless_skew(rng, n, rng.uniform(0.05, max_step));
      const Unitary v = u * exp_skew(z);
      const ClosureReport rep = geodesic_closure_check(su, u, v, 33);
      worst = std::max(worst, rep.max_residual);
      all_pass = all_pass && rep.max_residual <= 1e-8;
      csv.numeric_row({static_cast<double>(n), static_cast<double>(pair),
                       rep.endpoint_distance, rep.max_residual});
    }
  }

  // Forced antipodal run in SU(2): log(-id) = i pi id, so interior points
  // pick up determinant e^{2 pi i t}.
  const SubspaceSpec su2 = SubspaceSpec::special_unitary(2);
  const Unitary id2 = Unitary::identity(2);
  const Unitary minus_id2 = Unitary(-ComplexMatrix::Identity(2, 2));
  const ClosureReport forced =
      geodesic_closure_check(su2, id2, minus_id2, 33, /*force=*/true);
  const bool counterexample = !forced.length_ok && forced.max_residual >= 1e-2;

  std::ostringstream d;
  d << "max |det - 1| below length parameter = " << worst
    << " (<= 1e-8); antipodal SU(2) interior residual = "
    << forced.max_residual << " (>= 1e-2)";
  return {make_outcome(8, cfg.experiment_id, all_pass && counterexample,
                       seconds_since(t0), d.str())};
}

// ------------------------------------------------------------------
// center-oracle: midpoint lambda-inequality (criterion 6) and circumcenter
// oracle agreement plus uniqueness spread (criterion 9).

std::vector<CriterionOutcome> exp_center_oracle(const RunConfig& cfg) {
  std::vector<CriterionOutcome> out;
  Rng rng(cfg.seed);

  // --- criterion 6: midpoint descent of f_A under the r = 1.2 floor.
  {
    const auto t0 = Clock::now();
    CsvWriter csv(outpath(cfg, "center_midpoint.csv"));
    csv.row({"trial", "d2_uv", "slack"});
    const double r = 1.2;
    const double lambda = std::sin(2.0 * r) / (2.0 * r);
    bool all_pass = true;
    double worst = 1e300;
    for (int trial = 0; trial < 500; ++trial) {
      const Eigen::Index n = 4;
      const Unitary c0 = random_unitary(rng, n, 1.0);
      std::vector<Unitary> sites;
      for (int s = 0; s < 4; ++s) {
        sites.push_back(c0 * exp_skew(random_skew(rng, n, rng.uniform(0.0, 0.35))));
      }
      const Unitary u = c0 * exp_skew(random_skew(rng, n, rng.uniform(0.0, 0.4)));
      const Unitary v = c0 * exp_skew(random_skew(rng, n, rng.uniform(0.0, 0.4)));
      const Unitary mid = geodesic_between(u, v).eval(0.5);
      const double duv = d_2(u, v);
      const double slack = (f_A(sites, u) + f_A(sites, v)) / 2.0 -
                           (lambda / 2.0) * duv * duv - f_A(sites, mid);
      worst = std::min(worst, slack);
      all_pass = all_pass && slack >= -1e-8;
      csv.numeric_row({static_cast<double>(trial), duv, slack});
    }
    std::ostringstream d;
    d << "min midpoint slack = " << worst << " (>= -1e-8), lambda = "
      << lambda;
    out.push_back(make_outcome(6, cfg.experiment_id, all_pass,
                               seconds_since(t0), d.str()));
  }

  // --- criterion 9: oracle agreement and uniqueness.
  {
    const auto t0 = Clock::now();
    CsvWriter csv(outpath(cfg, "center_oracle.csv"));
    csv.row({"case", "d2_solver_oracle", "f_solver", "f_expected",
             "uniq_spread", "uniq_gap_bound"});
    bool pass = true;

    // Circle pair {e^{i theta}, e^{-i theta}}: center 1, f = theta^2.
    {
      const double theta = 0.5;
      ComplexMatrix a(1, 1), b(1, 1);
      a(0, 0) = std::polar(1.0, theta);
      b(0, 0) = std::polar(1.0, -theta);
      CenterProblem problem{{Unitary(a), Unitary(b)},
                            SubspaceSpec::full(1),
                            1.2,
                            TraceConvention::standard,
                            Unitary(a),
                            {}};
      problem.start =
          circumradius_witness(problem.sites, problem.subspace).witness;
      const CenterResult res = solve_center(problem);

      // Independent oracle: dense angle grid at 1e-4 resolution.
      double best_f = 1e300, best_phi = 0.0;
      const int steps = static_cast<int>(std::floor(2.0 * kPi / 1e-4));
      for (int i = 0; i < steps; ++i) {
        const double phi = -kPi + 2.0 * kPi * i / steps;
        const double f = std::max(std::pow(wrap_angle(phi - theta), 2),
                                  std::pow(wrap_angle(phi + theta), 2));
        if (f < best_f) {
          best_f = f;
          best_phi = phi;
        }
      }
      ComplexMatrix oracle(1, 1);
      oracle(0, 0) = std::polar(1.0, best_phi);
      const double dist = d_2(res.center, Unitary(oracle));
      const UniquenessReport uniq =
          verify_uniqueness(problem, 10, cfg.seed ^ 0xc1c1ULL);
      pass = pass && dist <= 1e-4 &&
             std::abs(res.value - theta * theta) <= 1e-6 &&
             uniq.max_pairwise_d2 <= uniq.gap_bound + 1e-5;
      csv.numeric_row({0.0, dist, res.value, theta * theta,
                       uniq.max_pairwise_d2, uniq.gap_bound});
    }

    // Commuting diagonal pair: center diag(e^{i a/2}, e^{i a/2}),
    // f = a^2/2; the oracle is a refining 2-parameter grid ending at 1e-4.
    {
      const double alpha = 0.8;
      ComplexMatrix a = ComplexMatrix::Identity(2, 2);
      ComplexMatrix b = ComplexMatrix::Identity(2, 2);
      a(0, 0) = std::polar(1.0, alpha);
      b(1, 1) = std::polar(1.0, alpha);
      CenterProblem problem{{Unitary(a), Unitary(b)},
                            SubspaceSpec::full(2),
                            1.0,
                            TraceConvention::standard,
                            Unitary(a),
                            {}};
      problem.start =
          circumradius_witness(problem.sites, problem.subspace).witness;
      const CenterResult res = solve_center(problem);

      auto f_diag = [alpha](double p1, double p2) {
        const double f1 = std::pow(wrap_angle(p1 - alpha), 2) +
                          std::pow(wrap_angle(p2), 2);
        const double f2 = std::pow(wrap_angle(p1), 2) +
                          std::pow(wrap_angle(p2 - alpha), 2);
        return std::max(f1, f2);
      };
      double c1 = 0.0, c2 = 0.0, span = kPi;
      for (const double step : {1e-2, 1e-3, 1e-4}) {
        double best = 1e300, b1 = c1, b2 = c2;
        for (double p1 = c1 - span; p1 <= c1 + span; p1 += step) {
          for (double p2 = c2 - span; p2 <= c2 + span; p2 += step) {
            const double f = f_diag(p1, p2);
            if (f < best) {
              best = f;
              b1 = p1;
              b2 = p2;
            }
          }
        }
        c1 = b1;
        c2 = b2;
        span = 3.0 * step;
      }
      ComplexMatrix oracle = ComplexMatrix::Identity(2, 2);
      oracle(0, 0) = std::polar(1.0, c1);
      oracle(1, 1) = std::polar(1.0, c2);
      const double dist = d_2(res.center, Unitary(oracle));
      const UniquenessReport uniq =
          verify_uniqueness(problem, 10, cfg.seed ^ 0xd2d2ULL);
      pass = pass && dist <= 1e-4 &&
             std::abs(res.value - alpha * alpha / 2.0) <= 1e-6 &&
             uniq.max_pairwise_d2 <= uniq.gap_bound + 1e-5;
      csv.numeric_row({1.0, dist, res.value, alpha * alpha / 2.0,
                       uniq.max_pairwise_d2, uniq.gap_bound});
    }

    // Random 4-site problem: uniqueness spread only (no closed oracle).
    {
      const Eigen::Index n = 4;
      std::vector<Unitary> sites;
      for (int s = 0; s < 4; ++s) {
        sites.push_back(exp_skew(random_skew(rng, n, rng.uniform(0.1, 0.7))));
      }
      CenterProblem problem{sites, SubspaceSpec::full(n), 1.2,
                            TraceConvention::standard, Unitary::identity(n),
                            {}};
      problem.start =
          circumradius_witness(problem.sites, problem.subspace).witness;
      const UniquenessReport uniq =
          verify_uniqueness(problem, 10, cfg.seed ^ 0xabcdULL);
      pass = pass && uniq.max_pairwise_d2 <= uniq.gap_bound + 1e-5;
      csv.numeric_row({2.0, 0.0, uniq.results.front().value, 0.0,
                       uniq.max_pairwise_d2, uniq.gap_bound});
    }

    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << "oracle agreement within 1e-4 and uniqueness spreads within the "
         "gap bound, " << secs << " s (< 60 s)";
    out.push_back(
        make_outcome(9, cfg.experiment_id, pass && secs < 60.0, secs, d.str()));
  }
  return out;
}

// ------------------------------------------------------------------
// rigidity-demo: intertwiner recovery for Z/3 and S3, the inequivalent
// character pair, and the invariant projection demos (criterion 10).

Unitary permutation_unitary(const std::vector<int>& perm) {
  const Eigen::Index n = static_cast<Eigen::Index>(perm.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    m(perm[j], j) = Complex(1.0, 0.0);
  }
  return Unitary(m);
}

std::vector<CriterionOutcome> exp_rigidity_demo(const RunConfig& cfg) {
  Rng rng(cfg.seed);
  const auto t0 = Clock::now();
  CsvWriter csv(outpath(cfg, "rigidity_demo.csv"));
  csv.row({"case", "residual", "expected_radius_too_large"});
  bool pass = true;

  // Z/3 cyclic-shift representation conjugated by exp(x), ||x|| = 0.3.
  {
    const std::vector<std::vector<int>> table{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    const std::vector<std::string> labels{"e", "g", "g2"};
    const Unitary p = permutation_unitary({1, 2, 0});
    const std::vector<Unitary> phi{Unitary::identity(3), p, p * p};
    const Unitary g0 = exp_skew(random_skew(rng, 3, 0.3));
    std::vector<Unitary> rho;
    for (const Unitary& m : phi) {
      rho.push_back(trusted_unitary(g0.mat().adjoint() * m.mat() * g0.mat()));
    }
    const Unitary g =
        find_intertwiner(labels, table, phi, rho, SubspaceSpec::full(3),
                         Unitary::identity(3));
    const double res = intertwiner_residual(phi, rho, g);
    pass = pass && res <= 1e-6;
    csv.numeric_row({0.0, res, 0.0});
  }

  // S3 permutation representation, same conjugation scheme.
  {
    const std::vector<std::vector<int>> perms{{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                              {1, 0, 2}, {2, 1, 0}, {0, 2, 1}};
    auto compose = [&](int i, int j) {
      std::vector<int> c(3);
      for (int k = 0; k < 3; ++k) c[k] = perms[i][perms[j][k]];
      for (std::size_t m = 0; m < perms.size(); ++m) {
        if (perms[m] == c) return static_cast<int>(m);
      }
      throw ConfigError("S3 table closure failure");
    };
    std::vector<std::vector<int>> table(6, std::vector<int>(6));
    std::vector<std::string> labels(6);
    std::vector<Unitary> phi;
    for (int i = 0; i < 6; ++i) {
      labels[i] = "p" + std::to_string(i);
      phi.push_back(permutation_unitary(perms[i]));
      for (int j = 0; j < 6; ++j) table[i][j] = compose(i, j);
    }
    const Unitary g0 = exp_skew(random_skew(rng, 3, 0.3));
    std::vector<Unitary> rho;
    for (const Unitary& m : phi) {
      rho.push_back(trusted_unitary(g0.mat().adjoint() * m.mat() * g0.mat()));
    }
    const Unitary g =
        find_intertwiner(labels, table, phi, rho, SubspaceSpec::full(3),
                         Unitary::identity(3));
    const double res = intertwiner_residual(phi, rho, g);
    pass = pass && res <= 1e-6;
    csv.numeric_row({1.0, res, 0.0});
  }

  // Inequivalent characters of Z/2 on U(1): the orbit {1, -1} has
  // circumradius pi/2, so no intertwiner can be certified.
  {
    const std::vector<std::vector<int>> table{{0, 1}, {1, 0}};
    const std::vector<std::string> labels{"e", "s"};
    ComplexMatrix one(1, 1), minus(1, 1);
    one(0, 0) = Complex(1.0, 0.0);
    minus(0, 0) = Complex(-1.0, 0.0);
    const std::vector<Unitary> phi{Unitary(one), Unitary(one)};
    const std::vector<Unitary> rho{Unitary(one), Unitary(minus)};
    bool rejected = false;
    try {
      find_intertwiner(labels, table, phi, rho, SubspaceSpec::full(1),
                       Unitary(one));
    } catch (const RadiusTooLarge&) {
      rejected = true;
    }
    pass = pass && rejected;
    csv.numeric_row({2.0, 0.0, rejected ? 1.0 : 0.0});
  }

  // Invariant projection: H = {id, diag(-1,-1,1)} on Gr_1(C^3), p0 near
  // span(e3); the commutant forces q = the projection onto e3.
  {
    Eigen::Vector3cd v;
    v << Complex(0.15, 0.0), Complex(0.0, -0.1), Complex(1.0, 0.0);
    v.normalize();
    ProjectionPoint p0;
    p0.p = v * v.adjoint();
    p0.rank = 1;
    ComplexMatrix hmat = ComplexMatrix::Identity(3, 3);
    hmat(0, 0) = Complex(-1.0, 0.0);
    hmat(1, 1) = Complex(-1.0, 0.0);
    const std::vector<Unitary> generators{Unitary(hmat)};
    const ProjectionPoint q = find_invariant_projection(generators, 1, p0);
    double comm = 0.0;
    for (const Unitary& h : generators) {
      comm = std::max(comm, op_norm(h.mat() * q.p - q.p * h.mat()));
    }
    ComplexMatrix e3 = ComplexMatrix::Zero(3, 3);
    e3(2, 2) = Complex(1.0, 0.0);
    const double dist_e3 = op_norm(q.p - e3);
    pass = pass && comm <= 1e-6 && dist_e3 <= 1e-6;
    csv.numeric_row({3.0, std::max(comm, dist_e3), 0.0});
  }

  // Coordinate-swap group on Gr_1(C^2): the two coordinate projections are
  // antipodal symmetries, so the radius precondition must reject.
  {
    ComplexMatrix swap(2, 2);
    swap.setZero();
    swap(0, 1) = Complex(1.0, 0.0);
    swap(1, 0) = Complex(1.0, 0.0);
    ComplexMatrix sign = ComplexMatrix::Identity(2, 2);
    sign(1, 1) = Complex(-1.0, 0.0);
    const std::vector<Unitary> generators{Unitary(swap), Unitary(sign)};
    bool rejected = false;
    try {
      find_invariant_projection(generators, 1,
                                ProjectionPoint::coordinate(2, 0));
    } catch (const RadiusTooLarge&) {
      rejected = true;
    }
    pass = pass && rejected;
    csv.numeric_row({4.0, 0.0, rejected ? 1.0 : 0.0});
  }

  std::ostringstream d;
  d << "intertwiner residuals <= 1e-6; optimality instances rejected with "
       "RadiusTooLarge; invariant projection commutes within 1e-6";
  return {make_outcome(10, cfg.experiment_id, pass, seconds_since(t0),
                       d.str())};
}

using ExperimentFn =
    std::function<std::vector<CriterionOutcome>(const RunConfig&)>;

const std::map<std::string, ExperimentFn>& experiment_table() {
  static const std::map<std::string, ExperimentFn> table{
      {"prop23", exp_prop23},
      {"thm35", exp_thm35},
      {"cor310", exp_cor310},
      {"ex311", exp_ex311},
      {"thm43",
       [](const RunConfig& cfg) {
         return exp_strong_convexity(cfg, TraceConvention::standard, 5);
       }},
      {"thm44",
       [](const RunConfig& cfg) {
         return exp_strong_convexity(cfg, TraceConvention::normalized, 5);
       }},
      {"su-length", exp_su_length},
      {"symmetry-geodesic", exp_symmetry_geodesic},
      {"center-oracle", exp_center_oracle},
      {"rigidity-demo", exp_rigidity_demo},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [key, fn] : experiment_table()) v.push_back(key);
    return v;
  }();
  return ids;
}

std::vector<CriterionOutcome> run_experiment(const RunConfig& cfg) {
  const auto it = experiment_table().find(cfg.experiment_id);
  if (it == experiment_table().end()) {
    throw ConfigError("unknown experiment id '" + cfg.experiment_id + "'");
  }
  std::vector<CriterionOutcome> outcomes = it->second(cfg);
  std::ostringstream summary;
  for (const CriterionOutcome& o : outcomes) {
    summary << "criterion " << o.criterion << " [" << o.id << "] "
            << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << "\n";
  }
  write_text_file(outpath(cfg, cfg.experiment_id + "_summary.txt"),
                  summary.str());
  write_meta(cfg);
  return outcomes;
}

std::vector<CriterionOutcome> run_all_experiments(std::uint64_t seed,
                                                  const std::string& out_dir) {
  std::vector<CriterionOutcome> all;
  for (const std::string& id : experiment_ids()) {
    RunConfig cfg{id, seed, out_dir};
    std::vector<CriterionOutcome> outcomes = run_experiment(cfg);
    all.insert(all.end(), outcomes.begin(), outcomes.end());
  }
  return all;
}

}  // namespace unifinsler
