#include "unifinsler/center.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "unifinsler/random.hpp"

namespace unifinsler {

namespace {

constexpr double kPi = std::numbers::pi;

double d2_squared(const Unitary& u, const Unitary& v, TraceConvention conv,
                  const Tolerances& tols) {
  const RealVector angles = relative_angles(u, v, tols);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < angles.size(); ++i) {
    sum += angles[i] * angles[i];
  }
  if (conv == TraceConvention::normalized) {
    sum /= static_cast<double>(angles.size());
  }
  return sum;
}

bool feasible(const std::vector<Unitary>& sites, const SubspaceSpec& subspace,
              double radius, const Unitary& u, const CenterOptions& opt,
              const Tolerances& tols) {
  if (member(subspace, u, opt.member_tol, tols).residual > opt.member_tol) {
    return false;
  }
  for (const Unitary& a : sites) {
    if (in_ball(u, BallSpec::dinf(a, radius), tols).margin <
        opt.feasibility_margin) {
      return false;
    }
  }
  return true;
}

// Newton polar step; removes the unitarity drift of long product chains.
Unitary reunitarize(const Unitary& u) {
  const Eigen::Index n = u.dim();
  const ComplexMatrix m = u.mat();
  return trusted_unitary(m * (3.0 * ComplexMatrix::Identity(n, n) -
                              m.adjoint() * m) /
                         2.0);
}

}  // namespace

double f_A(const std::vector<Unitary>& sites, const Unitary& u,
           TraceConvention conv) {
  return farthest_site(sites, u, conv).value;
}

FarthestSite farthest_site(const std::vector<Unitary>& sites, const Unitary& u,
                           TraceConvention conv) {
  if (sites.empty()) throw ConfigError("farthest_site: empty site list");
  FarthestSite out;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const double v = d2_squared(u, sites[i], conv, Tolerances::global());
    if (v > out.value) {
      out.value = v;
      out.index = i;
    }
  }
  return out;
}

double circumradius_upper(const std::vector<Unitary>& sites,
                          const SubspaceSpec& subspace, const Unitary& c,
                          const Tolerances& tols) {
  if (sites.empty()) throw ConfigError("circumradius_upper: empty site list");
  if (member(subspace, c, 1e-8, tols).residual > 1e-8) {
    throw NotInSubspace("circumradius_upper: candidate is not in M");
  }
  double bound = 0.0;
  for (const Unitary& a : sites) bound = std::max(bound, d_inf(a, c, tols));
  return bound;
}

WitnessResult circumradius_witness(const std::vector<Unitary>& sites,
                                   const SubspaceSpec& subspace,
                                   int pull_iters, const Tolerances& tols) {
  if (sites.empty()) throw ConfigError("circumradius_witness: empty sites");
  const double member_tol = 1e-8;

  auto max_dinf = [&](const Unitary& c) {
    double m = 0.0;
    for (const Unitary& a : sites) m = std::max(m, d_inf(a, c, tols));
    return m;
  };

  // Candidate starts: a site, the mean-of-logs point seen from that site,
  // and the midpoint of the farthest pair. Keep whichever is in M.
  std::vector<Unitary> candidates;
  candidates.push_back(sites.front());
  {
    const Unitary& a0 = sites.front();
    ComplexMatrix mean = ComplexMatrix::Zero(a0.dim(), a0.dim());
    for (const Unitary& a : sites) {
      mean += log_unitary(trusted_unitary(a0.mat().adjoint() * a.mat()), tols)
                  .tangent.mat();
    }
    mean /= static_cast<double>(sites.size());
    candidates.push_back(a0 * exp_skew(SkewHermitian(mean, tols), tols));
  }
  {
    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      for (std::size_t j = i + 1; j < sites.size(); ++j) {
        const double d = d_inf(sites[i], sites[j], tols);
        if (d > best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (best > 0.0 && best < kPi - tols.branch_tol) {
      candidates.push_back(
          geodesic_between(sites[bi], sites[bj], tols).eval(0.5));
    }
  }

  WitnessResult out{sites.front(), max_dinf(sites.front())};
  for (const Unitary& c : candidates) {
    if (member(subspace, c, member_tol, tols).residual > member_tol) continue;
    const double b = max_dinf(c);
    if (b < out.bound) out = WitnessResult{c, b};
  }

  // Farthest-point pulls with strict decrease of the max distance.
  Unitary c = out.witness;
  double bound = out.bound;
  for (int k = 0; k < pull_iters; ++k) {
    std::size_t far = 0;
    double fd = -1.0;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      const double d = d_inf(c, sites[i], tols);
      if (d > fd) {
        fd = d;
        far = i;
      }
    }
    if (fd >= kPi - tols.branch_tol) break;  // antipodal: no usable pull
    const Geodesic pull = geodesic_between(c, sites[far], tols);
    bool accepted = false;
    double eta = 1.0 / static_cast<double>(k + 2);
    for (int j = 0; j < 20; ++j, eta /= 2.0) {
      const Unitary cand = pull.eval(eta);
      if (member(subspace, cand, member_tol, tols).residual > member_tol) {
        continue;
      }
      const double b = max_dinf(cand);
      if (b < bound - 1e-15) {
        c = cand;
        bound = b;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (bound < out.bound) out = WitnessResult{c, bound};
  return out;
}

CenterResult solve_center(const CenterProblem& problem,
                          const Tolerances& tols) {
  const std::vector<Unitary>& sites = problem.sites;
  if (sites.empty()) throw ConfigError("solve_center: empty site list");
  const Eigen::Index n = sites.front().dim();
  for (const Unitary& a : sites) {
    if (a.dim() != n) throw DimensionMismatch("solve_center: site dims");
  }
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      if (d_inf(sites[i], sites[j], tols) >= kPi - tols.branch_tol) {
        throw ConfigError("solve_center: sites must stay pairwise within pi");
      }
    }
  }
  const double cap = std::min(kPi, problem.subspace.length_parameter()) / 2.0;
  if (!(problem.radius > 0.0) || !(problem.radius < cap)) {
    throw ConfigError(
        "solve_center: radius must satisfy 0 < r < min(pi, length)/2");
  }
  const CenterOptions& opt = problem.options;
  if (!feasible(sites, problem.subspace, problem.radius, problem.start, opt,
                tols)) {
    throw InfeasibleStart(
        "solve_center: start violates the feasible set (subspace or balls)");
  }

  Unitary u = problem.start;
  double f = f_A(sites, u, problem.conv);
  CenterResult result;
  result.center = u;
  if (opt.record_trace) result.trace.push_back({0, f, 0.0});

  int accepted_steps = 0;
  double last_move = 0.0;
  int k = 0;
  for (; k < opt.max_iters; ++k) {
    const FarthestSite far = farthest_site(sites, u, problem.conv);
    if (far.value <= 0.0) break;  // already on every site

    // Pull toward the farthest site; on rejection retry along the averaged
    // direction of the near-active sites (ties make the single-site pull a
    // non-descent direction).
    bool accepted = false;
    double move = 0.0;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      ComplexMatrix dir;
      if (attempt == 0) {
        dir = log_unitary(trusted_unitary(u.mat().adjoint() *
                                          sites[far.index].mat()),
                          tols)
                  .tangent.mat();
      } else {
        dir = ComplexMatrix::Zero(n, n);
        int active = 0;
        for (const Unitary& a : sites) {
          const double v = d2_squared(u, a, problem.conv, tols);
          if (v >= far.value * (1.0 - 1e-3)) {
            dir += log_unitary(trusted_unitary(u.mat().adjoint() * a.mat()),
                               tols)
                       .tangent.mat();
            ++active;
          }
        }
        if (active <= 1) break;  // same direction as attempt 0
        dir /= static_cast<double>(active);
      }
      const SkewHermitian x(dir, tols);
      const Geodesic ray(u, x, tols);
      const double step_scale = ray.speed_2(problem.conv);
      if (step_scale <= 0.0) break;

      double eta = opt.step_rule == CenterOptions::StepRule::fixed
                       ? opt.fixed_eta
                       : 1.0 / static_cast<double>(k + 2);
      for (int j = 0; j < opt.max_backtracks; ++j, eta /= 2.0) {
        const Unitary cand = ray.eval(eta);
        if (!feasible(sites, problem.subspace, problem.radius, cand, opt,
                      tols)) {
          continue;
        }
        const double f_cand = f_A(sites, cand, problem.conv);
        if (f_cand < f - 1e-16 * std::max(1.0, f)) {
          u = cand;
          f = f_cand;
          move = eta * step_scale;
          accepted = true;
          ++accepted_steps;
          break;
        }
      }
    }

    if (opt.record_trace) result.trace.push_back({k + 1, f, move});
    if (!accepted) {
      last_move = 0.0;
      ++k;
      break;
    }
    last_move = move;
    if (accepted_steps % 128 == 0) u = reunitarize(u);
    if (move < opt.stop_tol) {
      ++k;
      break;
    }
  }

  result.center = u;
  result.value = f;
  result.iterations = k;
  result.max_move_last = last_move;
  result.stalled = (k >= opt.max_iters) && (last_move > opt.stop_tol);

  CenterCertificates cert;
  cert.ball_margins.reserve(sites.size());
  for (const Unitary& a : sites) {
    cert.ball_margins.push_back(
        in_ball(u, BallSpec::dinf(a, problem.radius), tols).margin);
  }
  cert.member_residual = member(problem.subspace, u, opt.member_tol, tols).residual;
  double diam = 0.0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      diam = std::max(diam,
                      d2_squared(sites[i], sites[j], problem.conv, tols));
    }
  }
  cert.f_lower = diam / 4.0;
  cert.lambda = std::sin(2.0 * problem.radius) / (2.0 * problem.radius);
  cert.gap_bound_d2 =
      std::sqrt(std::max(0.0, result.value - cert.f_lower) / cert.lambda);
  result.certificates = cert;
  return result;
}

UniquenessReport verify_uniqueness(const CenterProblem& problem, int restarts,
                                   std::uint64_t seed,
                                   const Tolerances& tols) {
  if (restarts < 1) throw ConfigError("verify_uniqueness: restarts < 1");
  Rng rng(seed);
  UniquenessReport report;
  report.results.reserve(restarts);

  for (int rstart = 0; rstart < restarts; ++rstart) {
    CenterProblem instance = problem;
    if (rstart > 0) {
      // Random feasible start: hop along geodesics toward random sites.
      // Convexity of C keeps every hop feasible and inside M.
      Unitary s = problem.start;
      for (int hop = 0; hop < 2; ++hop) {
        const int pick = rng.uniform_int(
            0, static_cast<int>(problem.sites.size()) - 1);
        const Unitary& a = problem.sites[static_cast<std::size_t>(pick)];
        if (d_inf(s, a, tols) >= kPi - tols.branch_tol) continue;
        const double t = rng.uniform(0.0, 0.5);
        s = geodesic_between(s, a, tols).eval(t);
      }
      instance.start = s;
    }
    report.results.push_back(solve_center(instance, tols));
  }

  for (std::size_t i = 0; i < report.results.size(); ++i) {
    report.gap_bound = std::max(report.gap_bound,
                                2.0 * report.results[i].certificates.gap_bound_d2);
    for (std::size_t j = i + 1; j < report.results.size(); ++j) {
      report.max_pairwise_d2 = std::max(
          report.max_pairwise_d2,
          d_2(report.results[i].center, report.results[j].center, problem.conv));
    }
  }
  return report;
}

}  // namespace unifinsler
