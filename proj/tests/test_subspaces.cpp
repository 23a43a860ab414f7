#include <doctest.h>

#include <cmath>
#include <numbers>

#include "unifinsler/random.hpp"
#include "unifinsler/subspaces.hpp"

using namespace unifinsler;

namespace {

constexpr double kPi = std::numbers::pi;

Unitary diag_u(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, a);
  m(1, 1) = std::polar(1.0, b);
  return Unitary(m);
}

SkewHermitian random_real_antisymmetric(Rng& rng, Eigen::Index n,
                                        double norm) {
  ComplexMatrix g = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = Complex(rng.normal(), 0.0);
  }
  ComplexMatrix x = (g - g.adjoint()) / 2.0;
  const double s = op_norm(x);
  if (s > 0) x *= norm / s;
  return SkewHermitian(x);
}

}  // namespace

TEST_CASE("member: special unitary") {
  const SubspaceSpec su2 = SubspaceSpec::special_unitary(2);
  CHECK(member(su2, Unitary::identity(2)).member);
  CHECK(member(su2, Unitary::identity(2)).residual == doctest::Approx(0.0));
  CHECK(su2.length_parameter() == doctest::Approx(kPi));
  CHECK(SubspaceSpec::special_unitary(3).length_parameter() ==
        doctest::Approx(2.0 * kPi / 3.0));
  CHECK(SubspaceSpec::special_unitary(5).length_parameter() ==
        doctest::Approx(2.0 * kPi / 5.0));

  // |det - 1| = |e^{i pi/2} - 1| = sqrt(2).
  const MembershipResult bad = member(su2, diag_u(kPi / 2.0, 0.0));
  CHECK_FALSE(bad.member);
  CHECK(bad.residual == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("member: grassmannian and projections") {
  const SubspaceSpec gr13 = SubspaceSpec::grassmannian_rank(3, 1);
  const Unitary ep = ProjectionPoint::coordinate(3, 0).symmetry();
  CHECK(member(gr13, ep).member);
  CHECK_FALSE(member(gr13, Unitary::identity(3)).member);  // rank 0, not 1

  const SubspaceSpec gr_s = SubspaceSpec::grassmannian_trace(4, 0.5);
  Rng rng(41);
  CHECK(member(gr_s, random_symmetry(rng, 4, 2)).member);
  CHECK_FALSE(member(gr_s, random_symmetry(rng, 4, 1)).member);

  const ProjectionPoint p = ProjectionPoint::coordinate(3, 2);
  CHECK(p.rank == 1);
  const ProjectionPoint back = ProjectionPoint::from_symmetry(p.symmetry());
  CHECK(op_norm(back.p - p.p) <= 1e-12);
  CHECK_THROWS_AS(
      ProjectionPoint::from_matrix(0.5 * ComplexMatrix::Identity(2, 2)),
      NotProjection);
}

TEST_CASE("member: orthogonal, fixed points, balls, subgroup oracle") {
  Rng rng(42);
  const SubspaceSpec oj = SubspaceSpec::orthogonal(3);
  const Unitary rot = exp_skew(random_real_antisymmetric(rng, 3, 1.0));
  CHECK(member(oj, rot).member);
  const Unitary phase(ComplexMatrix::Identity(3, 3) * std::polar(1.0, 0.4));
  CHECK_FALSE(member(oj, phase).member);

  // Fixed points of conjugation by the cyclic shift: circulant unitaries.
  ComplexMatrix pm = ComplexMatrix::Zero(3, 3);
  pm(1, 0) = pm(2, 1) = pm(0, 2) = Complex(1.0, 0.0);
  const Unitary p(pm);
  PairAction conj{{p}, {p}};
  const SubspaceSpec fps = SubspaceSpec::fixed_point_set(conj);
  const ComplexMatrix circulant_dir =
      0.3 * (pm - pm.adjoint()) +
      Complex(0.0, 0.2) * (pm + pm.adjoint());
  const Unitary circ = exp_skew(SkewHermitian(circulant_dir));
  CHECK(member(fps, circ).member);
  CHECK_FALSE(member(fps, exp_skew(random_skew(rng, 3, 0.9))).member);

  const SubspaceSpec balls = SubspaceSpec::ball_intersection(
      {BallSpec::dinf(Unitary::identity(2), 0.5)});
  CHECK(member(balls, diag_u(0.3, -0.2)).member);
  const MembershipResult outside = member(balls, diag_u(1.2, 0.0));
  CHECK_FALSE(outside.member);
  CHECK(outside.residual == doctest::Approx(0.7));

  const SubspaceSpec diag_group = SubspaceSpec::subgroup(
      2,
      [](const Unitary& u) {
        return std::max(std::abs(u.mat()(0, 1)), std::abs(u.mat()(1, 0)));
      },
      kPi);
  CHECK(member(diag_group, diag_u(0.7, 2.0)).member);
  CHECK_FALSE(member(diag_group, exp_skew(random_skew(rng, 2, 1.0))).member);

  const SubspaceSpec hull = SubspaceSpec::convex_hull(
      {Unitary::identity(2)}, Unitary::identity(2), 1.0);
  CHECK_THROWS_AS(member(hull, Unitary::identity(2)), UnsupportedKind);
}

TEST_CASE("geodesic closure: special unitary within the length parameter") {
  const SubspaceSpec su3 = SubspaceSpec::special_unitary(3);
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  const double theta = 0.6;  // < 2 pi / 3
  d(0, 0) = Complex(0.0, theta);
  d(1, 1) = Complex(0.0, -theta);
  const Unitary v = exp_skew(SkewHermitian(d));
  const ClosureReport rep =
      geodesic_closure_check(su3, Unitary::identity(3), v, 33);
  CHECK(rep.length_ok);
  CHECK(rep.max_residual <= 1e-9);
}

TEST_CASE("geodesic closure: SU(2) antipodal counterexample") {
  const SubspaceSpec su2 = SubspaceSpec::special_unitary(2);
  const Unitary id2 = Unitary::identity(2);
  const Unitary minus(-ComplexMatrix::Identity(2, 2));
  CHECK_THROWS_AS(geodesic_closure_check(su2, id2, minus, 17),
                  LengthParameterExceeded);

  const ClosureReport forced =
      geodesic_closure_check(su2, id2, minus, 17, /*force=*/true);
  CHECK_FALSE(forced.length_ok);
  // log(-id) = i pi id, so det(eval(t)) = e^{2 pi i t}: residual 2 at t=1/2.
  CHECK(forced.max_residual >= 1.0);

  CHECK_THROWS_AS(
      geodesic_closure_check(su2, diag_u(0.4, 0.0), id2, 9),
      NotInSubspace);
}

TEST_CASE("geodesic closure: random members per kind") {
  Rng rng(43);

  const SubspaceSpec full3 = SubspaceSpec::full(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Unitary u = random_unitary(rng, 3, 2.0);
    const Unitary v = random_unitary(rng, 3, 2.0);
    if (d_inf(u, v) >= full3.length_parameter()) continue;
    CHECK(geodesic_closure_check(full3, u, v, 9).max_residual <= 1e-8);
  }

  const SubspaceSpec su4 = SubspaceSpec::special_unitary(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Unitary u = exp_skew(random_traceless_skew(rng, 4, 0.8));
    const Unitary v =
        u * exp_skew(random_traceless_skew(rng, 4,
                                           rng.uniform(0.05, 0.95 * kPi / 2)));
    CHECK(geodesic_closure_check(su4, u, v, 17).max_residual <= 1e-8);
  }

  const SubspaceSpec oj = SubspaceSpec::orthogonal(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Unitary u = exp_skew(random_real_antisymmetric(rng, 4, 1.2));
    const Unitary v = exp_skew(random_real_antisymmetric(rng, 4, 1.2));
    if (d_inf(u, v) >= kPi - 1e-6) continue;
    CHECK(geodesic_closure_check(oj, u, v, 17).max_residual <= 1e-8);
  }

  const SubspaceSpec gr = SubspaceSpec::grassmannian_rank(4, 2);
  for (int trial = 0; trial < 5; ++trial) {
    const Unitary u = random_symmetry(rng, 4, 2);
    const Unitary c = exp_skew(random_skew(rng, 4, 0.6));
    const Unitary v = trusted_unitary(c.mat() * u.mat() * c.mat().adjoint());
    const ClosureReport rep = geodesic_closure_check(gr, u, v, 17);
    CHECK(rep.max_residual <= 1e-8);
  }

  // Ball intersections are geodesic for radii below pi/2.
  const Unitary w2 = exp_skew(random_skew(rng, 3, 0.3));
  const SubspaceSpec balls = SubspaceSpec::ball_intersection(
      {BallSpec::dinf(Unitary::identity(3), 0.8), BallSpec::dinf(w2, 0.8)});
  for (int trial = 0; trial < 5; ++trial) {
    const Unitary u = exp_skew(random_skew(rng, 3, rng.uniform(0.0, 0.4)));
    const Unitary v = exp_skew(random_skew(rng, 3, rng.uniform(0.0, 0.4)));
    CHECK(geodesic_closure_check(balls, u, v, 17).max_residual <= 1e-8);
  }

  // Diagonal subgroup via oracle.
  const SubspaceSpec diag_group = SubspaceSpec::subgroup(
      2,
      [](const Unitary& u) {
        return std::max(std::abs(u.mat()(0, 1)), std::abs(u.mat()(1, 0)));
      },
      kPi);
  const ClosureReport rep = geodesic_closure_check(
      diag_group, diag_u(0.3, -1.0), diag_u(-0.8, 0.4), 17);
  CHECK(rep.max_residual <= 1e-8);

  // Fixed-point set of conjugation by the cyclic shift: geodesics between
  // commuting circulants stay pointwise fixed.
  ComplexMatrix pm = ComplexMatrix::Zero(3, 3);
  pm(1, 0) = pm(2, 1) = pm(0, 2) = Complex(1.0, 0.0);
  const Unitary p(pm);
  const SubspaceSpec fps = SubspaceSpec::fixed_point_set(PairAction{{p}, {p}});
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix d1 =
        rng.uniform(-0.6, 0.6) * (pm - pm.adjoint()) +
        Complex(0.0, rng.uniform(-0.4, 0.4)) * (pm + pm.adjoint());
    const ComplexMatrix d2m =
        rng.uniform(-0.6, 0.6) * (pm - pm.adjoint()) +
        Complex(0.0, rng.uniform(-0.4, 0.4)) * (pm + pm.adjoint());
    const Unitary u = exp_skew(SkewHermitian(d1));
    const Unitary v = exp_skew(SkewHermitian(d2m));
    if (d_inf(u, v) >= kPi - 1e-6) continue;
    CHECK(geodesic_closure_check(fps, u, v, 17).max_residual <= 1e-8);
  }
}

TEST_CASE("convex hull sampling") {
  const Unitary id2 = Unitary::identity(2);

  // Singleton seed set: every sample is the seed itself.
  const std::vector<Unitary> single =
      convex_hull_sample({id2}, id2, 0.5, 2, 10, 99);
  CHECK(single.size() == 10);
  for (const Unitary& s : single) {
    CHECK(op_norm(s.mat() - id2.mat()) <= 1e-12);
  }

  // Commuting seeds: all hull points stay diagonal.
  const Unitary v = diag_u(0.8, -0.8);
  for (const Unitary& s :
       convex_hull_sample({id2, v}, id2, 0.9, 1, 25, 7)) {
    CHECK(std::abs(s.mat()(0, 1)) <= 1e-12);
    CHECK(std::abs(s.mat()(1, 0)) <= 1e-12);
  }

  // Random seeds inside B_inf[id, 1.0]: samples stay in the ball.
  Rng rng(44);
  std::vector<Unitary> seeds;
  for (int i = 0; i < 3; ++i) {
    seeds.push_back(exp_skew(random_skew(rng, 3, rng.uniform(0.1, 1.0))));
  }
  const Unitary id3 = Unitary::identity(3);
  const std::vector<Unitary> samples =
      convex_hull_sample(seeds, id3, 1.0, 3, 500, 123);
  CHECK(samples.size() == 500);
  for (const Unitary& s : samples) {
    CHECK(d_inf(s, id3) <= 1.0 + 1e-8);
    CHECK(in_ball(s, BallSpec::dinf(id3, 1.0)).margin >= -1e-9);
  }

  // Reproducibility from the seed.
  const std::vector<Unitary> again =
      convex_hull_sample(seeds, id3, 1.0, 3, 500, 123);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK((samples[i].mat() - again[i].mat()).norm() == 0.0);
  }

  // A seed outside the stated ball is rejected.
  const Unitary far = exp_skew(random_skew(rng, 3, 1.3));
  CHECK_THROWS_AS(convex_hull_sample({id3, far}, id3, 1.0, 1, 5, 1),
                  RadiusViolation);
  CHECK_THROWS_AS(convex_hull_sample(seeds, id3, kPi / 2.0, 1, 5, 1),
                  RadiusViolation);
}
