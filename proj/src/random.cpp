#include "unifinsler/random.hpp"

namespace unifinsler {

ComplexMatrix random_complex_gaussian(Rng& rng, Eigen::Index n) {
  ComplexMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      g(i, j) = Complex(rng.normal(), rng.normal());
    }
  }
  return g;
}

SkewHermitian random_skew(Rng& rng, Eigen::Index n, double opnorm_target) {
  if (opnorm_target <= 0.0) return SkewHermitian::zero(n);
  const ComplexMatrix g = random_complex_gaussian(rng, n);
  ComplexMatrix x = (g - g.adjoint()) / 2.0;
  const double norm = op_norm(x);
  if (norm <= 0.0) return SkewHermitian::zero(n);
  x *= opnorm_target / norm;
  return SkewHermitian(x);
}

SkewHermitian random_traceless_skew(Rng& rng, Eigen::Index n,
                                    double opnorm_target) {
  if (opnorm_target <= 0.0) return SkewHermitian::zero(n);
  const ComplexMatrix g = random_complex_gaussian(rng, n);
  ComplexMatrix x = (g - g.adjoint()) / 2.0;
  x -= ComplexMatrix::Identity(n, n) * (x.trace() / static_cast<double>(n));
  const double norm = op_norm(x);
  if (norm <= 0.0) return SkewHermitian::zero(n);
  x *= opnorm_target / norm;
  return SkewHermitian(x);
}

Unitary random_unitary(Rng& rng, Eigen::Index n, double max_norm) {
  const double r = rng.uniform(0.0, max_norm);
  return exp_skew(random_skew(rng, n, r));
}

Unitary random_in_ball(Rng& rng, const Unitary& w, double radius) {
  const double r = rng.uniform(0.0, radius);
  return w * exp_skew(random_skew(rng, w.dim(), r));
}

Unitary random_symmetry(Rng& rng, Eigen::Index n, Eigen::Index rank) {
  const Unitary v = random_unitary(rng, n, 3.0);
  ComplexMatrix d = ComplexMatrix::Identity(n, n);
  for (Eigen::Index i = 0; i < rank; ++i) d(i, i) = Complex(-1.0, 0.0);
  return trusted_unitary(v.mat() * d * v.mat().adjoint());
}

}  // namespace unifinsler
