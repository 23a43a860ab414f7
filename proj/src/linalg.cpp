#include "unifinsler/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <numbers>
#include <string>
#include <vector>

namespace unifinsler {

namespace {

constexpr double kPi = std::numbers::pi;

// ||a||_inf <= ||a||_F <= sqrt(n) ||a||_inf, so the Frobenius norm settles
// most tolerance checks without an eigensolve.
bool op_norm_within(const ComplexMatrix& a, double bound) {
  const double fro = a.norm();
  if (fro <= bound) return true;
  if (fro > bound * std::sqrt(static_cast<double>(std::max<Eigen::Index>(
                        a.rows(), 1)))) {
    return false;
  }
  return op_norm(a) <= bound;
}

}  // namespace

Tolerances Tolerances::scaled(double s) const {
  Tolerances t = *this;
  t.unit_tol *= s;
  t.skew_tol *= s;
  t.eig_tol *= s;
  t.normal_tol *= s;
  t.branch_tol *= s;
  t.fix_tol *= s;
  return t;
}

const Tolerances& Tolerances::global() {
  static const Tolerances instance = [] {
    Tolerances t;
    if (const char* env = std::getenv("UNIFINSLER_TOL_SCALE")) {
      const double s = std::atof(env);
      if (s > 0) t = t.scaled(s);
    }
    return t;
  }();
  return instance;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

void require_square_finite(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidMatrix(std::string(what) + ": matrix must be square and nonempty");
  }
  if (!all_finite(m)) {
    throw InvalidMatrix(std::string(what) + ": matrix has non-finite entries");
  }
}

namespace detail {

void jacobi_hermitian(const ComplexMatrix& a, RealVector& evals,
                      ComplexMatrix& vecs, int max_sweeps) {
  const Eigen::Index n = a.rows();
  ComplexMatrix w = (a + a.adjoint()) / 2.0;  // enforce exact Hermiticity
  vecs = ComplexMatrix::Identity(n, n);

  const double scale = std::max(1.0, w.norm());
  const double off_target = 1e-15 * scale * static_cast<double>(n);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        off = std::max(off, std::abs(w(p, q)));
      }
    }
    if (off <= off_target) {
      evals.resize(n);
      for (Eigen::Index i = 0; i < n; ++i) evals[i] = w(i, i).real();
      // Sort ascending, carrying eigenvector columns along.
      std::vector<Eigen::Index> idx(n);
      for (Eigen::Index i = 0; i < n; ++i) idx[i] = i;
      std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index i, Eigen::Index j) {
        return evals[i] < evals[j];
      });
      RealVector sorted(n);
      ComplexMatrix v_sorted(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        sorted[i] = evals[idx[i]];
        v_sorted.col(i) = vecs.col(idx[i]);
      }
      evals = std::move(sorted);
      vecs = std::move(v_sorted);
      return;
    }

    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = w(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-18 * scale) continue;

        // Absorb the phase so the 2x2 block is real symmetric, then apply
        // the classical Jacobi rotation with the smaller-angle root.
        const Complex phase = apq / r;
        const double app = w(p, p).real();
        const double aqq = w(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Plane rotation G: G(p,p)=c, G(p,q)=s, G(q,p)=-s*conj(phase)...
        // expressed via column updates of W (right) and rows (left, adjoint).
        const Complex gpp(c, 0.0);
        const Complex gpq(s, 0.0);
        const Complex gqp = -s * std::conj(phase);
        const Complex gqq = c * std::conj(phase);

        // W <- G^H W G, touching only rows/cols p and q.
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex wip = w(i, p);
          const Complex wiq = w(i, q);
          w(i, p) = wip * gpp + wiq * gqp;
          w(i, q) = wip * gpq + wiq * gqq;
        }
        for (Eigen::Index j = 0; j < n; ++j) {
          const Complex wpj = w(p, j);
          const Complex wqj = w(q, j);
          w(p, j) = std::conj(gpp) * wpj + std::conj(gqp) * wqj;
          w(q, j) = std::conj(gpq) * wpj + std::conj(gqq) * wqj;
        }
        w(p, q) = Complex(0, 0);
        w(q, p) = Complex(0, 0);

        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex vip = vecs(i, p);
          const Complex viq = vecs(i, q);
          vecs(i, p) = vip * gpp + viq * gqp;
          vecs(i, q) = vip * gpq + viq * gqq;
        }
      }
    }
  }
  throw NoConvergence("jacobi_hermitian: exceeded max sweeps");
}

}  // namespace detail

double op_norm(const ComplexMatrix& m) {
  require_square_finite(m, "op_norm");
  const Eigen::Index n = m.rows();
  if (n == 1) return std::abs(m(0, 0));
  const ComplexMatrix gram = m.adjoint() * m;
  RealVector evals;
  ComplexMatrix vecs;
  detail::jacobi_hermitian(gram, evals, vecs);
  return std::sqrt(std::max(0.0, evals[n - 1]));
}

double schatten_norm(const ComplexMatrix& m, int p, TraceConvention conv) {
  require_square_finite(m, "schatten_norm");
  if (p < 2 || p % 2 != 0) {
    throw InvalidP("schatten_norm: p must be even and >= 2, got " +
                   std::to_string(p));
  }
  const Eigen::Index n = m.rows();
  ComplexMatrix gram = m.adjoint() * m;
  ComplexMatrix power = gram;
  for (int k = 1; k < p / 2; ++k) power = power * gram;
  double tr = power.trace().real();
  if (conv == TraceConvention::normalized) tr /= static_cast<double>(n);
  return std::pow(std::max(0.0, tr), 1.0 / static_cast<double>(p));
}

SkewHermitian::SkewHermitian(const ComplexMatrix& m, const Tolerances& tol) {
  require_square_finite(m, "SkewHermitian");
  const ComplexMatrix defect = m + m.adjoint();
  // Cheap sufficient check first: ||defect||_inf <= ||defect||_F and
  // ||m||_inf >= ||m||_F / sqrt(n).
  const double root_n = std::sqrt(static_cast<double>(m.rows()));
  const bool fast_ok =
      defect.norm() <= tol.skew_tol * std::max(m.norm() / root_n, 1.0);
  if (!fast_ok &&
      !op_norm_within(defect, tol.skew_tol * std::max(op_norm(m), 1.0))) {
    throw NotSkewHermitian("SkewHermitian: ||m + m*|| exceeds skew_tol * ||m||");
  }
  mat_ = (m - m.adjoint()) / 2.0;
}

SkewHermitian SkewHermitian::zero(Eigen::Index n) {
  return SkewHermitian(ComplexMatrix::Zero(n, n));
}

SkewHermitian SkewHermitian::scaled(double s) const {
  return SkewHermitian(mat_ * Complex(s, 0.0));
}

Unitary::Unitary(ComplexMatrix m, const Tolerances& tol) : mat_(std::move(m)) {
  require_square_finite(mat_, "Unitary");
  const Eigen::Index n = mat_.rows();
  const ComplexMatrix defect =
      mat_.adjoint() * mat_ - ComplexMatrix::Identity(n, n);
  if (!op_norm_within(defect, tol.unit_tol)) {
    throw NotUnitary("Unitary: ||u*u - id|| exceeds unit_tol");
  }
}

Unitary Unitary::identity(Eigen::Index n) {
  return Unitary(ComplexMatrix::Identity(n, n));
}

Unitary Unitary::adjoint() const { return trusted_unitary(mat_.adjoint()); }

Unitary Unitary::operator*(const Unitary& rhs) const {
  if (dim() != rhs.dim()) {
    throw DimensionMismatch("Unitary product: dimension mismatch");
  }
  return trusted_unitary(mat_ * rhs.mat_);
}

double Unitary::chord_norm(const Unitary& u, const Unitary& v) {
  if (u.dim() != v.dim()) {
    throw DimensionMismatch("chord_norm: dimension mismatch");
  }
  return op_norm(u.mat() - v.mat());
}

Unitary trusted_unitary(ComplexMatrix m) {
  // Products of validated unitaries drift by a few ulps only; a relaxed
  // check catches real mistakes without paying an eigensolve in hot loops.
  const Eigen::Index n = m.rows();
  const double fro_defect =
      (m.adjoint() * m - ComplexMatrix::Identity(n, n)).norm();
  if (fro_defect > 1e-8 * std::sqrt(static_cast<double>(n))) {
    throw NotUnitary("trusted_unitary: matrix is not numerically unitary");
  }
  return Unitary(std::move(m), Unitary::trusted_tag{});
}

namespace {

struct JointDiag {
  ComplexMatrix vecs;
  double residual = std::numeric_limits<double>::infinity();
};

// Diagonalize h by Jacobi, then diagonalize k restricted to each eigenvalue
// cluster of h. cluster_tol decides which h-eigenvalues count as degenerate.
JointDiag two_stage_pass(const ComplexMatrix& m, const ComplexMatrix& h,
                         const ComplexMatrix& k, double cluster_tol) {
  const Eigen::Index n = m.rows();
  RealVector alpha;
  ComplexMatrix v;
  detail::jacobi_hermitian(h, alpha, v);

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && alpha[end] - alpha[end - 1] <= cluster_tol) ++end;
    const Eigen::Index size = end - start;
    if (size > 1) {
      const ComplexMatrix vc = v.middleCols(start, size);
      const ComplexMatrix block = vc.adjoint() * k * vc;
      RealVector beta;
      ComplexMatrix w;
      detail::jacobi_hermitian(block, beta, w);
      v.middleCols(start, size) = vc * w;
    }
    start = end;
  }

  JointDiag out;
  ComplexMatrix d = v.adjoint() * m * v;
  double off = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j) off += std::norm(d(i, j));
    }
  }
  out.vecs = std::move(v);
  out.residual = std::sqrt(off);
  return out;
}

}  // namespace

SpectralDecomposition spectral_normal(const ComplexMatrix& m,
                                      const Tolerances& tol,
                                      NormalityCheck check) {
  require_square_finite(m, "spectral_normal");
  const Eigen::Index n = m.rows();
  const double scale = std::max(1.0, m.norm());

  if (check == NormalityCheck::verify) {
    const ComplexMatrix comm = m * m.adjoint() - m.adjoint() * m;
    if (!op_norm_within(comm, tol.normal_tol * scale * scale)) {
      throw NotNormal("spectral_normal: matrix is not normal within normal_tol");
    }
  }

  SpectralDecomposition out;
  if (n == 1) {
    out.eigenvalues = ComplexVector::Constant(1, m(0, 0));
    out.eigenvectors = ComplexMatrix::Identity(1, 1);
    return out;
  }

  const ComplexMatrix h = (m + m.adjoint()) / 2.0;
  const ComplexMatrix k = (m - m.adjoint()) / Complex(0.0, 2.0);

  // Clustering that is too fine leaves k coupled across h-eigenvectors that
  // the rounded h could not separate; too coarse perturbs h when k rotates
  // inside a cluster. Beyond the tolerance ladder, retry on rotated
  // combinations (c h + s k, -s h + c k): a pair of eigenvalues that is
  // nearly degenerate in one rotation separates in another unless it is
  // jointly degenerate, in which case any basis of the joint eigenspace
  // works and the residual is small anyway.
  const double base = 64.0 * static_cast<double>(n) *
                      std::numeric_limits<double>::epsilon() * scale;
  const double early_exit = 1e-14 * scale * static_cast<double>(n);
  JointDiag best;
  for (const double phi : {0.0, 0.7390851332, 1.8545904361, 0.3183098862}) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const ComplexMatrix h_rot = c * h + s * k;
    const ComplexMatrix k_rot = -s * h + c * k;
    for (const double factor : {1.0, 1e2}) {
      JointDiag cand = two_stage_pass(m, h_rot, k_rot, base * factor);
      if (cand.residual < best.residual) best = std::move(cand);
      if (best.residual <= early_exit) break;
    }
    if (best.residual <= early_exit) break;
  }

  const double target = tol.eig_tol * static_cast<double>(n) * scale;
  if (!(best.residual <= target)) {
    std::ostringstream msg;
    msg << "spectral_normal: joint diagonalization residual "
        << best.residual << " exceeds " << target;
    throw NoConvergence(msg.str());
  }

  ComplexVector evals(n);
  const ComplexMatrix d = best.vecs.adjoint() * m * best.vecs;
  for (Eigen::Index i = 0; i < n; ++i) evals[i] = d(i, i);

  // Deterministic order: principal angle in (-pi, pi], ties by modulus.
  std::vector<Eigen::Index> idx(n);
  for (Eigen::Index i = 0; i < n; ++i) idx[i] = i;
  auto key = [&](Eigen::Index i) {
    double ang = std::atan2(evals[i].imag(), evals[i].real());
    if (ang <= -kPi) ang = kPi;
    return std::pair<double, double>(ang, std::abs(evals[i]));
  };
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return key(a) < key(b);
  });

  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues[i] = evals[idx[i]];
    out.eigenvectors.col(i) = best.vecs.col(idx[i]);
  }
  return out;
}

Unitary exp_skew(const SkewHermitian& x, const Tolerances& tol) {
  const SpectralDecomposition s =
      spectral_normal(x.mat(), tol, NormalityCheck::assume);
  const Eigen::Index n = x.dim();
  ComplexMatrix scaled = s.eigenvectors;
  for (Eigen::Index j = 0; j < n; ++j) {
    // Eigenvalues of a skew-Hermitian matrix are i*theta; drop the rounding
    // real part so the exponential lands exactly on the unit circle.
    const double theta = s.eigenvalues[j].imag();
    scaled.col(j) *= Complex(std::cos(theta), std::sin(theta));
  }
  return trusted_unitary(scaled * s.eigenvectors.adjoint());
}

LogResult log_unitary(const Unitary& u, const Tolerances& tol) {
  const SpectralDecomposition s =
      spectral_normal(u.mat(), tol, NormalityCheck::assume);
  const Eigen::Index n = u.dim();
  bool ambiguous = false;
  ComplexMatrix scaled = s.eigenvectors;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex lambda = s.eigenvalues[j];
    double theta = std::atan2(lambda.imag(), lambda.real());
    if (std::abs(lambda + Complex(1.0, 0.0)) <= tol.branch_tol) {
      theta = kPi;
      ambiguous = true;
    }
    scaled.col(j) *= Complex(0.0, theta);
  }
  return LogResult{SkewHermitian(scaled * s.eigenvectors.adjoint(), tol),
                   ambiguous};
}

double trace_inner(const SkewHermitian& x, const SkewHermitian& y,
                   TraceConvention conv) {
  if (x.dim() != y.dim()) {
    throw DimensionMismatch("trace_inner: dimension mismatch");
  }
  double v = (y.mat().adjoint() * x.mat()).trace().real();
  if (conv == TraceConvention::normalized) v /= static_cast<double>(x.dim());
  return v;
}

}  // namespace unifinsler
