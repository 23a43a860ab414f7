#pragma once

#include <Eigen/Dense>
#include <complex>

#include "unifinsler/errors.hpp"
#include "unifinsler/tolerances.hpp"

namespace unifinsler {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Trace used by the p-norms and inner products: Tr is the plain matrix
// trace, the normalized variant is tau = Tr/n (so tau(id) = 1).
enum class TraceConvention { standard, normalized };

bool all_finite(const ComplexMatrix& m);
void require_square_finite(const ComplexMatrix& m, const char* what);

// Largest singular value.
double op_norm(const ComplexMatrix& m);

// Schatten p-norm (Tr((m* m)^{p/2}))^{1/p}, divided by n^{1/p} under the
// normalized convention. p must be even and >= 2.
double schatten_norm(const ComplexMatrix& m, int p,
                     TraceConvention conv = TraceConvention::standard);

// Tangent vector at the identity: x* = -x. Construction validates
// ||m + m*||_inf <= skew_tol * ||m||_inf and canonicalizes to (m - m*)/2.
class SkewHermitian {
 public:
  explicit SkewHermitian(const ComplexMatrix& m,
                         const Tolerances& tol = Tolerances::global());
  static SkewHermitian zero(Eigen::Index n);

  Eigen::Index dim() const { return mat_.rows(); }
  const ComplexMatrix& mat() const { return mat_; }
  SkewHermitian scaled(double s) const;

 private:
  ComplexMatrix mat_;
};

// Group element: u* u = id within unit_tol.
class Unitary {
 public:
  // Placeholder value (the 1x1 identity) so result structs can be built
  // before their fields are filled in.
  Unitary() : mat_(ComplexMatrix::Identity(1, 1)) {}
  explicit Unitary(ComplexMatrix m,
                   const Tolerances& tol = Tolerances::global());
  static Unitary identity(Eigen::Index n);

  Eigen::Index dim() const { return mat_.rows(); }
  const ComplexMatrix& mat() const { return mat_; }

  Unitary adjoint() const;
  Unitary operator*(const Unitary& rhs) const;

  // ||u - v||_inf; both endpoints of most norm/metric comparisons.
  static double chord_norm(const Unitary& u, const Unitary& v);

 private:
  struct trusted_tag {};
  Unitary(ComplexMatrix m, trusted_tag) : mat_(std::move(m)) {}
  ComplexMatrix mat_;
  friend Unitary trusted_unitary(ComplexMatrix m);
};

// Internal: wraps a matrix known to be unitary up to rounding (products of
// validated unitaries, spectral reconstructions). Still cheap-checked.
Unitary trusted_unitary(ComplexMatrix m);

// Eigen-decomposition of a normal matrix, m = V diag(lambda) V*.
// Eigenvalues are sorted by principal angle in (-pi, pi], ties by modulus.
struct SpectralDecomposition {
  ComplexVector eigenvalues;
  ComplexMatrix eigenvectors;
};

enum class NormalityCheck { verify, assume };

SpectralDecomposition spectral_normal(
    const ComplexMatrix& m, const Tolerances& tol = Tolerances::global(),
    NormalityCheck check = NormalityCheck::verify);

Unitary exp_skew(const SkewHermitian& x,
                 const Tolerances& tol = Tolerances::global());

// Principal logarithm. Eigenvalue angles land in (-pi, pi]; eigenvalues
// within branch_tol of -1 are assigned angle +pi and flagged, since the
// principal branch (and the geodesic through it) is no longer unique there.
struct LogResult {
  SkewHermitian tangent;
  bool branch_ambiguous;
};

LogResult log_unitary(const Unitary& u,
                      const Tolerances& tol = Tolerances::global());

// Re(Tr(y* x)), divided by n under the normalized convention. Restricted to
// skew-Hermitian arguments this is the inner product whose squared norm is
// schatten_norm(., 2, conv)^2.
double trace_inner(const SkewHermitian& x, const SkewHermitian& y,
                   TraceConvention conv = TraceConvention::standard);

namespace detail {

// Cyclic Jacobi for a Hermitian matrix. Returns ascending eigenvalues and
// the accumulated unitary. Throws NoConvergence past max_sweeps.
void jacobi_hermitian(const ComplexMatrix& a, RealVector& evals,
                      ComplexMatrix& vecs, int max_sweeps = 64);

}  // namespace detail

}  // namespace unifinsler
