#pragma once

// Dense complex Hermitian linear algebra: a cyclic Jacobi eigensolver, the
// functional calculus built on it, traces, trace/Hilbert-Schmidt norms, and
// checkable forms of a few classical trace and variance inequalities.

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "qfdiv/chain.hpp"

namespace qfdiv {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

using ScalarFunction = std::function<double(double)>;

/// Relative tolerance for accepting a matrix as Hermitian before symmetrizing.
inline constexpr double kHermitianTolerance = 1e-12;

/// Square complex matrix known to be Hermitian.
///
/// Construction symmetrizes as (A + A*)/2 when A is Hermitian to within
/// kHermitianTolerance * max|a_ij|, and throws PreconditionError otherwise.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& a);

  /// Wraps a real symmetric matrix.
  static HermitianMatrix from_real(const RealMatrix& a);
  static HermitianMatrix identity(Eigen::Index dim);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

struct EigenDecomposition {
  RealVector eigenvalues;      ///< ascending
  ComplexMatrix eigenvectors;  ///< column k belongs to eigenvalues[k]
  int sweeps = 0;
};

struct JacobiOptions {
  double relative_threshold = 1e-14;  ///< on off-diagonal Frobenius mass, scaled by ||A||_F
  int max_sweeps = 100;
};

/// Cyclic complex Jacobi eigensolver. Throws ConvergenceError if the
/// off-diagonal mass does not fall below the threshold within max_sweeps.
EigenDecomposition eigh(const HermitianMatrix& a, const JacobiOptions& options = {});

/// U g(Lambda) U*. Throws PreconditionError if g is not finite at some eigenvalue.
HermitianMatrix matrix_function(const HermitianMatrix& a, const ScalarFunction& g);
HermitianMatrix matrix_function(const EigenDecomposition& eig, const ScalarFunction& g);

Complex trace(const ComplexMatrix& a);

/// |A| = (A*A)^{1/2}
HermitianMatrix operator_abs(const ComplexMatrix& a);

/// Singular values, descending.
RealVector singular_values(const ComplexMatrix& a);

double trace_norm(const ComplexMatrix& a);
double hs_norm(const ComplexMatrix& a);
double operator_norm(const ComplexMatrix& a);
/// <A, B>_2 = tr(B* A)
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Sets eigenvalues with |lambda| <= 1e-13 * ||A||_F to exactly zero.
void clamp_small_eigenvalues(RealVector& eigenvalues, double frobenius_norm);

/// Grüss-type bound for a selfadjoint S and a unit vector x, given that
/// |g(t) - lambda| <= rho on the spectrum interval of S:
///
///   |<S g(S) x,x> - <Sx,x><g(S)x,x>|  <=  rho <|S - <Sx,x>|x,x>
///                                     <=  rho (<S^2 x,x> - <Sx,x>^2)^{1/2}
///
/// The hypothesis is probed on the eigenvalues and a uniform grid over
/// [gamma, Gamma]; a violation throws PreconditionError.
InequalityChain gruss_gap_check(const HermitianMatrix& s, const ScalarFunction& g, Complex lambda,
                                double rho, const ComplexVector& x,
                                Tolerance tol = Tolerance::absolute(1e-10));

/// 0 <= var_x(S) <= (Gamma-gamma)/2 <|S-<Sx,x>|x,x> <= (Gamma-gamma)/2 var^{1/2} <= (Gamma-gamma)^2/4
InequalityChain variance_bound_check(const HermitianMatrix& s, const ComplexVector& x,
                                     Tolerance tol = Tolerance::absolute(1e-10));

/// |tr(AB)| <= tr|AB| <= [tr |A|^{1/alpha}]^alpha [tr |B|^{1/(1-alpha)}]^{1-alpha}
InequalityChain trace_hoelder_check(const ComplexMatrix& a, const ComplexMatrix& b, double alpha,
                                    Tolerance tol = Tolerance::mixed(1e-10, 1e-10));

}  // namespace qfdiv
