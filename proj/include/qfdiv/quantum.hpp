#pragma once

// Quantum f-divergence S_f(Q,P) through the joint spectral data of (Q,P).
//
// The Araki transform T -> Q T P^{-1} has the rank-one eigenoperators
// |u_i><v_j| with eigenvalues lambda_i / mu_j, so
//
//   S_f(Q,P) = sum_ij mu_j W_ij f(lambda_i / mu_j),   W_ij = |<u_i, v_j>|^2,
//
// and r, R are the extreme ratios lambda_min / mu_max, lambda_max / mu_min.

#include <cstdint>
#include <string>
#include <vector>

#include "qfdiv/chain.hpp"
#include "qfdiv/generators.hpp"
#include "qfdiv/hermitian.hpp"

namespace qfdiv {

inline constexpr double kDefaultInvertEps = 1e-12;

/// PSD with unit trace. Eigenvalues in [-1e-12, 0) and those with
/// |lambda| <= 1e-13 ||A||_F are clamped to exactly 0; the trace must be
/// 1 within 1e-12.
class DensityMatrix {
 public:
  explicit DensityMatrix(const HermitianMatrix& h);
  explicit DensityMatrix(const ComplexMatrix& a) : DensityMatrix(HermitianMatrix(a)) {}

  const HermitianMatrix& hermitian() const { return h_; }
  const ComplexMatrix& matrix() const { return h_.matrix(); }
  Eigen::Index dim() const { return h_.dim(); }
  /// Clamped eigenvalues, ascending.
  const EigenDecomposition& spectrum() const { return eig_; }
  double min_eigenvalue() const { return eig_.eigenvalues(0); }

 private:
  HermitianMatrix h_;
  EigenDecomposition eig_;
};

struct JointSpectrum {
  RealVector lambda;  ///< eigenvalues of Q, descending
  RealVector mu;      ///< eigenvalues of P, descending
  ComplexMatrix u;    ///< column i: eigenvector of Q for lambda(i)
  ComplexMatrix v;    ///< column j: eigenvector of P for mu(j)
  RealMatrix w;       ///< w(i,j) = |<u_i, v_j>|^2
  double r = 0.0;
  double R = 0.0;

  Eigen::Index dim() const { return lambda.size(); }
};

/// Throws PreconditionError on a dimension mismatch or when the smallest
/// eigenvalue of p is below eps.
JointSpectrum joint_spectrum(const DensityMatrix& q, const DensityMatrix& p, double eps = kDefaultInvertEps);

struct DivergenceValue {
  double value = 0.0;  ///< finite or +inf
  std::string generator;
  std::vector<std::string> flags;

  bool finite() const { return std::isfinite(value); }
};

/// Ratios equal to 0 use f.value_at_zero. The result is +inf iff an infinite
/// f-value carries weight mu_j W_ij > 1e-14; lighter infinite terms are
/// dropped and flagged.
DivergenceValue s_f(const JointSpectrum& js, const Generator& f);
DivergenceValue s_f(const DensityMatrix& q, const DensityMatrix& p, const Generator& f,
                    double eps = kDefaultInvertEps);

// Closed-form trace formulas. Each requires p invertible at eps.

/// tr[Q (ln Q - ln P)], with 0 ln 0 = 0
double umegaki(const DensityMatrix& q, const DensityMatrix& p, double eps = kDefaultInvertEps);
/// tr(Q^2 P^{-1}) - 1
double chi_square(const DensityMatrix& q, const DensityMatrix& p, double eps = kDefaultInvertEps);
/// (1 - tr(Q^q P^{1-q})) / (1-q), q in (0,1)
double tsallis(const DensityMatrix& q, const DensityMatrix& p, double qparam, double eps = kDefaultInvertEps);
/// 1 - tr(Q^{1/2} P^{1/2})
double hellinger_sq(const DensityMatrix& q, const DensityMatrix& p, double eps = kDefaultInvertEps);

/// sum_ij W_ij |lambda_i - mu_j| = S_{|t-1|}(Q,P)
double variational_q(const JointSpectrum& js);
double variational_q(const DensityMatrix& q, const DensityMatrix& p, double eps = kDefaultInvertEps);
/// sum_ij W_ij (lambda_i - mu_j)^2 / mu_j: S_{t^2-1}(Q,P) as a sum of nonnegative terms.
double chi_square_spectral(const JointSpectrum& js);
/// tr|Q - P|. Equals variational_q only when Q and P commute.
double trace_distance(const DensityMatrix& q, const DensityMatrix& p);

struct SandwichReport {
  double r = 0.0;
  double R = 0.0;
  /// ||Q^{1/2} T P^{-1/2}||_2^2 at the extremal rank-one T = |u_i><v_j|.
  double attained_low = 0.0;
  double attained_high = 0.0;
  bool attained = false;
  std::size_t trials = 0;
  std::size_t contained = 0;
  /// Smallest (ratio - r) and (R - ratio) over the random T.
  double worst_low_slack = kInfinity;
  double worst_high_slack = kInfinity;
  Verdict verdict = Verdict::pass;
};

/// For `trials` random complex T with ||T||_2 = 1 checks
/// r - 1e-9 <= ||Q^{1/2} T P^{-1/2}||_2^2 <= R + 1e-9, and that the extremal
/// rank-one operators reproduce r and R within 1e-8.
SandwichReport sandwich_check(const DensityMatrix& q, const DensityMatrix& p, std::size_t trials,
                              std::uint64_t seed, double eps = kDefaultInvertEps);

}  // namespace qfdiv
