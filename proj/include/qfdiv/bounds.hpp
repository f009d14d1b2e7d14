#pragma once

// Upper-bound chains for S_f(Q,P) in terms of the sandwich constants r, R,
// evaluated on concrete pairs. Every check returns the generic chain first,
// followed by closed-form specializations for the generators that have one.
//
// Chains (D = f'_-(R) - f'_+(r), k = (R-1)(1-r)/(R-r), V = variational_q,
// chi = sqrt(chi^2)):
//
//   nonnegativity    0 <= S_f
//   derivative_gap   S_f <= sum_ij mu_j W_ij (x_ij - 1) f'_+(x_ij),  x_ij = lambda_i / mu_j
//   variational      S_f <= D V / 2 <= D chi / 2 <= (R-r) D / 4
//   secant           S_f <= [(R-1) f(r) + (1-r) f(R)] / (R-r)
//   chord_slope      S_f <= k psi(1) <= k sup psi <= k D <= (R-r) D / 4
//   chord_slope_alt  S_f <= k psi(1) <= (R-r) psi(1) / 4 <= (R-r) sup psi / 4 <= (R-r) D / 4
//   jensen           S_f <= f(r) + f(R) - 2 f((r+R)/2)
//
// chord_slope and jensen need R > 1 > r and are skipped when r or R is
// within 1e-12 of 1.

#include <string>
#include <vector>

#include "qfdiv/chain.hpp"
#include "qfdiv/generators.hpp"
#include "qfdiv/quantum.hpp"

namespace qfdiv {

struct HarnessOptions {
  Tolerance tol = Tolerance::scaled(1e-9);
  double eps_invert = kDefaultInvertEps;
  /// Multiplies every term after the first. Anything but 1 is a self-test
  /// hook for corrupting the bounds.
  double bound_scale = 1.0;
};

/// A (Q,P) pair with its joint spectrum and the derived V and chi.
struct AnalyzedPair {
  DensityMatrix q;
  DensityMatrix p;
  JointSpectrum js;
  double variational = 0.0;
  double chi = 0.0;
  bool q_invertible = false;  ///< smallest eigenvalue of Q >= eps_invert
};

AnalyzedPair analyze_pair(DensityMatrix q, DensityMatrix p, const HarnessOptions& options = {});

struct BoundChainReport {
  std::string check;
  std::string generator;
  InequalityChain chain;
  Verdict verdict = Verdict::pass;
  std::vector<std::string> notes;
  Eigen::Index dim = 0;
  double r = 0.0;
  double R = 0.0;
};

using ReportList = std::vector<BoundChainReport>;

ReportList check_nonnegativity(const AnalyzedPair& pair, const Generator& f, const HarnessOptions& options = {});
ReportList check_derivative_gap(const AnalyzedPair& pair, const Generator& f, const HarnessOptions& options = {});
ReportList check_variational_bound(const AnalyzedPair& pair, const Generator& f,
                                   const HarnessOptions& options = {});
ReportList check_secant_bound(const AnalyzedPair& pair, const Generator& f, const HarnessOptions& options = {});
ReportList check_chord_slope_bound(const AnalyzedPair& pair, const Generator& f,
                                   const HarnessOptions& options = {});
ReportList check_jensen_gap_bound(const AnalyzedPair& pair, const Generator& f,
                                  const HarnessOptions& options = {});

/// All of the above, in that order.
ReportList certify(const AnalyzedPair& pair, const Generator& f, const HarnessOptions& options = {});

/// [(R-1)(1-r), (R-1)(1-r)(R+r+2)/(R-r)]: the chord-slope form of the chi^2
/// bound against the secant form, within 1e-12.
InequalityChain chi2_chord_slope_vs_secant(double r, double R);

/// [ln((R+r)^2/(4rR)), (R-r)^2/(4rR)]: the Jensen form of the reverse Umegaki
/// bound against the variational form, within 1e-12.
InequalityChain reverse_umegaki_jensen_vs_variational(double r, double R);

/// True when r or R lies within 1e-12 of 1.
bool touches_one(double r, double R);

}  // namespace qfdiv
