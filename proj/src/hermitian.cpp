#include "qfdiv/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "qfdiv/errors.hpp"

namespace qfdiv {

namespace {

double max_abs_entry(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw PreconditionError(fmt::format("{}: expected a non-empty square matrix, got {}x{}", what,
                                        a.rows(), a.cols()));
  }
}

// Quadratic form weights |<u_k, x>|^2 of x in the eigenbasis.
RealVector spectral_weights(const EigenDecomposition& eig, const ComplexVector& x) {
  const ComplexVector c = eig.eigenvectors.adjoint() * x;
  return c.cwiseAbs2();
}

void require_unit(const ComplexVector& x, Eigen::Index dim) {
  if (x.size() != dim) {
    throw PreconditionError(fmt::format("vector has length {}, operator has dimension {}", x.size(), dim));
  }
  if (std::abs(x.norm() - 1.0) > 1e-10) {
    throw PreconditionError(fmt::format("expected a unit vector, got norm {}", x.norm()));
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a) {
  require_square(a, "HermitianMatrix");
  if (!a.allFinite()) throw PreconditionError("HermitianMatrix: non-finite entry");
  const double scale = max_abs_entry(a);
  const double worst = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (worst > kHermitianTolerance * scale) {
    throw PreconditionError(
        fmt::format("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {:.3e} (scale {:.3e})", worst, scale));
  }
  m_ = (a + a.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::from_real(const RealMatrix& a) {
  return HermitianMatrix(ComplexMatrix(a.cast<Complex>()));
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
}

EigenDecomposition eigh(const HermitianMatrix& h, const JacobiOptions& options) {
  ComplexMatrix a = h.matrix();
  const Eigen::Index n = a.rows();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double threshold = options.relative_threshold * a.norm();

  int sweep = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (sweep == options.max_sweeps) {
      throw ConvergenceError(fmt::format("Jacobi eigensolver: no convergence after {} sweeps (d = {})",
                                         options.max_sweeps, n));
    }
    ++sweep;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * g);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex e = apq / g;
        const Complex se = s * e;
        const Complex se_conj = s * std::conj(e);

        // A <- A J, V <- V J with J_pp = J_qq = c, J_pq = s e, J_qp = -s conj(e).
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - se_conj * akq;
          a(k, q) = se * akp + c * akq;
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - se_conj * vkq;
          v(k, q) = se * vkp + c * vkq;
        }
        // A <- J* A
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - se * aqk;
          a(q, k) = se_conj * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * g;
        a(q, q) = aqq + t * g;
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  out.sweeps = sweep;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[k], order[k]).real();
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

HermitianMatrix matrix_function(const EigenDecomposition& eig, const ScalarFunction& g) {
  const Eigen::Index n = eig.eigenvalues.size();
  RealVector values(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    values(k) = g(eig.eigenvalues(k));
    if (!std::isfinite(values(k))) {
      throw PreconditionError(
          fmt::format("matrix function undefined at eigenvalue {:.17g}", eig.eigenvalues(k)));
    }
  }
  const ComplexMatrix scaled = eig.eigenvectors * values.cast<Complex>().asDiagonal();
  return HermitianMatrix(ComplexMatrix(scaled * eig.eigenvectors.adjoint()));
}

HermitianMatrix matrix_function(const HermitianMatrix& a, const ScalarFunction& g) {
  return matrix_function(eigh(a), g);
}

Complex trace(const ComplexMatrix& a) {
  require_square(a, "trace");
  return a.trace();
}

HermitianMatrix operator_abs(const ComplexMatrix& a) {
  require_square(a, "operator_abs");
  const HermitianMatrix gram(ComplexMatrix(a.adjoint() * a));
  return matrix_function(gram, [](double t) { return std::sqrt(std::max(t, 0.0)); });
}

RealVector singular_values(const ComplexMatrix& a) {
  require_square(a, "singular_values");
  RealVector s;
  const double scale = max_abs_entry(a);
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() <= kHermitianTolerance * scale) {
    s = eigh(HermitianMatrix(a)).eigenvalues.cwiseAbs();
  } else {
    s = eigh(HermitianMatrix(ComplexMatrix(a.adjoint() * a))).eigenvalues.cwiseMax(0.0).cwiseSqrt();
  }
  std::sort(s.data(), s.data() + s.size(), std::greater<>());
  return s;
}

double trace_norm(const ComplexMatrix& a) { return singular_values(a).sum(); }

double hs_norm(const ComplexMatrix& a) {
  require_square(a, "hs_norm");
  return a.norm();
}

double operator_norm(const ComplexMatrix& a) { return singular_values(a)(0); }

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw PreconditionError("hs_inner: dimension mismatch");
  }
  return (b.adjoint() * a).trace();
}

void clamp_small_eigenvalues(RealVector& eigenvalues, double frobenius_norm) {
  const double cut = 1e-13 * frobenius_norm;
  for (auto& l : eigenvalues) {
    if (std::abs(l) <= cut) l = 0.0;
  }
}

InequalityChain gruss_gap_check(const HermitianMatrix& s, const ScalarFunction& g, Complex lambda,
                                double rho, const ComplexVector& x, Tolerance tol) {
  require_unit(x, s.dim());
  if (!(rho >= 0.0)) throw PreconditionError("gruss_gap_check: rho must be nonnegative");
  const EigenDecomposition eig = eigh(s);
  const RealVector& l = eig.eigenvalues;
  const double lo = l(0);
  const double hi = l(l.size() - 1);

  // |g(t) - lambda| <= rho on [lo, hi]
  const double slack = 1e-12 * std::max(1.0, rho);
  auto hypothesis_holds_at = [&](double t) { return std::abs(g(t) - lambda) <= rho + slack; };
  constexpr int kProbes = 1001;
  for (int k = 0; k < kProbes; ++k) {
    const double t = lo + (hi - lo) * k / (kProbes - 1);
    if (!hypothesis_holds_at(t)) {
      throw PreconditionError(fmt::format("gruss_gap_check: |g(t) - lambda| > rho at t = {:.17g}", t));
    }
  }
  for (double t : l) {
    if (!hypothesis_holds_at(t)) {
      throw PreconditionError(fmt::format("gruss_gap_check: |g(t) - lambda| > rho at eigenvalue {:.17g}", t));
    }
  }

  const RealVector w = spectral_weights(eig, x);
  double mean = 0.0, mean_g = 0.0, mean_sg = 0.0;
  for (Eigen::Index k = 0; k < l.size(); ++k) {
    const double gk = g(l(k));
    mean += w(k) * l(k);
    mean_g += w(k) * gk;
    mean_sg += w(k) * l(k) * gk;
  }
  double abs_dev = 0.0, variance = 0.0;
  for (Eigen::Index k = 0; k < l.size(); ++k) {
    abs_dev += w(k) * std::abs(l(k) - mean);
    variance += w(k) * (l(k) - mean) * (l(k) - mean);
  }
  return evaluate_chain({{"covariance_gap", std::abs(mean_sg - mean * mean_g)},
                         {"rho_abs_deviation", rho * abs_dev},
                         {"rho_std_deviation", rho * std::sqrt(variance)}},
                        tol);
}

InequalityChain variance_bound_check(const HermitianMatrix& s, const ComplexVector& x, Tolerance tol) {
  require_unit(x, s.dim());
  const EigenDecomposition eig = eigh(s);
  const RealVector& l = eig.eigenvalues;
  const double range = l(l.size() - 1) - l(0);
  const RealVector w = spectral_weights(eig, x);
  const double mean = w.dot(l);
  double abs_dev = 0.0, variance = 0.0;
  for (Eigen::Index k = 0; k < l.size(); ++k) {
    abs_dev += w(k) * std::abs(l(k) - mean);
    variance += w(k) * (l(k) - mean) * (l(k) - mean);
  }
  return evaluate_chain({{"zero", 0.0},
                         {"variance", variance},
                         {"half_range_abs_deviation", 0.5 * range * abs_dev},
                         {"half_range_std_deviation", 0.5 * range * std::sqrt(variance)},
                         {"quarter_range_squared", 0.25 * range * range}},
                        tol);
}

InequalityChain trace_hoelder_check(const ComplexMatrix& a, const ComplexMatrix& b, double alpha,
                                    Tolerance tol) {
  require_square(a, "trace_hoelder_check");
  require_square(b, "trace_hoelder_check");
  if (a.rows() != b.rows()) throw PreconditionError("trace_hoelder_check: dimension mismatch");
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("trace_hoelder_check: alpha must lie in (0,1)");

  const ComplexMatrix ab = a * b;
  const RealVector sa = singular_values(a);
  const RealVector sb = singular_values(b);
  double pa = 0.0, pb = 0.0;
  for (double s : sa) pa += std::pow(s, 1.0 / alpha);
  for (double s : sb) pb += std::pow(s, 1.0 / (1.0 - alpha));
  return evaluate_chain({{"abs_trace", std::abs(ab.trace())},
                         {"trace_norm_product", trace_norm(ab)},
                         {"hoelder_bound", std::pow(pa, alpha) * std::pow(pb, 1.0 - alpha)}},
                        tol);
}

}  // namespace qfdiv
