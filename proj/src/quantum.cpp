#include "qfdiv/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "qfdiv/errors.hpp"
#include "qfdiv/rng.hpp"
#include "qfdiv/summation.hpp"

namespace qfdiv {

namespace {

constexpr double kNegligibleWeight = 1e-14;

void require_invertible(const DensityMatrix& p, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("invertibility threshold must be positive");
  if (p.min_eigenvalue() < eps) {
    throw PreconditionError(
        fmt::format("P is not invertible: smallest eigenvalue {:.3e} is below {:.3e}", p.min_eigenvalue(), eps));
  }
}

void require_same_dim(const DensityMatrix& q, const DensityMatrix& p) {
  if (q.dim() != p.dim()) {
    throw PreconditionError(fmt::format("Q is {0}x{0} but P is {1}x{1}", q.dim(), p.dim()));
  }
}

/// tr(g(A) h(B)) for density matrices A, B.
double trace_of_product(const DensityMatrix& a, const ScalarFunction& g, const DensityMatrix& b,
                        const ScalarFunction& h) {
  const HermitianMatrix ga = matrix_function(a.spectrum(), g);
  const HermitianMatrix hb = matrix_function(b.spectrum(), h);
  return hs_inner(ga.matrix(), hb.matrix()).real();
}

}  // namespace

DensityMatrix::DensityMatrix(const HermitianMatrix& h) : h_(h), eig_(eigh(h)) {
  RealVector& l = eig_.eigenvalues;
  if (l(0) < -1e-12) {
    throw PreconditionError(fmt::format("not a density matrix: eigenvalue {:.3e} < -1e-12", l(0)));
  }
  const double tr = h_.matrix().trace().real();
  if (std::abs(tr - 1.0) > 1e-12) {
    throw PreconditionError(fmt::format("not a density matrix: trace {:.17g} differs from 1", tr));
  }
  clamp_small_eigenvalues(l, h_.matrix().norm());
  for (auto& x : l) {
    if (x < 0.0) x = 0.0;
  }
}

JointSpectrum joint_spectrum(const DensityMatrix& q, const DensityMatrix& p, double eps) {
  require_same_dim(q, p);
  require_invertible(p, eps);
  const Eigen::Index d = q.dim();
  JointSpectrum js;
  js.lambda = q.spectrum().eigenvalues.reverse();
  js.mu = p.spectrum().eigenvalues.reverse();
  js.u = q.spectrum().eigenvectors.rowwise().reverse();
  js.v = p.spectrum().eigenvectors.rowwise().reverse();
  js.w = (js.u.adjoint() * js.v).cwiseAbs2();
  // Columns of W sum to 1 by unitarity. The small entries carry better
  // relative accuracy than the dominant one, so the dominant entry is taken
  // as the complement; for commuting pairs this makes it exactly 1.
  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::Index top = 0;
    js.w.col(j).maxCoeff(&top);
    CompensatedSum rest;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (i != top) rest.add(js.w(i, j));
    }
    js.w(top, j) = std::clamp(1.0 - rest.value(), 0.0, 1.0);
  }
  js.r = js.lambda(d - 1) / js.mu(0);
  js.R = js.lambda(0) / js.mu(d - 1);
  return js;
}

DivergenceValue s_f(const JointSpectrum& js, const Generator& f) {
  DivergenceValue out;
  out.generator = f.name;
  CompensatedSum sum;
  bool dropped = false;
  for (Eigen::Index j = 0; j < js.dim(); ++j) {
    for (Eigen::Index i = 0; i < js.dim(); ++i) {
      const double weight = js.mu(j) * js.w(i, j);
      const double value = f(js.lambda(i) / js.mu(j));
      if (std::isinf(value)) {
        if (weight > kNegligibleWeight) {
          out.value = value;
          out.flags.push_back(
              fmt::format("infinite: f({:.6g}) carries weight {:.3e}", js.lambda(i) / js.mu(j), weight));
          return out;
        }
        dropped = true;
        continue;
      }
      sum.add(weight * value);
    }
  }
  if (dropped) out.flags.push_back("dropped infinite terms of weight <= 1e-14");
  out.value = sum.value();
  return out;
}

DivergenceValue s_f(const DensityMatrix& q, const DensityMatrix& p, const Generator& f, double eps) {
  return s_f(joint_spectrum(q, p, eps), f);
}

double umegaki(const DensityMatrix& q, const DensityMatrix& p, double eps) {
  require_same_dim(q, p);
  require_invertible(p, eps);
  double entropy_term = 0.0;
  for (double l : q.spectrum().eigenvalues) {
    if (l > 0.0) entropy_term += l * std::log(l);
  }
  const double cross = trace_of_product(
      q, [](double t) { return t; }, p, [](double t) { return std::log(t); });
  return entropy_term - cross;
}

double chi_square(const DensityMatrix& q, const DensityMatrix& p, double eps) {
  require_same_dim(q, p);
  require_invertible(p, eps);
  return trace_of_product(
             q, [](double t) { return t * t; }, p, [](double t) { return 1.0 / t; }) -
         1.0;
}

double tsallis(const DensityMatrix& q, const DensityMatrix& p, double qparam, double eps) {
  if (!(qparam > 0.0 && qparam < 1.0)) {
    throw PreconditionError(fmt::format("tsallis: q must lie in (0,1), got {}", qparam));
  }
  require_same_dim(q, p);
  require_invertible(p, eps);
  const double overlap = trace_of_product(
      q, [qparam](double t) { return std::pow(t, qparam); }, p,
      [qparam](double t) { return std::pow(t, 1.0 - qparam); });
  return (1.0 - overlap) / (1.0 - qparam);
}

double hellinger_sq(const DensityMatrix& q, const DensityMatrix& p, double eps) {
  require_same_dim(q, p);
  require_invertible(p, eps);
  auto root = [](double t) { return std::sqrt(t); };
  return 1.0 - trace_of_product(q, root, p, root);
}

double variational_q(const JointSpectrum& js) {
  CompensatedSum sum;
  for (Eigen::Index j = 0; j < js.dim(); ++j) {
    for (Eigen::Index i = 0; i < js.dim(); ++i) sum.add(js.w(i, j) * std::abs(js.lambda(i) - js.mu(j)));
  }
  return sum.value();
}

double variational_q(const DensityMatrix& q, const DensityMatrix& p, double eps) {
  return variational_q(joint_spectrum(q, p, eps));
}

double chi_square_spectral(const JointSpectrum& js) {
  CompensatedSum sum;
  for (Eigen::Index j = 0; j < js.dim(); ++j) {
    for (Eigen::Index i = 0; i < js.dim(); ++i) {
      const double diff = js.lambda(i) - js.mu(j);
      sum.add(js.w(i, j) * diff * diff / js.mu(j));
    }
  }
  return sum.value();
}

double trace_distance(const DensityMatrix& q, const DensityMatrix& p) {
  require_same_dim(q, p);
  return trace_norm(q.matrix() - p.matrix());
}

SandwichReport sandwich_check(const DensityMatrix& q, const DensityMatrix& p, std::size_t trials,
                              std::uint64_t seed, double eps) {
  const JointSpectrum js = joint_spectrum(q, p, eps);
  const Eigen::Index d = js.dim();
  const ComplexMatrix q_half = matrix_function(q.spectrum(), [](double t) { return std::sqrt(t); }).matrix();
  const ComplexMatrix p_inv_half =
      matrix_function(p.spectrum(), [](double t) { return 1.0 / std::sqrt(t); }).matrix();
  auto ratio = [&](const ComplexMatrix& t) { return (q_half * t * p_inv_half).squaredNorm() / t.squaredNorm(); };

  SandwichReport rep;
  rep.r = js.r;
  rep.R = js.R;
  rep.trials = trials;
  rep.attained_high = ratio(js.u.col(0) * js.v.col(d - 1).adjoint());
  rep.attained_low = ratio(js.u.col(d - 1) * js.v.col(0).adjoint());
  rep.attained = std::abs(rep.attained_high - js.R) <= 1e-8 && std::abs(rep.attained_low - js.r) <= 1e-8;

  CounterRng rng(seed);
  std::normal_distribution<double> normal;
  constexpr double kContainment = 1e-9;
  for (std::size_t k = 0; k < trials; ++k) {
    ComplexMatrix t(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) t(i, j) = Complex(normal(rng), normal(rng));
    }
    t /= t.norm();
    const double x = ratio(t);
    rep.worst_low_slack = std::min(rep.worst_low_slack, x - js.r);
    rep.worst_high_slack = std::min(rep.worst_high_slack, js.R - x);
    if (js.r - kContainment <= x && x <= js.R + kContainment) ++rep.contained;
  }
  rep.verdict = (rep.attained && rep.contained == trials) ? Verdict::pass : Verdict::fail;
  return rep;
}

}  // namespace qfdiv
