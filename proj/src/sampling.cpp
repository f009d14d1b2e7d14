#include "qfdiv/sampling.hpp"

#include <algorithm>
#include <random>

#include <fmt/format.h>

#include "qfdiv/errors.hpp"

namespace qfdiv {

std::string_view to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::ginibre: return "ginibre";
    case SamplerKind::commuting: return "commuting";
    case SamplerKind::mixture: return "mixture";
  }
  return "unknown";
}

SamplerKind parse_sampler(std::string_view name) {
  if (name == "ginibre") return SamplerKind::ginibre;
  if (name == "commuting") return SamplerKind::commuting;
  if (name == "mixture") return SamplerKind::mixture;
  throw FormatError(fmt::format("unknown sampler '{}' (expected ginibre, commuting or mixture)", name));
}

ComplexMatrix ginibre_matrix(Eigen::Index dim, CounterRng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

ComplexMatrix haar_unitary(Eigen::Index dim, CounterRng& rng) {
  const Eigen::HouseholderQR<ComplexMatrix> qr(ginibre_matrix(dim, rng));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& packed = qr.matrixQR();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex d = packed(k, k);
    const double m = std::abs(d);
    if (m > 0.0) q.col(k) *= d / m;
  }
  return q;
}

RealVector flat_dirichlet(Eigen::Index dim, CounterRng& rng) {
  std::exponential_distribution<double> exponential(1.0);
  RealVector w(dim);
  for (Eigen::Index k = 0; k < dim; ++k) w(k) = exponential(rng);
  return w / w.sum();
}

ComplexMatrix apply_floor(const ComplexMatrix& rho, double floor) {
  const auto d = static_cast<double>(rho.rows());
  if (!(floor >= 0.0 && floor * d < 1.0)) {
    throw PreconditionError(fmt::format("eigenvalue floor must lie in [0, 1/d) = [0, {}), got {}", 1.0 / d, floor));
  }
  if (floor == 0.0) return rho;
  return (1.0 - d * floor) * rho + floor * ComplexMatrix::Identity(rho.rows(), rho.cols());
}

namespace {

ComplexMatrix with_spectrum(const ComplexMatrix& basis, const RealVector& spectrum) {
  return basis * spectrum.cast<Complex>().asDiagonal() * basis.adjoint();
}

RealVector floored(const RealVector& spectrum, double floor) {
  const auto d = static_cast<double>(spectrum.size());
  return (1.0 - d * floor) * spectrum.array() + floor;
}

void check_floor(Eigen::Index dim, double floor) { apply_floor(ComplexMatrix::Zero(dim, dim), floor); }

}  // namespace

DensityMatrix sample_density(SamplerKind kind, Eigen::Index dim, double floor, CounterRng& rng) {
  if (dim < 1) throw PreconditionError("dimension must be positive");
  check_floor(dim, floor);
  switch (kind) {
    case SamplerKind::ginibre: {
      const ComplexMatrix g = ginibre_matrix(dim, rng);
      ComplexMatrix rho = g * g.adjoint();
      rho /= rho.trace().real();
      return DensityMatrix(apply_floor(rho, floor));
    }
    case SamplerKind::commuting: {
      const ComplexMatrix u = haar_unitary(dim, rng);
      return DensityMatrix(with_spectrum(u, floored(flat_dirichlet(dim, rng), floor)));
    }
    case SamplerKind::mixture: {
      const RealVector weights = flat_dirichlet(dim, rng);
      ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
      for (Eigen::Index k = 0; k < dim; ++k) {
        ComplexVector psi = ginibre_matrix(dim, rng).col(0);
        psi.normalize();
        rho += weights(k) * psi * psi.adjoint();
      }
      rho /= rho.trace().real();
      return DensityMatrix(apply_floor(rho, floor));
    }
  }
  throw std::logic_error("unhandled sampler kind");
}

SampledPair sample_pair(SamplerKind kind, Eigen::Index dim, double floor, CounterRng& rng) {
  if (kind != SamplerKind::commuting) {
    DensityMatrix q = sample_density(kind, dim, floor, rng);
    DensityMatrix p = sample_density(kind, dim, floor, rng);
    return SampledPair{std::move(q), std::move(p), {}, {}, {}};
  }
  if (dim < 1) throw PreconditionError("dimension must be positive");
  check_floor(dim, floor);
  const ComplexMatrix u = haar_unitary(dim, rng);
  const RealVector qs = floored(flat_dirichlet(dim, rng), floor);
  const RealVector ps = floored(flat_dirichlet(dim, rng), floor);
  return SampledPair{DensityMatrix(with_spectrum(u, qs)), DensityMatrix(with_spectrum(u, ps)), u, qs, ps};
}

std::pair<DiscreteDistribution, DiscreteDistribution> commuting_marginals(const JointSpectrum& js,
                                                                         const ComplexMatrix& basis) {
  const Eigen::Index d = js.dim();
  if (basis.rows() != d || basis.cols() != d) throw PreconditionError("commuting_marginals: basis has wrong shape");
  // Greedy matching by decreasing overlap; within a degenerate eigenspace any
  // matching yields the same distribution.
  auto place = [&](const RealVector& values, const ComplexMatrix& vectors) {
    const RealMatrix overlap = (basis.adjoint() * vectors).cwiseAbs2();
    std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index k = 0; k < d; ++k) cells.emplace_back(k, i);
    }
    std::stable_sort(cells.begin(), cells.end(), [&](const auto& a, const auto& b) {
      return overlap(a.first, a.second) > overlap(b.first, b.second);
    });
    std::vector<double> out(static_cast<std::size_t>(d), 0.0);
    std::vector<bool> slot_used(static_cast<std::size_t>(d), false);
    std::vector<bool> vector_used(static_cast<std::size_t>(d), false);
    for (const auto& [k, i] : cells) {
      const auto ks = static_cast<std::size_t>(k);
      const auto is = static_cast<std::size_t>(i);
      if (slot_used[ks] || vector_used[is]) continue;
      slot_used[ks] = vector_used[is] = true;
      out[ks] = values(i);
    }
    return out;
  };
  return {DiscreteDistribution(place(js.lambda, js.u)), DiscreteDistribution(place(js.mu, js.v))};
}

}  // namespace qfdiv
