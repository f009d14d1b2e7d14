#pragma once

// Random density matrices and pairs. Every sampler draws only from the
// CounterRng it is handed, so output is a function of that stream.

#include <string_view>
#include <utility>

#include "qfdiv/classical.hpp"
#include "qfdiv/quantum.hpp"
#include "qfdiv/rng.hpp"

namespace qfdiv {

enum class SamplerKind { ginibre, commuting, mixture };

std::string_view to_string(SamplerKind kind);
/// Throws FormatError for unknown names.
SamplerKind parse_sampler(std::string_view name);

/// 1e-6 / d
inline double default_floor(Eigen::Index dim) { return 1e-6 / static_cast<double>(dim); }

/// i.i.d. standard complex Gaussian entries (real and imaginary parts of variance 1/2).
ComplexMatrix ginibre_matrix(Eigen::Index dim, CounterRng& rng);
/// Haar-distributed unitary: QR of a Ginibre matrix with R's diagonal phases removed.
ComplexMatrix haar_unitary(Eigen::Index dim, CounterRng& rng);
/// Uniform point on the probability simplex.
RealVector flat_dirichlet(Eigen::Index dim, CounterRng& rng);

/// (1 - d floor) rho + floor I: every eigenvalue ends up >= floor.
/// Throws PreconditionError unless 0 <= floor < 1/d.
ComplexMatrix apply_floor(const ComplexMatrix& rho, double floor);

/// ginibre: G G* / tr(G G*); commuting: flat Dirichlet spectrum on a Haar basis;
/// mixture: d Haar-random pure states with flat Dirichlet weights. The floor
/// is applied last.
DensityMatrix sample_density(SamplerKind kind, Eigen::Index dim, double floor, CounterRng& rng);

struct SampledPair {
  DensityMatrix q;
  DensityMatrix p;
  /// Shared eigenbasis for the commuting sampler (empty otherwise).
  ComplexMatrix basis;
  /// Generating spectra in basis order (commuting sampler only).
  RealVector q_spectrum;
  RealVector p_spectrum;
};

/// For commuting pairs both matrices share one Haar basis.
SampledPair sample_pair(SamplerKind kind, Eigen::Index dim, double floor, CounterRng& rng);

/// Distributions of a commuting pair as the classical oracle sees them: the
/// engine's eigenvalues of Q and P, each placed at the basis vector its
/// eigenvector overlaps most.
std::pair<DiscreteDistribution, DiscreteDistribution> commuting_marginals(const JointSpectrum& js,
                                                                         const ComplexMatrix& basis);

}  // namespace qfdiv
