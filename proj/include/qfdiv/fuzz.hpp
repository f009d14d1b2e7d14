#pragma once

// Seeded search for violations of the bound chains over random pairs.
// Trial t draws from CounterRng(seed).split(t) only, and per-trial results
// are merged in trial order, so the summary does not depend on the number of
// worker threads.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qfdiv/bounds.hpp"
#include "qfdiv/sampling.hpp"

namespace qfdiv {

struct FuzzConfig {
  Eigen::Index dim = 4;
  std::int64_t trials = 100;
  std::uint64_t seed = 0;
  SamplerKind sampler = SamplerKind::ginibre;
  std::optional<double> floor;  ///< default_floor(dim) when unset
  std::vector<std::string> generators;  ///< spec strings; empty means the full catalog
  HarnessOptions options;
  unsigned threads = 0;  ///< 0: hardware concurrency
  /// Drop generators with f(0) = +inf and use floor 0.
  bool allow_singular = false;

  double effective_floor() const;
  /// Throws PreconditionError when trials < 1, dim < 1 or the tolerance is not positive.
  void validate() const;
};

struct Violation {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  std::string generator;
  std::string check;
  std::size_t link = 0;  ///< index of the failing link; terms[link] <= terms[link + 1] fails
  std::string left_name;
  std::string right_name;
  double left = 0.0;
  double right = 0.0;
  ComplexMatrix q;
  ComplexMatrix p;
};

/// Histogram edges for finite link slacks: (-inf, 0), [0, 1e-12), [1e-12, 1e-9),
/// [1e-9, 1e-6), [1e-6, 1e-3), [1e-3, 1), [1, inf).
inline constexpr std::size_t kSlackBins = 7;

struct CheckStats {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t vacuous = 0;
  std::size_t skipped = 0;
  double min_slack = kInfinity;  ///< over finite links
  std::size_t near_tight = 0;    ///< finite links with slack < 1e-6
  std::array<std::size_t, kSlackBins> slack_histogram{};
};

struct FuzzSummary {
  FuzzConfig config;
  std::vector<std::string> generators;  ///< resolved spec strings
  std::vector<std::string> dropped_generators;
  std::size_t reports = 0;
  std::map<std::string, CheckStats> checks;  ///< keyed by check name
  std::vector<Violation> violations;
  /// Commuting sampler only: max |S_f - I_f| over finite values.
  std::optional<double> max_classical_gap;
  std::size_t precondition_errors = 0;
  std::vector<std::string> precondition_messages;  ///< first few, in trial order
};

/// The generators a config resolves to, after the allow_singular filter.
std::vector<Generator> resolve_generators(const FuzzConfig& config, std::vector<std::string>* dropped = nullptr);

FuzzSummary fuzz(const FuzzConfig& config);

/// Regenerates the pair of one trial (bit-identical to the fuzz run).
SampledPair replay_pair(const FuzzConfig& config, std::int64_t trial);

/// Re-evaluates one recorded violation; returns the reports of its check for that generator.
ReportList replay_violation(const FuzzConfig& config, const Violation& violation);

}  // namespace qfdiv
