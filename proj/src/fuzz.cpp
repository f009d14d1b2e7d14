#include "qfdiv/fuzz.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "qfdiv/errors.hpp"

namespace qfdiv {

namespace {

constexpr std::size_t kKeptMessages = 10;

struct TrialResult {
  std::map<std::string, CheckStats> checks;
  std::vector<Violation> violations;
  std::size_t reports = 0;
  std::optional<double> classical_gap;
  std::optional<std::string> precondition_error;
};

std::size_t slack_bin(double slack) {
  if (slack < 0.0) return 0;
  if (slack < 1e-12) return 1;
  if (slack < 1e-9) return 2;
  if (slack < 1e-6) return 3;
  if (slack < 1e-3) return 4;
  if (slack < 1.0) return 5;
  return 6;
}

void record(CheckStats& stats, const BoundChainReport& rep) {
  switch (rep.verdict) {
    case Verdict::pass: ++stats.pass; break;
    case Verdict::fail: ++stats.fail; break;
    case Verdict::vacuous: ++stats.vacuous; break;
    case Verdict::skipped: ++stats.skipped; break;
  }
  for (double s : rep.chain.slacks) {
    if (!std::isfinite(s)) continue;
    stats.min_slack = std::min(stats.min_slack, s);
    if (s < 1e-6) ++stats.near_tight;
    ++stats.slack_histogram[slack_bin(s)];
  }
}

void merge(CheckStats& into, const CheckStats& from) {
  into.pass += from.pass;
  into.fail += from.fail;
  into.vacuous += from.vacuous;
  into.skipped += from.skipped;
  into.min_slack = std::min(into.min_slack, from.min_slack);
  into.near_tight += from.near_tight;
  for (std::size_t k = 0; k < kSlackBins; ++k) into.slack_histogram[k] += from.slack_histogram[k];
}

TrialResult run_trial(const FuzzConfig& config, const std::vector<Generator>& generators, std::int64_t trial) {
  TrialResult out;
  try {
    SampledPair sp = replay_pair(config, trial);
    const AnalyzedPair pair = analyze_pair(sp.q, sp.p, config.options);
    for (const Generator& g : generators) {
      for (const BoundChainReport& rep : certify(pair, g, config.options)) {
        ++out.reports;
        record(out.checks[rep.check], rep);
        if (rep.verdict != Verdict::fail) continue;
        for (std::size_t k = 0; k < rep.chain.links.size(); ++k) {
          if (rep.chain.links[k] != Verdict::fail) continue;
          Violation v;
          v.trial = trial;
          v.seed = config.seed;
          v.generator = g.name;
          v.check = rep.check;
          v.link = k;
          v.left_name = rep.chain.terms[k].name;
          v.right_name = rep.chain.terms[k + 1].name;
          v.left = rep.chain.terms[k].value;
          v.right = rep.chain.terms[k + 1].value;
          v.q = pair.q.matrix();
          v.p = pair.p.matrix();
          out.violations.push_back(std::move(v));
        }
      }
    }
    if (config.sampler == SamplerKind::commuting) {
      const auto [qd, pd] = commuting_marginals(pair.js, sp.basis);
      double worst = 0.0;
      for (const Generator& g : generators) {
        const double quantum = s_f(pair.js, g).value;
        const double classical = i_f(qd, pd, g);
        if (std::isfinite(quantum) && std::isfinite(classical)) {
          worst = std::max(worst, std::abs(quantum - classical));
        } else if (std::isfinite(quantum) != std::isfinite(classical)) {
          worst = kInfinity;
        }
      }
      out.classical_gap = worst;
    }
  } catch (const PreconditionError& e) {
    out = TrialResult{};
    out.precondition_error = fmt::format("trial {}: {}", trial, e.what());
  }
  return out;
}

}  // namespace

double FuzzConfig::effective_floor() const {
  if (allow_singular) return 0.0;
  return floor.value_or(default_floor(dim));
}

void FuzzConfig::validate() const {
  if (trials < 1) throw PreconditionError(fmt::format("trials must be >= 1, got {}", trials));
  if (dim < 1) throw PreconditionError(fmt::format("dim must be >= 1, got {}", dim));
  if (!(options.tol.abs_tol > 0.0 || options.tol.rel_tol > 0.0)) {
    throw PreconditionError("tolerance must be positive");
  }
  const double fl = effective_floor();
  if (!(fl >= 0.0 && fl * static_cast<double>(dim) < 1.0)) {
    throw PreconditionError(fmt::format("floor must lie in [0, 1/dim), got {}", fl));
  }
}

std::vector<Generator> resolve_generators(const FuzzConfig& config, std::vector<std::string>* dropped) {
  std::vector<Generator> all;
  if (config.generators.empty()) {
    all = full_catalog();
  } else {
    for (const auto& spec : config.generators) all.push_back(parse_generator(spec));
  }
  if (!config.allow_singular) return all;
  std::vector<Generator> kept;
  for (auto& g : all) {
    if (std::isfinite(g.value_at_zero)) {
      kept.push_back(std::move(g));
    } else if (dropped != nullptr) {
      dropped->push_back(g.name);
    }
  }
  return kept;
}

SampledPair replay_pair(const FuzzConfig& config, std::int64_t trial) {
  CounterRng rng = CounterRng(config.seed).split(static_cast<std::uint64_t>(trial));
  return sample_pair(config.sampler, config.dim, config.effective_floor(), rng);
}

ReportList replay_violation(const FuzzConfig& config, const Violation& violation) {
  const SampledPair sp = replay_pair(config, violation.trial);
  const AnalyzedPair pair = analyze_pair(sp.q, sp.p, config.options);
  ReportList out;
  for (auto& rep : certify(pair, parse_generator(violation.generator), config.options)) {
    if (rep.check == violation.check) out.push_back(std::move(rep));
  }
  return out;
}

FuzzSummary fuzz(const FuzzConfig& config) {
  config.validate();
  FuzzSummary summary;
  summary.config = config;
  const std::vector<Generator> generators = resolve_generators(config, &summary.dropped_generators);
  for (const auto& g : generators) summary.generators.push_back(g.name);

  const auto n = static_cast<std::size_t>(config.trials);
  std::vector<TrialResult> results(n);
  unsigned threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

  if (threads <= 1) {
    for (std::size_t t = 0; t < n; ++t) results[t] = run_trial(config, generators, static_cast<std::int64_t>(t));
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (std::size_t t = next++; t < n; t = next++) {
        try {
          results[t] = run_trial(config, generators, static_cast<std::int64_t>(t));
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (auto& res : results) {
    summary.reports += res.reports;
    for (const auto& [name, stats] : res.checks) merge(summary.checks[name], stats);
    for (auto& v : res.violations) summary.violations.push_back(std::move(v));
    if (res.classical_gap) {
      summary.max_classical_gap = std::max(summary.max_classical_gap.value_or(0.0), *res.classical_gap);
    }
    if (res.precondition_error) {
      ++summary.precondition_errors;
      if (summary.precondition_messages.size() < kKeptMessages) {
        summary.precondition_messages.push_back(*res.precondition_error);
      }
    }
  }
  return summary;
}

}  // namespace qfdiv
