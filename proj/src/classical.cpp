#include "qfdiv/classical.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qfdiv/errors.hpp"
#include "qfdiv/summation.hpp"

namespace qfdiv {

namespace {

void require_same_length(const DiscreteDistribution& q, const DiscreteDistribution& p) {
  if (q.size() != p.size()) {
    throw PreconditionError(fmt::format("distributions have lengths {} and {}", q.size(), p.size()));
  }
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw PreconditionError("distribution has no weights");
  double sum = 0.0;
  for (double w : w_) {
    if (!std::isfinite(w) || w < 0.0) throw PreconditionError(fmt::format("invalid distribution weight {}", w));
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw PreconditionError(fmt::format("distribution weights sum to {:.17g}, not 1", sum));
  }
}

double i_f(const DiscreteDistribution& q, const DiscreteDistribution& p, const Generator& f) {
  require_same_length(q, p);
  CompensatedSum sum;
  for (std::size_t x = 0; x < p.size(); ++x) {
    double term;
    if (p[x] > 0.0) {
      term = p[x] * f(q[x] / p[x]);
    } else if (q[x] == 0.0) {
      term = 0.0;
    } else {
      term = q[x] * f.slope_at_infinity;
    }
    if (is_pos_inf(term)) return kInfinity;
    sum.add(term);
  }
  return sum.value();
}

double total_variation(const DiscreteDistribution& q, const DiscreteDistribution& p) {
  require_same_length(q, p);
  double sum = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) sum += std::abs(q[x] - p[x]);
  return sum;
}

InequalityChain range_check(const DiscreteDistribution& q, const DiscreteDistribution& p, const Generator& f,
                            Tolerance tol) {
  return evaluate_chain({{"f(1)", f(1.0)},
                         {"I_f", i_f(q, p, f)},
                         {"f(0)+f*(0)", f.value_at_zero + f.slope_at_infinity}},
                        tol);
}

InequalityChain refinement_bound_check(const DiscreteDistribution& q, const DiscreteDistribution& p,
                                       const Generator& f, Tolerance tol) {
  if (!f.normalized) throw PreconditionError("refinement_bound_check: generator " + f.name + " is not normalized");
  const double spread = f.value_at_zero + f.slope_at_infinity;
  const double v = total_variation(q, p);
  const double bound = is_pos_inf(spread) ? kInfinity : 0.5 * spread * v;
  return evaluate_chain({{"zero", 0.0}, {"I_f", i_f(q, p, f)}, {"half_spread_times_V", bound}}, tol);
}

InequalityChain shift_invariance_check(const DiscreteDistribution& q, const DiscreteDistribution& p,
                                       const Generator& f, double c) {
  const double base = i_f(q, p, f);
  const double shifted = i_f(q, p, shift(f, c));
  const double gap = (is_pos_inf(base) && is_pos_inf(shifted)) ? 0.0 : std::abs(shifted - base);
  const double allowed = is_pos_inf(base) ? 0.0 : 1e-11 * std::max(1.0, std::abs(base));
  return evaluate_chain({{"shift_gap", gap}, {"allowed", allowed}}, Tolerance::absolute(0.0));
}

}  // namespace qfdiv
