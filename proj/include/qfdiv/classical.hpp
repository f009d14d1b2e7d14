#pragma once

// Csiszár f-divergence of discrete distributions, the commuting-case oracle
// for the quantum engine.

#include <cstddef>
#include <vector>

#include "qfdiv/chain.hpp"
#include "qfdiv/generators.hpp"

namespace qfdiv {

/// Nonnegative weights summing to 1 within 1e-12. Never renormalized.
class DiscreteDistribution {
 public:
  explicit DiscreteDistribution(std::vector<double> weights);

  const std::vector<double>& weights() const { return w_; }
  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }

 private:
  std::vector<double> w_;
};

/// I_f(q, p) = sum_x p_x f(q_x / p_x). Terms with p_x = 0 contribute 0 when
/// q_x = 0 and q_x f*(0) otherwise. Returns +inf when any term is infinite.
double i_f(const DiscreteDistribution& q, const DiscreteDistribution& p, const Generator& f);

/// sum_x |q_x - p_x|
double total_variation(const DiscreteDistribution& q, const DiscreteDistribution& p);

/// f(1) <= I_f <= f(0) + f*(0)
InequalityChain range_check(const DiscreteDistribution& q, const DiscreteDistribution& p, const Generator& f,
                            Tolerance tol = Tolerance::absolute(1e-10));

/// 0 <= I_f <= (f(0) + f*(0)) V / 2 for normalized f. An infinite
/// f(0) + f*(0) makes the upper link vacuous.
InequalityChain refinement_bound_check(const DiscreteDistribution& q, const DiscreteDistribution& p,
                                       const Generator& f, Tolerance tol = Tolerance::absolute(1e-10));

/// Chain [|I_{shift(f,c)} - I_f|, 1e-11 max(1, |I_f|)] with no extra allowance.
InequalityChain shift_invariance_check(const DiscreteDistribution& q, const DiscreteDistribution& p,
                                       const Generator& f, double c);

}  // namespace qfdiv
