#include "qfdiv/chain.hpp"

#include <stdexcept>

namespace qfdiv {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::vacuous: return "vacuous";
    case Verdict::skipped: return "skipped";
  }
  return "unknown";
}

double InequalityChain::value(std::string_view name) const {
  for (const auto& t : terms) {
    if (t.name == name) return t.value;
  }
  throw std::out_of_range("no chain term named " + std::string(name));
}

Verdict judge_link(double left, double right, Tolerance tol) {
  if (std::isnan(left) || std::isnan(right)) return Verdict::fail;
  if (is_pos_inf(right)) return Verdict::vacuous;
  if (is_pos_inf(left)) return Verdict::fail;
  return left <= right + tol.allowance(right) ? Verdict::pass : Verdict::fail;
}

InequalityChain evaluate_chain(std::vector<ChainTerm> terms, Tolerance tol) {
  InequalityChain chain;
  chain.terms = std::move(terms);
  bool any_vacuous = false;
  bool any_fail = false;
  for (std::size_t k = 0; k + 1 < chain.terms.size(); ++k) {
    const double left = chain.terms[k].value;
    const double right = chain.terms[k + 1].value;
    const Verdict v = judge_link(left, right, tol);
    chain.links.push_back(v);
    chain.slacks.push_back(is_pos_inf(right) ? kInfinity : right - left);
    any_vacuous |= v == Verdict::vacuous;
    any_fail |= v == Verdict::fail;
  }
  chain.verdict = any_fail ? Verdict::fail : (any_vacuous ? Verdict::vacuous : Verdict::pass);
  return chain;
}

}  // namespace qfdiv
