#pragma once

// Ordered inequality chains t_0 <= t_1 <= ... <= t_n over the extended reals.
// Values are doubles; +infinity is the only infinite value a correct
// evaluation produces, and NaN always signals a failure.

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace qfdiv {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool is_pos_inf(double v) { return v == kInfinity; }

enum class Verdict { pass, fail, vacuous, skipped };

std::string_view to_string(Verdict v);

/// Allowance for a link "left <= right": left may exceed right by
/// max(abs_tol, rel_tol * |right|).
struct Tolerance {
  double abs_tol = 0.0;
  double rel_tol = 0.0;

  static constexpr Tolerance absolute(double a) { return {a, 0.0}; }
  static constexpr Tolerance relative(double r) { return {0.0, r}; }
  static constexpr Tolerance mixed(double a, double r) { return {a, r}; }
  /// tol * max(1, |right|)
  static constexpr Tolerance scaled(double t) { return {t, t}; }

  double allowance(double right) const { return std::fmax(abs_tol, rel_tol * std::fabs(right)); }
};

struct ChainTerm {
  std::string name;
  double value = 0.0;
};

struct InequalityChain {
  std::vector<ChainTerm> terms;
  std::vector<double> slacks;    ///< right - left per link
  std::vector<Verdict> links;    ///< per link
  Verdict verdict = Verdict::pass;

  bool holds() const { return verdict != Verdict::fail; }
  double value(std::string_view name) const;
};

/// Link rules: NaN on either side fails; +inf on the right is vacuous;
/// +inf on the left with a finite right fails; otherwise the link passes iff
/// left <= right + tol.allowance(right). The chain fails if any link fails,
/// is vacuous if any link is vacuous, and passes otherwise.
InequalityChain evaluate_chain(std::vector<ChainTerm> terms, Tolerance tol);

Verdict judge_link(double left, double right, Tolerance tol);

}  // namespace qfdiv
