#pragma once

// Convex generator functions f: [0, inf) -> R with the analytic data the
// divergence and bound code needs: the limit at 0, one-sided derivatives,
// and the two asymptotic constants that the conjugate f*(u) = u f(1/u)
// turns into its own limit and derivative at 0.

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qfdiv {

using RealFunction = std::function<double(double)>;

struct Generator {
  /// Canonical spec string, e.g. "tsallis:q=0.5". Parses back to an equal generator.
  std::string name;
  /// Catalog family ("tsallis", "kl-quantum", ...), or "custom"/"conjugate"/"shift".
  std::string family;
  std::vector<std::pair<std::string, double>> params;

  RealFunction f;         ///< on (0, inf)
  RealFunction df_left;   ///< f'_-, on (0, inf)
  RealFunction df_right;  ///< f'_+, on (0, inf)

  double value_at_zero = 0.0;          ///< f(0) = lim_{u->0+} f(u), may be +inf
  double slope_at_infinity = 0.0;      ///< f*(0) = lim_{u->inf} f(u)/u, may be +inf
  double deriv_at_zero = 0.0;          ///< f'_+(0) = lim_{u->0+} f'(u), may be -inf
  double intercept_at_infinity = 0.0;  ///< lim_{u->inf} f(u) - u f'(u) = f*'_+(0), may be -inf

  bool normalized = true;
  bool smooth = true;        ///< continuously differentiable on (0, inf)
  bool approximate = false;  ///< derivatives are finite differences

  /// f(t) for t >= 0, with f(0) = value_at_zero.
  double operator()(double t) const { return t == 0.0 ? value_at_zero : f(t); }
  double deriv_right(double t) const { return t == 0.0 ? deriv_at_zero : df_right(t); }
  double deriv_left(double t) const { return df_left(t); }

  /// Throws std::out_of_range if absent.
  double param(std::string_view key) const;
};

/// f*(u) = u f(1/u). Limits at 0 and infinity trade places.
Generator conjugate(const Generator& f);

/// f(u) + c (u - 1)
Generator shift(const Generator& f, double c);

/// User-supplied convex f with finite-difference derivatives (step 1e-7 max(1,t)).
/// The derivative limit at 0 is unknown and taken as -inf, which makes the
/// derivative-based bounds vacuous at r = 0 rather than wrong.
Generator custom_generator(std::string name, RealFunction f, double value_at_zero,
                           double slope_at_infinity);

/// Parses "name[:key=value[,key=value]]". Hyphens and underscores in names are
/// interchangeable; "kl" aliases "kl-quantum"; "inf" is accepted as a value.
/// Throws FormatError on unknown names/keys and PreconditionError on
/// out-of-range parameters.
Generator parse_generator(std::string_view spec);

/// Every catalog entry at a spread of parameter values.
std::vector<Generator> full_catalog();
/// Spec strings of full_catalog().
std::vector<std::string> full_catalog_specs();
/// Family names accepted by parse_generator, with their parameter keys.
std::vector<std::string> catalog_families();

// Family constructors. Parameter ranges are checked.
Generator chi_alpha(double alpha);
Generator dichotomy(double alpha);
Generator matsushita(double alpha);
Generator puri_vincze(double alpha);
Generator arimoto(double alpha);  ///< alpha = +inf allowed
Generator kl_quantum();
Generator neg_log();
Generator total_variation_generator();
Generator chi2();
Generator tsallis(double q);
Generator hellinger();
Generator inv_minus_one();

/// [(R-1) f(r) + (1-r) f(R)] / (R-r); a zero coefficient annihilates an infinite value.
double secant_bound(const Generator& f, double r, double R);

/// (f(R)-f(t))/(R-t) - (f(t)-f(r))/(t-r), for r < t < R.
double psi(const Generator& f, double t, double r, double R);

/// Supremum of psi over (r, R): 10001 uniform points on [r+h, R-h], h = (R-r) 1e-6,
/// t = 1 when r < 1 < R, and the two endpoint limits
/// (f(R)-f(r))/(R-r) - f'_+(r) and f'_-(R) - (f(R)-f(r))/(R-r).
double psi_sup(const Generator& f, double r, double R);

/// f(r) + f(R) - 2 f((r+R)/2)
double jensen_gap_bound(const Generator& f, double r, double R);

/// f'_-(R) - f'_+(r)
double derivative_spread(const Generator& f, double r, double R);

struct GeneratorAudit {
  bool convex = true;
  bool derivatives_ordered = true;
  bool derivative_monotone = true;
  bool normalization_ok = true;
  std::vector<std::string> problems;

  bool ok() const { return convex && derivatives_ordered && derivative_monotone && normalization_ok; }
};

/// Probes the Generator invariants on a log grid over (1e-6, 1e3): midpoint
/// convexity, f'_- <= f'_+, f'_+ nondecreasing, and |f(1)| <= 1e-14 when
/// normalized. Comparisons allow 1e-12 max(1, |operands|).
GeneratorAudit audit_generator(const Generator& f);

}  // namespace qfdiv
