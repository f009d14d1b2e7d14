#include "qfdiv/bounds.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qfdiv/errors.hpp"

namespace qfdiv {

namespace {

constexpr double kNegligibleWeight = 1e-14;

// A zero factor annihilates an infinite one.
double times(double a, double b) { return (a == 0.0 || b == 0.0) ? 0.0 : a * b; }

BoundChainReport start(const AnalyzedPair& pair, std::string check, const Generator& f) {
  BoundChainReport rep;
  rep.check = std::move(check);
  rep.generator = f.name;
  rep.dim = pair.js.dim();
  rep.r = pair.js.r;
  rep.R = pair.js.R;
  return rep;
}

BoundChainReport finish(BoundChainReport rep, std::vector<ChainTerm> terms, const HarnessOptions& options,
                        Tolerance tol) {
  if (options.bound_scale != 1.0) {
    for (std::size_t k = 1; k < terms.size(); ++k) terms[k].value *= options.bound_scale;
    rep.notes.push_back(fmt::format("bounds scaled by {} (self-test)", options.bound_scale));
  }
  rep.chain = evaluate_chain(std::move(terms), tol);
  rep.verdict = rep.chain.verdict;
  return rep;
}

BoundChainReport finish(BoundChainReport rep, std::vector<ChainTerm> terms, const HarnessOptions& options) {
  return finish(std::move(rep), std::move(terms), options, options.tol);
}

BoundChainReport skipped(BoundChainReport rep, std::string reason) {
  rep.verdict = Verdict::skipped;
  rep.notes.push_back(std::move(reason));
  return rep;
}

double s_f_value(const AnalyzedPair& pair, const Generator& f) { return s_f(pair.js, f).value; }

// Closed-form divergences with the roles of Q and P exchanged need Q invertible.
bool reverse_available(const AnalyzedPair& pair) { return pair.q_invertible && pair.js.r > 0.0; }

// True when every occupied ratio is r or R, where the secant bound is attained.
bool ratios_at_endpoints(const JointSpectrum& js) {
  for (Eigen::Index j = 0; j < js.dim(); ++j) {
    for (Eigen::Index i = 0; i < js.dim(); ++i) {
      if (js.mu(j) * js.w(i, j) <= kNegligibleWeight) continue;
      const double x = js.lambda(i) / js.mu(j);
      const bool at_r = std::abs(x - js.r) <= 1e-12 * std::max(1.0, js.r);
      const bool at_R = std::abs(x - js.R) <= 1e-12 * std::max(1.0, js.R);
      if (!at_r && !at_R) return false;
    }
  }
  return true;
}

// (R-1) r ln r + (1-r) R ln R, over R - r: the secant bound for t ln t.
double umegaki_secant_value(double r, double R) {
  return ((R - 1.0) * r * std::log(r) + (1.0 - r) * R * std::log(R)) / (R - r);
}

// (1-R) ln r + (r-1) ln R, over R - r: the secant bound for -ln t.
double reverse_umegaki_secant_value(double r, double R) {
  return ((1.0 - R) * std::log(r) + (r - 1.0) * std::log(R)) / (R - r);
}

}  // namespace

bool touches_one(double r, double R) { return std::abs(R - 1.0) <= 1e-12 || std::abs(1.0 - r) <= 1e-12; }

AnalyzedPair analyze_pair(DensityMatrix q, DensityMatrix p, const HarnessOptions& options) {
  JointSpectrum js = joint_spectrum(q, p, options.eps_invert);
  const double v = variational_q(js);
  const double chi = std::sqrt(chi_square_spectral(js));
  const bool q_inv = q.min_eigenvalue() >= options.eps_invert;
  return AnalyzedPair{std::move(q), std::move(p), std::move(js), v, chi, q_inv};
}

ReportList check_nonnegativity(const AnalyzedPair& pair, const Generator& f, const HarnessOptions& options) {
  if (!f.normalized) throw PreconditionError("check_nonnegativity: generator " + f.name + " is not normalized");
  return {finish(start(pair, "nonnegativity", f), {{"zero", 0.0}, {"S_f", s_f_value(pair, f)}}, options)};
}

ReportList check_derivative_gap(const AnalyzedPair& pair, const Generator& f, const HarnessOptions& options) {
  const JointSpectrum& js = pair.js;
  BoundChainReport rep = start(pair, "derivative_gap", f);
  if (!f.smooth) rep.notes.push_back("right derivative used as a subgradient");
  if (f.approximate) rep.notes.push_back("finite-difference derivative");

  // sum_ij mu_j W_ij (x - 1) f'(x) = S_{l f'} - S_{f'}
  double bound = 0.0;
  for (Eigen::Index j = 0; j < js.dim() && !is_pos_inf(bound); ++j) {
    for (Eigen::Index i = 0; i < js.dim(); ++i) {
      const double weight = js.mu(j) * js.w(i, j);
      const double x = js.lambda(i) / js.mu(j);
      const double term = times(x - 1.0, f.deriv_right(x));
      if (std::isinf(term)) {
        if (weight <= kNegligibleWeight) continue;
        bound = term;
        rep.notes.push_back(fmt::format("infinite derivative at occupied ratio {:.6g}", x));
        break;
      }
      bound += weight * term;
    }
  }
  ReportList out{finish(std::move(rep), {{"S_f", s_f_value(pair, f)}, {"derivative_gap_bound", bound}}, options)};

  if (f.family == "neg-log") {
    BoundChainReport cross = start(pair, "reverse_umegaki_derivative_gap", f);
    if (!reverse_available(pair)) {
      out.push_back(skipped(std::move(cross), "Q is not invertible"));
    } else {
      out.push_back(finish(std::move(cross),
                           {{"zero", 0.0},
                            {"U(P,Q)", umegaki(pair.p, pair.q, options.eps_invert)},
                            {"chi2(P,Q)", chi_square(pair.p, pair.q, options.eps_invert)}},
                           options));
    }
  }
  return out;
}

ReportList check_variational_bound(const AnalyzedPair& pair, const Generator& f, const HarnessOptions& options) {
  const double r = pair.js.r;
  const double R = pair.js.R;
  const double v = pair.variational;
  const double chi = pair.chi;
  const double d = derivative_spread(f, r, R);

  ReportList out{finish(start(pair, "variational", f),
                        {{"S_f", s_f_value(pair, f)},
                         {"half_spread_V", times(0.5 * d, v)},
                         {"half_spread_chi", times(0.5 * d, chi)},
                         {"quarter_range_spread", times(0.25 * (R - r), d)}},
                        options)};

  // Closed-form left sides; the right sides use the generator's derivatives in r, R.
  auto special = [&](std::string name, double left, double factor, double last) {
    out.push_back(finish(start(pair, std::move(name), f),
                         {{"closed_form", left}, {"factor_V", factor * v}, {"factor_chi", factor * chi}, {"last", last}},
                         options));
  };
  const double eps = options.eps_invert;
  if (f.family == "chi2") {
    // Sharper than substituting D = 2(R-r): E y^2 <= (R-r) E|y| / 2 for E y = 0, y in [r-1, R-1].
    special("chi2_variational", chi_square(pair.q, pair.p, eps), 0.5 * (R - r), 0.25 * (R - r) * (R - r));
  } else if (f.family == "kl-quantum") {
    if (r > 0.0) {
      const double l = std::log(R / r);
      special("umegaki_variational", umegaki(pair.q, pair.p, eps), 0.5 * l, 0.25 * (R - r) * l);
    } else {
      out.push_back(skipped(start(pair, "umegaki_variational", f), "r = 0"));
    }
  } else if (f.family == "neg-log") {
    if (reverse_available(pair)) {
      special("reverse_umegaki_variational", umegaki(pair.p, pair.q, eps), (R - r) / (2.0 * r * R),
              (R - r) * (R - r) / (4.0 * r * R));
    } else {
      out.push_back(skipped(start(pair, "reverse_umegaki_variational", f), "Q is not invertible"));
    }
  } else if (f.family == "tsallis") {
    if (r > 0.0) {
      const double q = f.param("q");
      const double a = std::pow(R, 1.0 - q);
      const double b = std::pow(r, 1.0 - q);
      const double c = (a - b) / (a * b);
      special("tsallis_variational", tsallis(pair.q, pair.p, q, eps), q / (2.0 * (1.0 - q)) * c,
              q / (4.0 * (1.0 - q)) * c * (R - r));
    } else {
      out.push_back(skipped(start(pair, "tsallis_variational", f), "r = 0"));
    }
  }
  return out;
}

ReportList check_secant_bound(const AnalyzedPair& pair, const Generator& f, const HarnessOptions& options) {
  const double r = pair.js.r;
  const double R = pair.js.R;
  if (!(r < R)) return {skipped(start(pair, "secant", f), "r = R: Q = P")};

  BoundChainReport rep = start(pair, "secant", f);
  if (ratios_at_endpoints(pair.js)) rep.notes.push_back("equality expected: occupied ratios are r and R only");
  ReportList out{finish(std::move(rep), {{"S_f", s_f_value(pair, f)}, {"secant_bound", secant_bound(f, r, R)}},
                        options)};

  const double eps = options.eps_invert;
  if (f.family == "chi2") {
    out.push_back(finish(start(pair, "chi2_secant", f),
                         {{"chi2(Q,P)", chi_square(pair.q, pair.p, eps)},
                          {"secant_form", (R - 1.0) * (1.0 - r) * (R + r + 2.0) / (R - r)}},
                         options));
  } else if (f.family == "kl-quantum") {
    if (r > 0.0) {
      out.push_back(finish(start(pair, "umegaki_secant", f),
                           {{"U(Q,P)", umegaki(pair.q, pair.p, eps)}, {"secant_form", umegaki_secant_value(r, R)}},
                           options));
    } else {
      out.push_back(skipped(start(pair, "umegaki_secant", f), "r = 0"));
    }
  } else if (f.family == "neg-log") {
    if (reverse_available(pair)) {
      out.push_back(finish(start(pair, "reverse_umegaki_secant", f),
                           {{"U(P,Q)", umegaki(pair.p, pair.q, eps)},
                            {"secant_form", reverse_umegaki_secant_value(r, R)}},
                           options));
    } else {
      out.push_back(skipped(start(pair, "reverse_umegaki_secant", f), "Q is not invertible"));
    }
  }
  return out;
}

ReportList check_chord_slope_bound(const AnalyzedPair& pair, const Generator& f, const HarnessOptions& options) {
  const double r = pair.js.r;
  const double R = pair.js.R;
  if (touches_one(r, R)) {
    return {skipped(start(pair, "chord_slope", f), "needs R > 1 > r"),
            skipped(start(pair, "chord_slope_alt", f), "needs R > 1 > r")};
  }
  const double s = s_f_value(pair, f);
  const double k = (R - 1.0) * (1.0 - r) / (R - r);
  const double quarter = 0.25 * (R - r);
  const double at_one = psi(f, 1.0, r, R);
  const double sup = psi_sup(f, r, R);
  const double d = derivative_spread(f, r, R);

  ReportList out;
  out.push_back(finish(start(pair, "chord_slope", f),
                       {{"S_f", s},
                        {"k_psi_at_1", k * at_one},
                        {"k_sup_psi", k * sup},
                        {"k_spread", k * d},
                        {"quarter_range_spread", quarter * d}},
                       options));
  out.push_back(finish(start(pair, "chord_slope_alt", f),
                       {{"S_f", s},
                        {"k_psi_at_1", k * at_one},
                        {"quarter_range_psi_at_1", quarter * at_one},
                        {"quarter_range_sup_psi", quarter * sup},
                        {"quarter_range_spread", quarter * d}},
                       options));

  const double eps = options.eps_invert;
  if (f.family == "chi2") {
    BoundChainReport rep = start(pair, "chi2_chord_slope", f);
    const double bound = (R - 1.0) * (1.0 - r);
    const double secant_form = bound * (R + r + 2.0) / (R - r);
    if (bound < secant_form) rep.notes.push_back("sharper than chi2_secant");
    const double left = chi_square(pair.q, pair.p, eps);
    if (std::abs(left - bound) <= 1e-12 * std::max(1.0, bound)) rep.notes.push_back("equality");
    out.push_back(finish(std::move(rep), {{"chi2(Q,P)", left}, {"chord_form", bound}}, options));
  } else if (f.family == "inv-minus-one") {
    if (reverse_available(pair)) {
      out.push_back(finish(start(pair, "reverse_chi2_chord_slope", f),
                           {{"chi2(P,Q)", chi_square(pair.p, pair.q, eps)},
                            {"chord_form", (R - 1.0) * (1.0 - r) / (R * r)}},
                           options));
    } else {
      out.push_back(skipped(start(pair, "reverse_chi2_chord_slope", f), "Q is not invertible"));
    }
  } else if (f.family == "neg-log") {
    if (reverse_available(pair)) {
      out.push_back(finish(start(pair, "reverse_umegaki_chord_slope", f),
                           {{"U(P,Q)", umegaki(pair.p, pair.q, eps)},
                            {"chord_form", reverse_umegaki_secant_value(r, R)},
                            {"spread_form", (R - 1.0) * (1.0 - r) / (r * R)}},
                           options));
    } else {
      out.push_back(skipped(start(pair, "reverse_umegaki_chord_slope", f), "Q is not invertible"));
    }
  } else if (f.family == "kl-quantum") {
    if (r > 0.0) {
      // psi(1) for t ln t is R ln R/(R-1) + r ln r/(1-r); k psi(1) is the secant value.
      out.push_back(finish(start(pair, "umegaki_chord_slope", f),
                           {{"U(Q,P)", umegaki(pair.q, pair.p, eps)},
                            {"chord_form", umegaki_secant_value(r, R)},
                            {"spread_form", (R - 1.0) * (1.0 - r) * std::log(R / r) / (R - r)}},
                           options));
    } else {
      out.push_back(skipped(start(pair, "umegaki_chord_slope", f), "r = 0"));
    }
  }
  return out;
}

ReportList check_jensen_gap_bound(const AnalyzedPair& pair, const Generator& f, const HarnessOptions& options) {
  const double r = pair.js.r;
  const double R = pair.js.R;
  if (touches_one(r, R)) return {skipped(start(pair, "jensen", f), "needs R > 1 > r")};

  ReportList out{finish(start(pair, "jensen", f),
                        {{"S_f", s_f_value(pair, f)}, {"jensen_gap_bound", jensen_gap_bound(f, r, R)}}, options)};

  const double eps = options.eps_invert;
  if (f.family == "chi2") {
    out.push_back(finish(start(pair, "chi2_jensen", f),
                         {{"chi2(Q,P)", chi_square(pair.q, pair.p, eps)}, {"jensen_form", 0.5 * (R - r) * (R - r)}},
                         options));
  } else if (f.family == "inv-minus-one") {
    if (reverse_available(pair)) {
      out.push_back(finish(start(pair, "reverse_chi2_jensen", f),
                           {{"chi2(P,Q)", chi_square(pair.p, pair.q, eps)},
                            {"jensen_form", (R - r) * (R - r) / (r * R * (r + R))}},
                           options));
    } else {
      out.push_back(skipped(start(pair, "reverse_chi2_jensen", f), "Q is not invertible"));
    }
  } else if (f.family == "neg-log") {
    if (reverse_available(pair)) {
      out.push_back(finish(start(pair, "reverse_umegaki_jensen", f),
                           {{"U(P,Q)", umegaki(pair.p, pair.q, eps)},
                            {"jensen_form", std::log((R + r) * (R + r) / (4.0 * r * R))}},
                           options));
      BoundChainReport cmp = start(pair, "reverse_umegaki_jensen_vs_variational", f);
      cmp.chain = reverse_umegaki_jensen_vs_variational(r, R);
      cmp.verdict = cmp.chain.verdict;
      out.push_back(std::move(cmp));
    } else {
      out.push_back(skipped(start(pair, "reverse_umegaki_jensen", f), "Q is not invertible"));
    }
  }
  return out;
}

ReportList certify(const AnalyzedPair& pair, const Generator& f, const HarnessOptions& options) {
  ReportList out;
  for (auto* check : {&check_nonnegativity, &check_derivative_gap, &check_variational_bound, &check_secant_bound,
                      &check_chord_slope_bound, &check_jensen_gap_bound}) {
    ReportList part = check(pair, f, options);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

InequalityChain chi2_chord_slope_vs_secant(double r, double R) {
  if (!(r > 0.0 && r < 1.0 && R > 1.0)) throw PreconditionError("need 0 < r < 1 < R");
  const double chord = (R - 1.0) * (1.0 - r);
  return evaluate_chain({{"chord_form", chord}, {"secant_form", chord * (R + r + 2.0) / (R - r)}},
                        Tolerance::absolute(1e-12));
}

InequalityChain reverse_umegaki_jensen_vs_variational(double r, double R) {
  if (!(r > 0.0 && r < R)) throw PreconditionError("need 0 < r < R");
  const double x = (R + r) * (R + r) / (4.0 * r * R);
  return evaluate_chain({{"jensen_form", std::log(x)}, {"variational_form", (R - r) * (R - r) / (4.0 * r * R)}},
                        Tolerance::absolute(1e-12));
}

}  // namespace qfdiv
