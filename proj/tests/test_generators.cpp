#include <gtest/gtest.h>

#include <cmath>

#include "qfdiv/errors.hpp"
#include "qfdiv/generators.hpp"

namespace qfdiv {
namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<double> probe_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 90; ++k) grid.push_back(std::pow(10.0, -6.0 + 9.0 * k / 90.0));
  grid.push_back(1.0);
  return grid;
}

TEST(Catalog, EveryEntryNormalizedAndPassesAudit) {
  const auto catalog = full_catalog();
  EXPECT_EQ(catalog.size(), full_catalog_specs().size());
  for (const Generator& g : catalog) {
    SCOPED_TRACE(g.name);
    EXPECT_TRUE(g.normalized);
    EXPECT_LE(std::abs(g(1.0)), 1e-14);
    const GeneratorAudit audit = audit_generator(g);
    EXPECT_TRUE(audit.ok()) << (audit.problems.empty() ? "" : audit.problems.front());
    EXPECT_TRUE(audit_generator(conjugate(g)).ok());
  }
}

TEST(Catalog, SpecNamesParseBackToEqualGenerators) {
  for (const Generator& g : full_catalog()) {
    const Generator back = parse_generator(g.name);
    EXPECT_EQ(back.name, g.name);
    for (double u : {0.1, 0.7, 1.3, 9.0}) EXPECT_EQ(back(u), g(u)) << g.name;
  }
}

TEST(Catalog, DichotomyHalfIsScaledHellinger) {
  const Generator g = dichotomy(0.5);
  for (double u : probe_grid()) {
    const double s = std::sqrt(u) - 1.0;
    EXPECT_NEAR(g(u), 2.0 * s * s, 1e-12 * std::max(1.0, 2.0 * s * s)) << u;
  }
}

TEST(Catalog, ArimotoInfinityIsHalfVariation) {
  const Generator g = arimoto(kInf);
  for (double u : probe_grid()) EXPECT_EQ(g(u), 0.5 * std::abs(1.0 - u));
  // The finite family approaches it.
  const Generator big = arimoto(200.0);
  for (double u : {0.2, 0.9, 3.0}) EXPECT_NEAR(big(u), 0.5 * std::abs(1.0 - u), 1e-2);
}

TEST(Catalog, TotalVariationOneSidedDerivativesAtOne) {
  const Generator g = total_variation_generator();
  EXPECT_EQ(g.deriv_left(1.0), -1.0);
  EXPECT_EQ(g.deriv_right(1.0), 1.0);
}

TEST(Conjugate, KlBecomesNegLog) {
  const Generator c = conjugate(kl_quantum());
  EXPECT_EQ(c.value_at_zero, kInf);
  for (double u : {1e-3, 0.5, 2.0, 50.0}) EXPECT_NEAR(c(u), -std::log(u), 1e-12 * std::max(1.0, std::abs(std::log(u))));
}

TEST(Conjugate, VariationIsSelfConjugate) {
  const Generator c = conjugate(total_variation_generator());
  for (double u : probe_grid()) EXPECT_NEAR(c(u), std::abs(u - 1.0), 1e-12 * std::max(1.0, u));
  EXPECT_EQ(c.value_at_zero, 1.0);
}

TEST(Conjugate, ChiSquareBecomesInverseMinusIdentity) {
  const Generator c = conjugate(chi2());
  EXPECT_EQ(c.value_at_zero, kInf);
  for (double u : probe_grid()) EXPECT_NEAR(c(u), 1.0 / u - u, 1e-12 * std::max(1.0, 1.0 / u));
}

TEST(Conjugate, InvolutionOnGrid) {
  for (const Generator& g : full_catalog()) {
    const Generator cc = conjugate(conjugate(g));
    EXPECT_EQ(cc.value_at_zero, g.value_at_zero) << g.name;
    EXPECT_EQ(cc.slope_at_infinity, g.slope_at_infinity) << g.name;
    for (double u : probe_grid()) {
      const double a = g(u);
      if (!std::isfinite(a)) continue;
      EXPECT_NEAR(cc(u), a, 1e-12 * std::max(1.0, std::abs(a))) << g.name << " at " << u;
    }
  }
}

TEST(SecantBound, DeskValues) {
  EXPECT_NEAR(secant_bound(chi2(), 0.5, 1.5), 0.25, 1e-15);
  const double expected = 0.75 * std::log(1.5) + 0.25 * std::log(0.5);
  EXPECT_NEAR(secant_bound(kl_quantum(), 0.5, 1.5), expected, 1e-15);
  EXPECT_NEAR(expected, 0.1308120, 1e-7);
}

TEST(SecantBound, InfiniteEndpointAndPreconditions) {
  EXPECT_EQ(secant_bound(neg_log(), 0.0, 2.0), kInf);
  EXPECT_THROW(secant_bound(chi2(), 1.0, 1.0), PreconditionError);
  EXPECT_THROW(secant_bound(chi2(), 1.2, 2.0), PreconditionError);
  for (const Generator& g : full_catalog()) EXPECT_GE(secant_bound(g, 0.3, 4.0), -1e-12) << g.name;
}

TEST(Psi, ChiSquareIsConstant) {
  for (double t : {0.6, 1.0, 2.5}) EXPECT_NEAR(psi(chi2(), t, 0.5, 3.0), 2.5, 1e-12);
}

TEST(Psi, InverseMinusOne) {
  const double r = 0.5;
  const double R = 2.0;
  for (double t : {0.7, 1.0, 1.8}) EXPECT_NEAR(psi(inv_minus_one(), t, r, R), (R - r) / (r * R * t), 1e-12);
}

TEST(Psi, KlAtOneFromDefinition) {
  // Chord slopes of t ln t on both sides of 1.
  const double r = 0.4;
  const double R = 3.0;
  const double expected = R * std::log(R) / (R - 1.0) + r * std::log(r) / (1.0 - r);
  EXPECT_NEAR(psi(kl_quantum(), 1.0, r, R), expected, 1e-14);
}

TEST(PsiSup, ChiSquareInverseAndAffine) {
  EXPECT_NEAR(psi_sup(chi2(), 0.5, 3.0), 2.5, 1e-9);
  EXPECT_NEAR(psi_sup(inv_minus_one(), 0.5, 2.0), 3.0, 1e-9);
  const Generator affine = custom_generator("affine", [](double u) { return 3.0 * (u - 1.0); }, -3.0, 3.0);
  EXPECT_NEAR(psi_sup(affine, 0.2, 5.0), 0.0, 1e-6);
}

TEST(PsiSup, CappedByDerivativeSpread) {
  for (const Generator& g : full_catalog()) {
    for (auto [r, R] : {std::pair{0.1, 2.0}, {0.5, 1.5}, {0.01, 40.0}}) {
      const double spread = derivative_spread(g, r, R);
      if (!std::isfinite(spread)) continue;
      EXPECT_LE(psi_sup(g, r, R), spread + 1e-9) << g.name;
      EXPECT_GE(psi(g, 1.0, r, R), -1e-12) << g.name;
    }
  }
}

TEST(JensenGap, DeskForms) {
  const double r = 0.3;
  const double R = 2.2;
  EXPECT_NEAR(jensen_gap_bound(chi2(), r, R), 0.5 * (R - r) * (R - r), 1e-14);
  EXPECT_NEAR(jensen_gap_bound(neg_log(), r, R), std::log((R + r) * (R + r) / (4 * r * R)), 1e-14);
  const Generator affine = custom_generator("affine", [](double u) { return -2.0 * (u - 1.0); }, 2.0, -2.0);
  EXPECT_NEAR(jensen_gap_bound(affine, r, R), 0.0, 1e-14);
}

TEST(Shift, ZeroAndNormalization) {
  const Generator g = shift(chi2(), 0.0);
  for (double u : probe_grid()) EXPECT_EQ(g(u), chi2()(u));
  const Generator s = shift(chi2(), -2.0);
  EXPECT_EQ(s(1.0), 0.0);
  EXPECT_TRUE(s.normalized);
  EXPECT_TRUE(audit_generator(s).ok());
  EXPECT_EQ(parse_generator(s.name).name, s.name);
}

TEST(Parse, AliasesAndErrors) {
  EXPECT_EQ(parse_generator("kl").name, "kl-quantum");
  EXPECT_EQ(parse_generator("umegaki").name, "kl-quantum");
  EXPECT_EQ(parse_generator("chi_alpha:alpha=2").name, "chi-alpha:alpha=2");
  EXPECT_EQ(parse_generator("tsallis:q=0.5").param("q"), 0.5);
  EXPECT_EQ(parse_generator("arimoto:alpha=inf").param("alpha"), kInf);
  EXPECT_EQ(parse_generator("conjugate(chi2)").value_at_zero, kInf);
  EXPECT_THROW(parse_generator("nope"), FormatError);
  EXPECT_THROW(parse_generator("tsallis:alpha=0.5"), FormatError);
  EXPECT_THROW(parse_generator("tsallis:q=abc"), FormatError);
  EXPECT_THROW(parse_generator("tsallis:q=1.5"), PreconditionError);
  EXPECT_THROW(parse_generator("chi-alpha:alpha=0.5"), PreconditionError);
}

TEST(Custom, FiniteDifferenceDerivatives) {
  const Generator g = custom_generator("square", [](double u) { return (u - 1.0) * (u - 1.0); }, 1.0, kInf);
  EXPECT_TRUE(g.approximate);
  EXPECT_EQ(g.deriv_at_zero, -kInf);
  EXPECT_NEAR(g.deriv_right(3.0), 4.0, 1e-6);
  EXPECT_NEAR(g.deriv_left(0.5), -1.0, 1e-6);
}

}  // namespace
}  // namespace qfdiv
