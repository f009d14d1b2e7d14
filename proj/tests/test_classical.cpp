#include <gtest/gtest.h>

#include <cmath>

#include "qfdiv/classical.hpp"
#include "qfdiv/errors.hpp"
#include "qfdiv/sampling.hpp"

namespace qfdiv {
namespace {

const double kInf = std::numeric_limits<double>::infinity();

DiscreteDistribution random_distribution(std::size_t n, CounterRng& rng) {
  const RealVector w = flat_dirichlet(static_cast<Eigen::Index>(n), rng);
  return DiscreteDistribution(std::vector<double>(w.begin(), w.end()));
}

TEST(Distribution, ValidatesWithoutRenormalizing) {
  EXPECT_THROW(DiscreteDistribution({0.5, 0.6}), PreconditionError);
  EXPECT_THROW(DiscreteDistribution({1.5, -0.5}), PreconditionError);
  EXPECT_NO_THROW(DiscreteDistribution({0.5, 0.5 + 1e-13}));
  EXPECT_EQ(DiscreteDistribution({0.25, 0.75})[1], 0.75);
}

TEST(IF, EqualDistributionsGiveZero) {
  const DiscreteDistribution p({0.2, 0.3, 0.5});
  for (const Generator& g : full_catalog()) EXPECT_NEAR(i_f(p, p, g), 0.0, 1e-15) << g.name;
}

TEST(IF, KlDesk) {
  const DiscreteDistribution q({0.75, 0.25});
  const DiscreteDistribution p({0.5, 0.5});
  const double expected = 0.75 * std::log(1.5) + 0.25 * std::log(0.5);
  EXPECT_NEAR(i_f(q, p, kl_quantum()), expected, 1e-15);
  EXPECT_NEAR(expected, 0.1308120, 1e-7);
}

TEST(IF, ZeroDispatch) {
  const DiscreteDistribution q({0.0, 0.4, 0.6});
  const DiscreteDistribution p({0.0, 0.5, 0.5});
  const Generator h = hellinger();
  // p_0 = q_0 = 0 contributes nothing.
  EXPECT_NEAR(i_f(q, p, h), 0.5 * h(0.8) + 0.5 * h(1.2), 1e-15);
  // p_x = 0 < q_x contributes q_x f*(0).
  const DiscreteDistribution q2({0.3, 0.7});
  const DiscreteDistribution p2({0.0, 1.0});
  EXPECT_NEAR(i_f(q2, p2, h), 0.3 * h.slope_at_infinity + h(0.7), 1e-15);
  EXPECT_EQ(i_f(q2, p2, kl_quantum()), kInf);
  EXPECT_EQ(i_f(p2, q2, neg_log()), kInf);
}

TEST(IF, LengthMismatch) {
  EXPECT_THROW(i_f(DiscreteDistribution({1.0}), DiscreteDistribution({0.5, 0.5}), chi2()), PreconditionError);
}

TEST(Range, OrthogonalPairAttainsUpperEnd) {
  const DiscreteDistribution p({1.0, 0.0});
  const DiscreteDistribution q({0.0, 1.0});
  for (const Generator& g : full_catalog()) {
    const double upper = g.value_at_zero + g.slope_at_infinity;
    const InequalityChain c = range_check(q, p, g);
    if (!std::isfinite(upper)) {
      EXPECT_EQ(c.verdict, Verdict::vacuous) << g.name;
      continue;
    }
    EXPECT_EQ(c.verdict, Verdict::pass) << g.name;
    EXPECT_NEAR(i_f(q, p, g), upper, 1e-12) << g.name;
  }
  EXPECT_NEAR(i_f(q, p, hellinger()), 1.0, 1e-15);
}

TEST(Range, RandomPairsStrictlyInside) {
  CounterRng rng(31);
  for (int k = 0; k < 200; ++k) {
    const auto q = random_distribution(8, rng);
    const auto p = random_distribution(8, rng);
    for (const Generator& g : full_catalog()) {
      const InequalityChain c = range_check(q, p, g);
      EXPECT_TRUE(c.holds()) << g.name;
      EXPECT_GT(c.slacks.front(), 0.0) << g.name;
      EXPECT_GE(i_f(q, p, g), -1e-14) << g.name;
    }
  }
}

TEST(Refinement, VariationIsTight) {
  CounterRng rng(32);
  const auto q = random_distribution(5, rng);
  const auto p = random_distribution(5, rng);
  const InequalityChain c = refinement_bound_check(q, p, total_variation_generator());
  EXPECT_EQ(c.verdict, Verdict::pass);
  EXPECT_NEAR(c.terms[1].value, total_variation(q, p), 1e-15);
  EXPECT_NEAR(c.terms[2].value, total_variation(q, p), 1e-15);
}

TEST(Refinement, HellingerHalfVariationAndVacuousKl) {
  CounterRng rng(33);
  for (int k = 0; k < 100; ++k) {
    const auto q = random_distribution(6, rng);
    const auto p = random_distribution(6, rng);
    const InequalityChain c = refinement_bound_check(q, p, hellinger());
    EXPECT_EQ(c.verdict, Verdict::pass);
    EXPECT_NEAR(c.terms[2].value, 0.5 * total_variation(q, p), 1e-15);
    EXPECT_EQ(refinement_bound_check(q, p, kl_quantum()).verdict, Verdict::vacuous);
  }
  const DiscreteDistribution p({0.5, 0.5});
  const InequalityChain same = refinement_bound_check(p, p, hellinger());
  EXPECT_EQ(same.terms[1].value, 0.0);
  EXPECT_EQ(same.terms[2].value, 0.0);
}

TEST(ShiftInvariance, ConstantsFromTheCriterion) {
  CounterRng rng(34);
  for (int k = 0; k < 50; ++k) {
    const auto q = random_distribution(7, rng);
    const auto p = random_distribution(7, rng);
    for (const Generator& g : full_catalog()) {
      for (double c : {-10.0, -1.0, 0.0, 1.0, 3.7, 10.0}) {
        EXPECT_EQ(shift_invariance_check(q, p, g, c).verdict, Verdict::pass) << g.name << " c=" << c;
      }
    }
  }
  const DiscreteDistribution p({0.5, 0.5});
  EXPECT_EQ(i_f(p, p, shift(chi2(), -1.0)), 0.0);
}

// [I_f]^e is symmetric and satisfies the triangle inequality.
void expect_metric(const Generator& g, double e, CounterRng& rng) {
  auto dist = [&](const DiscreteDistribution& a, const DiscreteDistribution& b) { return std::pow(i_f(a, b, g), e); };
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 3);
    const auto x = random_distribution(n, rng);
    const auto y = random_distribution(n, rng);
    const auto z = random_distribution(n, rng);
    EXPECT_NEAR(dist(x, y), dist(y, x), 1e-9) << g.name;
    EXPECT_LE(dist(x, z), dist(x, y) + dist(y, z) + 1e-9) << g.name;
  }
}

TEST(Metricity, MatsushitaAndPuriVincze) {
  CounterRng rng(35);
  for (double alpha : {0.25, 0.5, 1.0}) expect_metric(matsushita(alpha), alpha, rng);
  for (double alpha : {1.0, 2.0, 3.0}) expect_metric(puri_vincze(alpha), 1.0 / alpha, rng);
}

}  // namespace
}  // namespace qfdiv
