#include <gtest/gtest.h>

#include "qfdiv/errors.hpp"
#include "qfdiv/fuzz.hpp"
#include "qfdiv/io.hpp"

namespace qfdiv {
namespace {

FuzzConfig small_config() {
  FuzzConfig c;
  c.dim = 3;
  c.trials = 20;
  c.seed = 42;
  c.generators = {"kl", "chi2", "neg-log", "tsallis:q=0.5", "tv", "inv-minus-one"};
  return c;
}

TEST(Fuzz, NoViolationsAndStats) {
  const FuzzSummary s = fuzz(small_config());
  EXPECT_TRUE(s.violations.empty());
  EXPECT_EQ(s.precondition_errors, 0u);
  EXPECT_GT(s.reports, 0u);
  EXPECT_EQ(s.checks.at("nonnegativity").pass, 20u * 6u);
  EXPECT_FALSE(s.max_classical_gap.has_value());
}

TEST(Fuzz, SerialAndThreadedSummariesAreIdentical) {
  FuzzConfig serial = small_config();
  serial.threads = 1;
  FuzzConfig threaded = small_config();
  threaded.threads = 4;
  EXPECT_EQ(to_json(fuzz(serial)).dump(), to_json(fuzz(threaded)).dump());
  EXPECT_EQ(to_json(fuzz(serial)).dump(), to_json(fuzz(serial)).dump());
}

TEST(Fuzz, ReplayIsBitIdentical) {
  const FuzzConfig c = small_config();
  const SampledPair a = replay_pair(c, 7);
  const SampledPair b = replay_pair(c, 7);
  EXPECT_EQ(a.q.matrix(), b.q.matrix());
  EXPECT_EQ(a.p.matrix(), b.p.matrix());
  EXPECT_NE(replay_pair(c, 8).q.matrix(), a.q.matrix());
}

TEST(Fuzz, CorruptedBoundsProduceReplayableViolations) {
  FuzzConfig c = small_config();
  c.trials = 3;
  c.options.bound_scale = 0.5;
  const FuzzSummary s = fuzz(c);
  ASSERT_FALSE(s.violations.empty());
  const Violation& v = s.violations.front();
  const ReportList again = replay_violation(c, v);
  ASSERT_FALSE(again.empty());
  EXPECT_EQ(again.front().chain.terms[v.link].value, v.left);
  EXPECT_EQ(again.front().chain.terms[v.link + 1].value, v.right);
  // The serialized pair round-trips through the matrix format.
  EXPECT_EQ(matrix_from_json(matrix_to_json(v.q)), v.q);
}

TEST(Fuzz, CommutingSamplerReportsClassicalGap) {
  FuzzConfig c = small_config();
  c.sampler = SamplerKind::commuting;
  const FuzzSummary s = fuzz(c);
  ASSERT_TRUE(s.max_classical_gap.has_value());
  EXPECT_LE(*s.max_classical_gap, 1e-12);
}

TEST(Fuzz, AllowSingularDropsInfiniteGenerators) {
  FuzzConfig c = small_config();
  c.allow_singular = true;
  c.sampler = SamplerKind::mixture;
  const FuzzSummary s = fuzz(c);
  EXPECT_EQ(s.dropped_generators, (std::vector<std::string>{"neg-log", "inv-minus-one"}));
  EXPECT_TRUE(s.violations.empty());
}

TEST(Fuzz, InvalidConfigs) {
  FuzzConfig c = small_config();
  c.trials = 0;
  EXPECT_THROW(fuzz(c), PreconditionError);
  c = small_config();
  c.floor = 0.5;
  EXPECT_THROW(fuzz(c), PreconditionError);
  c = small_config();
  c.options.tol = Tolerance::absolute(0.0);
  EXPECT_THROW(fuzz(c), PreconditionError);
}

}  // namespace
}  // namespace qfdiv
