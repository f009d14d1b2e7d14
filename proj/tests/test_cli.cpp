#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "qfdiv/io.hpp"
#include "test_support.hpp"

namespace qfdiv {
namespace {

using test::data_path;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("qfdiv_test_" + name);
  std::ofstream(path) << contents;
  return path.string();
}

std::vector<std::string> pair_args(const std::string& cmd, const std::string& which) {
  return {cmd, "--q", data_path("example_" + which + "_q.json"), "--p", data_path("example_" + which + "_p.json")};
}

TEST(Cli, ComputeExampleA) {
  auto args = pair_args("compute", "a");
  args.insert(args.end(), {"--generator", "kl-quantum"});
  const Result r = call(args);
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json doc = r.doc();
  EXPECT_NEAR(doc["results"][0]["value"].get<double>(), 0.1308120, 1e-7);
  EXPECT_LE(doc["results"][0]["gap"].get<double>(), 1e-12);
  EXPECT_EQ(doc["manifest"]["command"], "compute");
  EXPECT_EQ(doc["manifest"]["inputs"].size(), 2u);
  EXPECT_EQ(doc["manifest"]["inputs"][0]["sha256"].get<std::string>().size(), 64u);
}

TEST(Cli, ComputeSameFileGivesZero) {
  const std::string p = data_path("example_b_p.json");
  const Result r = call({"compute", "--q", p, "--p", p});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json doc = r.doc();
  for (const auto& row : doc["results"]) {
    EXPECT_NEAR(row["value"].get<double>(), 0.0, 1e-12) << row["generator"];
  }
}

TEST(Cli, ComputeExampleBTraceDistanceGap) {
  const Result r = call(pair_args("compute", "b"));
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NEAR(r.doc()["variational_q"].get<double>(), 0.5, 1e-6);
  EXPECT_NEAR(r.doc()["trace_distance"].get<double>(), 0.6403124, 1e-6);
}

TEST(Cli, ParseAndIoErrorsExitTwo) {
  const std::string bad = temp_file("bad.json", "{\"dim\": 2, \"re\": [[1, 0]");
  EXPECT_EQ(call({"compute", "--q", bad, "--p", data_path("example_a_p.json")}).code, cli::kExitUsage);
  EXPECT_EQ(call({"compute", "--q", "/nonexistent/q.json", "--p", data_path("example_a_p.json")}).code,
            cli::kExitUsage);
  EXPECT_EQ(call({"compute", "--q", data_path("example_a_q.json")}).code, cli::kExitUsage);
  EXPECT_EQ(call({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"fuzz", "--bogus-flag"}).code, cli::kExitUsage);
  auto args = pair_args("compute", "a");
  args.insert(args.end(), {"--generator", "nope"});
  EXPECT_EQ(call(args).code, cli::kExitUsage);
  args = pair_args("compute", "a");
  args.insert(args.end(), {"--format", "xml"});
  EXPECT_EQ(call(args).code, cli::kExitUsage);
}

TEST(Cli, PreconditionErrorsExitThree) {
  const std::string singular = temp_file("singular.json", R"({"dim": 2, "re": [[1, 0], [0, 0]]})");
  EXPECT_EQ(call({"compute", "--q", data_path("example_a_q.json"), "--p", singular}).code, cli::kExitPrecondition);
  const std::string not_density = temp_file("trace2.json", R"({"dim": 2, "re": [[1, 0], [0, 1]]})");
  EXPECT_EQ(call({"compute", "--q", not_density, "--p", data_path("example_a_p.json")}).code,
            cli::kExitPrecondition);
  const std::string d3 = temp_file("d3.json", R"({"re": [[0.2, 0, 0], [0, 0.3, 0], [0, 0, 0.5]]})");
  EXPECT_EQ(call({"spectrum", "--q", d3, "--p", data_path("example_a_p.json")}).code, cli::kExitPrecondition);
}

TEST(Cli, HelpAndVersionExitZero) {
  const Result help = call({"--help"});
  EXPECT_EQ(help.code, cli::kExitOk);
  EXPECT_NE(help.out.find("certify"), std::string::npos);
  EXPECT_EQ(help.out.find("corrupt"), std::string::npos);
  EXPECT_EQ(call({"--version"}).code, cli::kExitOk);
}

TEST(Cli, CertifyExampleAChiSquareEquality) {
  auto args = pair_args("certify", "a");
  args.insert(args.end(), {"--generator", "chi2"});
  const Result r = call(args);
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  bool equality = false;
  const json doc = r.doc();
  for (const auto& rep : doc["reports"]) {
    if (rep["check"] == "chi2_chord_slope") {
      for (const auto& note : rep["notes"]) equality = equality || note == "equality";
    }
  }
  EXPECT_TRUE(equality);
}

TEST(Cli, CertifyExampleBFullCatalog) {
  const Result r = call(pair_args("certify", "b"));
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(r.doc()["verdict"], "pass");
  EXPECT_EQ(r.doc()["counts"]["fail"], 0);
}

TEST(Cli, CertifyCorruptedBoundExitsOne) {
  auto args = pair_args("certify", "b");
  args.insert(args.end(), {"--corrupt-bound-scale", "0.5"});
  const Result r = call(args);
  EXPECT_EQ(r.code, cli::kExitViolation);
  EXPECT_FALSE(r.doc()["failures"].empty());
  EXPECT_NE(r.err.find("violation"), std::string::npos);
}

TEST(Cli, CsvReportLayout) {
  auto args = pair_args("certify", "a");
  args.insert(args.end(), {"--generator", "kl", "--generator", "chi2", "--format", "csv"});
  const Result r = call(args);
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string manifest, header, row;
  std::getline(lines, manifest);
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(manifest.rfind("# manifest: {", 0), 0u);
  EXPECT_EQ(header,
            "generator,value,closed_form,gap,r,R,bound_variational,bound_secant,bound_chord_slope,bound_jensen,"
            "verdicts");
  EXPECT_EQ(row.rfind("kl-quantum,", 0), 0u);
  EXPECT_NE(row.find("secant=pass"), std::string::npos);
}

TEST(Cli, FuzzDeterministicAndSeedFallback) {
  const std::vector<std::string> args = {"fuzz", "--dim", "3", "--trials", "5", "--seed", "42",
                                         "--generator", "kl", "--generator", "chi2"};
  const Result a = call(args);
  const Result b = call(args);
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.doc()["manifest"]["seed"], 42);

  ::setenv("QFDIV_SEED", "42", 1);
  const Result env = call({"fuzz", "--dim", "3", "--trials", "5", "--generator", "kl", "--generator", "chi2"});
  ::unsetenv("QFDIV_SEED");
  EXPECT_EQ(env.doc()["summary"].dump(), a.doc()["summary"].dump());

  ::setenv("QFDIV_SEED", "not-a-number", 1);
  EXPECT_EQ(call({"fuzz", "--trials", "1"}).code, cli::kExitUsage);
  ::unsetenv("QFDIV_SEED");
}

TEST(Cli, FuzzFlagsValidation) {
  EXPECT_EQ(call({"fuzz", "--trials", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"fuzz", "--trials", "1", "--sampler", "bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"fuzz", "--trials", "1", "--floor", "0.5"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"fuzz", "--trials", "1", "--tol", "0"}).code, cli::kExitUsage);
}

TEST(Cli, FuzzCorruptedWritesViolations) {
  const auto path = (std::filesystem::temp_directory_path() / "qfdiv_test_violations.json").string();
  const Result r = call({"fuzz", "--dim", "2", "--trials", "2", "--seed", "3", "--generator", "chi2",
                         "--corrupt-bound-scale", "0.5", "--violations", path});
  EXPECT_EQ(r.code, cli::kExitViolation);
  std::ifstream in(path);
  const json dump = json::parse(in);
  ASSERT_FALSE(dump["violations"].empty());
  EXPECT_TRUE(dump["violations"][0].contains("q"));
  EXPECT_EQ(dump["manifest"]["seed"], 3);
}

TEST(Cli, SpectrumExampleB) {
  const Result r = call(pair_args("spectrum", "b"));
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json s = r.doc()["spectrum"];
  EXPECT_NEAR(s["r"].get<double>(), 0.3571429, 1e-7);
  EXPECT_NEAR(s["R"].get<double>(), 2.5, 1e-12);
  for (const auto& row : s["w"]) {
    for (const auto& w : row) EXPECT_NEAR(w.get<double>(), 0.5, 1e-12);
  }
  auto text = pair_args("spectrum", "b");
  text.insert(text.end(), {"--format", "text"});
  EXPECT_NE(call(text).out.find("R 2.5"), std::string::npos);
}

TEST(Cli, SpectrumDiagonalEqualPairHasIdentityWeights) {
  const std::string p = data_path("example_b_p.json");
  const json s = call({"spectrum", "--q", p, "--p", p}).doc()["spectrum"];
  EXPECT_NEAR(s["w"][0][0].get<double>(), 1.0, 1e-14);
  EXPECT_NEAR(s["w"][0][1].get<double>(), 0.0, 1e-14);
}

TEST(Cli, ClassicalDeskAndOrthogonalEquality) {
  Result r = call({"classical", "--q", data_path("dist_q.json"), "--p", data_path("dist_p.json"), "--generator", "kl"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NEAR(r.doc()["results"][0]["value"].get<double>(), 0.1308120, 1e-7);

  r = call({"classical", "--q", data_path("dist_orth_q.json"), "--p", data_path("dist_orth_p.json"), "--generator",
            "hellinger"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(r.doc()["results"][0]["upper_equality"], true);
  EXPECT_NEAR(r.doc()["results"][0]["value"].get<double>(), 1.0, 1e-12);

  const std::string p = data_path("dist_p.json");
  r = call({"classical", "--q", p, "--p", p});
  const json doc = r.doc();
  for (const auto& row : doc["results"]) EXPECT_NEAR(row["value"].get<double>(), 0.0, 1e-15);
}

TEST(Cli, OutFileMatchesStdoutAndManifestReplays) {
  const auto path = (std::filesystem::temp_directory_path() / "qfdiv_test_out.json").string();
  auto args = pair_args("compute", "b");
  const Result stdout_run = call(args);
  auto with_out = args;
  with_out.insert(with_out.end(), {"--out", path});
  ASSERT_EQ(call(with_out).code, cli::kExitOk);
  std::ifstream in(path);
  const std::string file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  // The manifest records the args, so only the results must agree.
  EXPECT_EQ(json::parse(file)["results"], stdout_run.doc()["results"]);

  // Re-running the recorded args reproduces the file byte for byte.
  const json manifest = json::parse(file)["manifest"];
  ASSERT_EQ(call(manifest["args"].get<std::vector<std::string>>()).code, cli::kExitOk);
  std::ifstream again(path);
  const std::string replay((std::istreambuf_iterator<char>(again)), std::istreambuf_iterator<char>());
  EXPECT_EQ(replay, file);
}

TEST(Cli, TimestampIsOptIn) {
  EXPECT_TRUE(call(pair_args("spectrum", "a")).doc()["manifest"]["timestamp"].is_null());
  ::setenv("SOURCE_DATE_EPOCH", "0", 1);
  EXPECT_EQ(call(pair_args("spectrum", "a")).doc()["manifest"]["timestamp"], "1970-01-01T00:00:00Z");
  ::unsetenv("SOURCE_DATE_EPOCH");
}

}  // namespace
}  // namespace qfdiv
