#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "qfdiv/bounds.hpp"
#include "qfdiv/classical.hpp"
#include "qfdiv/errors.hpp"
#include "qfdiv/fuzz.hpp"
#include "qfdiv/io.hpp"
#include "qfdiv/quantum.hpp"

namespace qfdiv::cli {

namespace {

// Within this of f(0) + f*(0), I_f is flagged as attaining the range maximum.
constexpr double kEqualityTol = 1e-12;
constexpr double kClassicalTol = 1e-10;

struct Options {
  std::string q_file;
  std::string p_file;
  std::vector<std::string> generators;
  std::string format = "json";
  std::string out_file;
  double tol = 1e-9;
  double eps_invert = kDefaultInvertEps;
  bool timestamp = false;
  double bound_scale = 1.0;

  Eigen::Index dim = 4;
  std::int64_t trials = 100;
  std::optional<std::uint64_t> seed;
  std::string sampler = "ginibre";
  std::optional<double> floor;
  bool allow_singular = false;
  unsigned threads = 0;
  std::string violations_file;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw FormatError(fmt::format("{}: not an unsigned 64-bit seed: '{}'", origin, text));
  }
  return v;
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("QFDIV_SEED"); env != nullptr && *env != '\0') {
    return parse_seed(env, "QFDIV_SEED");
  }
  return 0;
}

// SOURCE_DATE_EPOCH wins so that stamped outputs stay reproducible.
std::optional<std::string> make_timestamp(bool requested) {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env != nullptr && *env != '\0') {
    t = static_cast<std::time_t>(parse_seed(env, "SOURCE_DATE_EPOCH"));
  } else if (requested) {
    t = std::time(nullptr);
  } else {
    return std::nullopt;
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

class Run {
 public:
  Run(std::string command, const std::vector<std::string>& args, const Options& o) {
    manifest_.command = std::move(command);
    manifest_.args = args;
    manifest_.timestamp = make_timestamp(o.timestamp);
  }

  RunManifest& manifest() { return manifest_; }

  /// Reads a file and records its digest.
  std::string input(const std::string& path) {
    std::string bytes = read_file(path);
    manifest_.inputs.emplace_back(path, sha256_hex(bytes));
    return bytes;
  }

  DensityMatrix density(const std::string& path) {
    const json j = parse_json(input(path), path);
    return DensityMatrix(matrix_from_json(j));
  }

  DiscreteDistribution distribution(const std::string& path) {
    const json j = parse_json(input(path), path);
    return DiscreteDistribution(distribution_from_json(j));
  }

 private:
  RunManifest manifest_;
};

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out_file.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out_file, std::ios::binary);
  if (!file) throw FormatError(fmt::format("cannot write '{}'", o.out_file));
  file << text;
  if (!file) throw FormatError(fmt::format("write to '{}' failed", o.out_file));
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw FormatError(fmt::format("cannot write '{}'", path));
  file << text;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

std::string csv_manifest_line(const RunManifest& m) { return "# manifest: " + m.to_json().dump() + "\n"; }

std::vector<Generator> generators_of(const Options& o) {
  if (o.generators.empty()) return full_catalog();
  std::vector<Generator> out;
  for (const auto& spec : o.generators) out.push_back(parse_generator(spec));
  return out;
}

HarnessOptions harness_options(const Options& o) {
  if (!(o.tol > 0.0)) throw CLI::ValidationError("--tol", fmt::format("must be positive, got {}", o.tol));
  if (!(o.eps_invert > 0.0)) {
    throw CLI::ValidationError("--eps-invert", fmt::format("must be positive, got {}", o.eps_invert));
  }
  HarnessOptions h;
  h.tol = Tolerance::scaled(o.tol);
  h.eps_invert = o.eps_invert;
  h.bound_scale = o.bound_scale;
  return h;
}

void require_format(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (o.format == a) return;
  }
  throw FormatError(fmt::format("--format {} is not supported by this command", o.format));
}

/// Closed-form value of S_f for the generators that have one; nullopt otherwise.
std::optional<double> closed_form(const DensityMatrix& q, const DensityMatrix& p, const Generator& g, double eps) {
  try {
    if (g.family == "kl-quantum") return umegaki(q, p, eps);
    if (g.family == "chi2") return chi_square(q, p, eps);
    if (g.family == "chi-alpha" && g.param("alpha") == 2.0) return chi_square(q, p, eps);
    if (g.family == "tsallis") return tsallis(q, p, g.param("q"), eps);
    if (g.family == "hellinger") return hellinger_sq(q, p, eps);
    if (g.family == "neg-log") return umegaki(p, q, eps);
    if (g.family == "inv-minus-one") return chi_square(p, q, eps);
  } catch (const PreconditionError&) {
    // The reverse forms need Q invertible; no closed form otherwise.
  }
  return std::nullopt;
}

// The first bound term of each generic chain, for the CSV columns.
const std::vector<std::pair<std::string, std::string>> kBoundColumns = {
    {"variational", "bound_variational"},
    {"secant", "bound_secant"},
    {"chord_slope", "bound_chord_slope"},
    {"jensen", "bound_jensen"},
};

std::string csv_header() {
  std::string h = "generator,value,closed_form,gap,r,R";
  for (const auto& [check, column] : kBoundColumns) h += "," + column;
  return h + ",verdicts\n";
}

std::string csv_row(const Generator& g, double value, std::optional<double> cf, const JointSpectrum& js,
                    const ReportList& reports) {
  std::string row = csv_field(g.name) + "," + num(value) + ",";
  row += cf ? num(*cf) : "";
  row += ",";
  row += cf ? num(std::abs(value - *cf)) : "";
  row += "," + num(js.r) + "," + num(js.R);
  for (const auto& [check, column] : kBoundColumns) {
    row += ",";
    for (const auto& rep : reports) {
      if (rep.check == check && rep.verdict != Verdict::skipped && rep.chain.terms.size() > 1) {
        row += num(rep.chain.terms[1].value);
        break;
      }
    }
  }
  std::string verdicts;
  for (const auto& rep : reports) {
    if (!verdicts.empty()) verdicts += ";";
    verdicts += rep.check + "=" + std::string(to_string(rep.verdict));
  }
  return row + "," + csv_field(verdicts) + "\n";
}

int cmd_compute(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  require_format(o, {"json", "csv"});
  Run run("compute", args, o);
  run.manifest().tolerances["eps_invert"] = o.eps_invert;
  const DensityMatrix q = run.density(o.q_file);
  const DensityMatrix p = run.density(o.p_file);
  const std::vector<Generator> gens = generators_of(o);
  const HarnessOptions h = harness_options(o);
  const AnalyzedPair pair = analyze_pair(q, p, h);

  json results = json::array();
  std::string csv = csv_manifest_line(run.manifest()) + csv_header();
  for (const Generator& g : gens) {
    const DivergenceValue v = s_f(pair.js, g);
    const std::optional<double> cf = closed_form(q, p, g, o.eps_invert);
    json r = {{"generator", g.name}, {"value", extended(v.value)}, {"closed_form", nullptr}, {"gap", nullptr}};
    if (cf) {
      r["closed_form"] = extended(*cf);
      r["gap"] = extended(std::abs(v.value - *cf));
    }
    r["flags"] = v.flags;
    results.push_back(std::move(r));
    if (o.format == "csv") csv += csv_row(g, v.value, cf, pair.js, certify(pair, g, h));
  }
  if (o.format == "csv") {
    emit(o, out, csv);
    return kExitOk;
  }
  json doc = {{"manifest", run.manifest().to_json()},
              {"dim", pair.js.dim()},
              {"r", extended(pair.js.r)},
              {"R", extended(pair.js.R)},
              {"variational_q", pair.variational},
              {"trace_distance", trace_distance(q, p)},
              {"results", std::move(results)}};
  emit(o, out, json_text(doc));
  return kExitOk;
}

int cmd_certify(const Options& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  require_format(o, {"json", "csv"});
  Run run("certify", args, o);
  run.manifest().tolerances["chain"] = o.tol;
  run.manifest().tolerances["eps_invert"] = o.eps_invert;
  const DensityMatrix q = run.density(o.q_file);
  const DensityMatrix p = run.density(o.p_file);
  const std::vector<Generator> gens = generators_of(o);
  const HarnessOptions h = harness_options(o);
  const AnalyzedPair pair = analyze_pair(q, p, h);

  json reports = json::array();
  json failures = json::array();
  std::map<std::string, std::size_t> counts = {{"pass", 0}, {"fail", 0}, {"vacuous", 0}, {"skipped", 0}};
  std::string csv = csv_manifest_line(run.manifest()) + csv_header();
  for (const Generator& g : gens) {
    const ReportList list = certify(pair, g, h);
    for (const auto& rep : list) {
      ++counts[std::string(to_string(rep.verdict))];
      reports.push_back(to_json(rep));
      if (rep.verdict != Verdict::fail) continue;
      for (std::size_t k = 0; k < rep.chain.links.size(); ++k) {
        if (rep.chain.links[k] != Verdict::fail) continue;
        const auto& left = rep.chain.terms[k];
        const auto& right = rep.chain.terms[k + 1];
        failures.push_back({{"generator", rep.generator},
                            {"check", rep.check},
                            {"link", k},
                            {"left_name", left.name},
                            {"right_name", right.name},
                            {"left", extended(left.value)},
                            {"right", extended(right.value)}});
        err << fmt::format("violation: {} {}: {} = {} > {} = {}\n", rep.generator, rep.check, left.name,
                           num(left.value), right.name, num(right.value));
      }
    }
    if (o.format == "csv") {
      const std::optional<double> cf = closed_form(q, p, g, o.eps_invert);
      csv += csv_row(g, s_f(pair.js, g).value, cf, pair.js, list);
    }
  }
  const bool ok = failures.empty();
  if (o.format == "csv") {
    emit(o, out, csv);
  } else {
    json doc = {{"manifest", run.manifest().to_json()},
                {"dim", pair.js.dim()},
                {"r", extended(pair.js.r)},
                {"R", extended(pair.js.R)},
                {"verdict", ok ? "pass" : "fail"},
                {"counts", counts},
                {"failures", std::move(failures)},
                {"reports", std::move(reports)}};
    emit(o, out, json_text(doc));
  }
  return ok ? kExitOk : kExitViolation;
}

int cmd_fuzz(const Options& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  require_format(o, {"json", "csv"});
  if (o.trials < 1) throw CLI::ValidationError("--trials", "must be >= 1");
  if (o.dim < 1) throw CLI::ValidationError("--dim", "must be >= 1");
  FuzzConfig config;
  config.dim = o.dim;
  config.trials = o.trials;
  config.seed = resolve_seed(o);
  config.sampler = parse_sampler(o.sampler);
  config.floor = o.floor;
  config.generators = o.generators;
  config.options = harness_options(o);
  config.threads = o.threads;
  config.allow_singular = o.allow_singular;
  try {
    config.validate();
  } catch (const PreconditionError& e) {
    throw CLI::ValidationError("fuzz", e.what());
  }

  Run run("fuzz", args, o);
  run.manifest().seed = config.seed;
  run.manifest().tolerances["chain"] = o.tol;
  run.manifest().tolerances["eps_invert"] = o.eps_invert;

  const FuzzSummary summary = fuzz(config);

  if (!o.violations_file.empty()) {
    json dump = json::array();
    for (const auto& v : summary.violations) dump.push_back(to_json(v));
    write_file(o.violations_file,
               json_text({{"manifest", run.manifest().to_json()}, {"violations", std::move(dump)}}));
  }
  if (o.format == "csv") {
    std::string csv = csv_manifest_line(run.manifest());
    csv += "check,pass,fail,vacuous,skipped,min_slack,near_tight\n";
    for (const auto& [name, s] : summary.checks) {
      csv += fmt::format("{},{},{},{},{},{},{}\n", name, s.pass, s.fail, s.vacuous, s.skipped, num(s.min_slack),
                         s.near_tight);
    }
    emit(o, out, csv);
  } else {
    json doc = {{"manifest", run.manifest().to_json()}, {"summary", to_json(summary)}};
    if (!summary.violations.empty()) {
      json details = json::array();
      for (const auto& v : summary.violations) details.push_back(to_json(v));
      doc["violation_details"] = std::move(details);
    }
    emit(o, out, json_text(doc));
  }
  if (!summary.violations.empty()) {
    err << fmt::format("{} violation(s) in {} trials\n", summary.violations.size(), config.trials);
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_spectrum(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  require_format(o, {"json", "csv", "text"});
  Run run("spectrum", args, o);
  run.manifest().tolerances["eps_invert"] = o.eps_invert;
  const DensityMatrix q = run.density(o.q_file);
  const DensityMatrix p = run.density(o.p_file);
  const JointSpectrum js = joint_spectrum(q, p, o.eps_invert);
  const Eigen::Index d = js.dim();

  if (o.format == "json") {
    emit(o, out, json_text({{"manifest", run.manifest().to_json()}, {"spectrum", to_json(js)}}));
    return kExitOk;
  }
  std::string text;
  if (o.format == "csv") {
    text = csv_manifest_line(run.manifest()) + "i,j,lambda_i,mu_j,w_ij,ratio\n";
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        text += fmt::format("{},{},{},{},{},{}\n", i, j, num(js.lambda(i)), num(js.mu(j)), num(js.w(i, j)),
                            num(js.lambda(i) / js.mu(j)));
      }
    }
  } else {
    text = fmt::format("dim {}\nr {:.10g}\nR {:.10g}\n", d, js.r, js.R);
    text += "lambda (Q, descending):";
    for (double l : js.lambda) text += fmt::format(" {:.10g}", l);
    text += "\nmu (P, descending):";
    for (double m : js.mu) text += fmt::format(" {:.10g}", m);
    text += "\nW (rows i over lambda, columns j over mu):\n";
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) text += fmt::format("{}{:.10f}", j == 0 ? "  " : " ", js.w(i, j));
      text += "\n";
    }
  }
  emit(o, out, text);
  return kExitOk;
}

int cmd_classical(const Options& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  require_format(o, {"json", "csv"});
  Run run("classical", args, o);
  run.manifest().tolerances["chain"] = kClassicalTol;
  run.manifest().tolerances["equality"] = kEqualityTol;
  const DiscreteDistribution q = run.distribution(o.q_file);
  const DiscreteDistribution p = run.distribution(o.p_file);
  if (q.size() != p.size()) {
    throw PreconditionError(fmt::format("distributions have {} and {} outcomes", q.size(), p.size()));
  }
  const std::vector<Generator> gens = generators_of(o);

  bool ok = true;
  json results = json::array();
  std::string csv = csv_manifest_line(run.manifest()) +
                    "generator,value,range_lower,range_upper,refinement_bound,upper_equality,verdict\n";
  for (const Generator& g : gens) {
    const double value = i_f(q, p, g);
    const InequalityChain range = range_check(q, p, g);
    const InequalityChain refinement = refinement_bound_check(q, p, g);
    const double upper = range.terms.back().value;
    const bool equality = std::isfinite(upper) && std::abs(value - upper) <= kEqualityTol;
    const bool holds = range.holds() && refinement.holds();
    if (!holds) {
      ok = false;
      err << fmt::format("violation: {}: range {} refinement {}\n", g.name, to_string(range.verdict),
                         to_string(refinement.verdict));
    }
    results.push_back({{"generator", g.name},
                       {"value", extended(value)},
                       {"upper_equality", equality},
                       {"range", to_json(range)},
                       {"refinement", to_json(refinement)}});
    csv += fmt::format("{},{},{},{},{},{},{}\n", csv_field(g.name), num(value), num(range.terms.front().value),
                       num(upper), num(refinement.terms.back().value), equality ? "true" : "false",
                       holds ? "pass" : "fail");
  }
  if (o.format == "csv") {
    emit(o, out, csv);
  } else {
    json doc = {{"manifest", run.manifest().to_json()},
                {"outcomes", q.size()},
                {"total_variation", total_variation(q, p)},
                {"results", std::move(results)}};
    emit(o, out, json_text(doc));
  }
  return ok ? kExitOk : kExitViolation;
}

void add_pair_inputs(CLI::App* cmd, Options& o, const std::string& what) {
  cmd->add_option("--q", o.q_file, "Q " + what + " file (JSON)")->required();
  cmd->add_option("--p", o.p_file, "P " + what + " file (JSON)")->required();
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--generator", o.generators, "generator spec, repeatable (default: full catalog)");
  cmd->add_option("--format", o.format, "json | csv");
  cmd->add_option("--out", o.out_file, "write the report here instead of stdout");
  cmd->add_flag("--timestamp", o.timestamp, "record the wall-clock time in the manifest");
}

void add_harness(CLI::App* cmd, Options& o) {
  cmd->add_option("--tol", o.tol, "chain tolerance t: left <= right + t max(1, |right|)")->capture_default_str();
  cmd->add_option("--eps-invert", o.eps_invert, "smallest eigenvalue accepted as invertible")
      ->capture_default_str();
  // Self-test hook: scales every bound term; anything but 1 corrupts the chains.
  cmd->add_option("--corrupt-bound-scale", o.bound_scale)->group("");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum f-divergences and their upper bounds", "qfdiv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  CLI::App* compute = app.add_subcommand("compute", "S_f(Q,P) with closed-form cross-checks");
  add_pair_inputs(compute, o, "density matrix");
  add_common(compute, o);
  add_harness(compute, o);

  CLI::App* certify_cmd = app.add_subcommand("certify", "evaluate every bound chain on one pair");
  add_pair_inputs(certify_cmd, o, "density matrix");
  add_common(certify_cmd, o);
  add_harness(certify_cmd, o);

  CLI::App* fuzz_cmd = app.add_subcommand("fuzz", "seeded search for bound violations");
  add_common(fuzz_cmd, o);
  add_harness(fuzz_cmd, o);
  fuzz_cmd->add_option("--dim", o.dim, "matrix dimension")->capture_default_str();
  fuzz_cmd->add_option("--trials", o.trials, "number of sampled pairs (>= 1)")->capture_default_str();
  fuzz_cmd->add_option("--seed", o.seed, "RNG seed (fallback: QFDIV_SEED, then 0)");
  fuzz_cmd->add_option("--sampler", o.sampler, "ginibre | commuting | mixture")->capture_default_str();
  fuzz_cmd->add_option("--floor", o.floor, "eigenvalue floor (default 1e-6/dim)");
  fuzz_cmd->add_flag("--allow-singular", o.allow_singular,
                     "no floor; drop generators with infinite f(0)");
  fuzz_cmd->add_option("--threads", o.threads, "worker threads (0: hardware concurrency)")->capture_default_str();
  fuzz_cmd->add_option("--violations", o.violations_file, "also write the violations to this file");

  CLI::App* spectrum = app.add_subcommand("spectrum", "joint spectral data lambda, mu, W, r, R");
  add_pair_inputs(spectrum, o, "density matrix");
  spectrum->add_option("--format", o.format, "json | csv | text");
  spectrum->add_option("--out", o.out_file, "write the report here instead of stdout");
  spectrum->add_option("--eps-invert", o.eps_invert, "smallest eigenvalue accepted as invertible")
      ->capture_default_str();
  spectrum->add_flag("--timestamp", o.timestamp, "record the wall-clock time in the manifest");

  CLI::App* classical = app.add_subcommand("classical", "I_f(q,p) of discrete distributions with its range bounds");
  add_pair_inputs(classical, o, "distribution");
  add_common(classical, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (!reversed.empty()) throw CLI::ExtrasError(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compute->parsed()) return cmd_compute(o, args, out);
    if (certify_cmd->parsed()) return cmd_certify(o, args, out, err);
    if (fuzz_cmd->parsed()) return cmd_fuzz(o, args, out, err);
    if (spectrum->parsed()) return cmd_spectrum(o, args, out);
    return cmd_classical(o, args, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitPrecondition;
  }
}

}  // namespace qfdiv::cli
