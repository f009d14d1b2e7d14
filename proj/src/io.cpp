#include "qfdiv/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "qfdiv/errors.hpp"

namespace qfdiv {

json extended(double v) {
  if (std::isnan(v)) return "nan";
  if (v == kInfinity) return "inf";
  if (v == -kInfinity) return "-inf";
  return v;
}

double parse_extended(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    if (s == "nan") return std::nan("");
  }
  throw FormatError("expected a number or one of \"inf\", \"-inf\", \"nan\"; got " + j.dump());
}

json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  bool any_imaginary = false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json re_row = json::array();
    json im_row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
      any_imaginary |= m(i, j).imag() != 0.0;
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  json out = {{"dim", m.rows()}, {"re", std::move(re)}};
  if (any_imaginary) out["im"] = std::move(im);
  return out;
}

namespace {

RealMatrix real_block(const json& rows, const char* key, Eigen::Index expected_dim) {
  if (!rows.is_array() || rows.empty()) throw FormatError(fmt::format("matrix \"{}\" must be a non-empty array of rows", key));
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (expected_dim >= 0 && n != expected_dim) {
    throw FormatError(fmt::format("matrix \"{}\" has {} rows, expected {}", key, n, expected_dim));
  }
  RealMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw FormatError(fmt::format("matrix \"{}\" row {} must have {} entries", key, i, n));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const json& x = row[static_cast<std::size_t>(j)];
      if (!x.is_number()) throw FormatError(fmt::format("matrix \"{}\" entry ({},{}) is not a number", key, i, j));
      out(i, j) = x.get<double>();
    }
  }
  return out;
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re")) throw FormatError("matrix JSON must be an object with a \"re\" field");
  Eigen::Index dim = -1;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
      throw FormatError("matrix \"dim\" must be a positive integer");
    }
    dim = static_cast<Eigen::Index>(j["dim"].get<long long>());
  }
  const RealMatrix re = real_block(j["re"], "re", dim);
  ComplexMatrix out = re.cast<Complex>();
  if (j.contains("im")) out += Complex(0.0, 1.0) * real_block(j["im"], "im", re.rows()).cast<Complex>();
  return out;
}

json distribution_to_json(const std::vector<double>& weights) { return {{"weights", weights}}; }

std::vector<double> distribution_from_json(const json& j) {
  if (!j.is_object() || !j.contains("weights") || !j["weights"].is_array() || j["weights"].empty()) {
    throw FormatError("distribution JSON must be an object with a non-empty \"weights\" array");
  }
  std::vector<double> out;
  for (const auto& x : j["weights"]) {
    if (!x.is_number()) throw FormatError("distribution weight is not a number: " + x.dump());
    out.push_back(x.get<double>());
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw FormatError("cannot read " + path);
  return buf.str();
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(fmt::format("{}: malformed JSON: {}", origin, e.what()));
  }
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::string out;
  for (unsigned int k = 0; k < length; ++k) out += fmt::format("{:02x}", digest[k]);
  return out;
}

json RunManifest::to_json() const {
  json inputs_json = json::array();
  for (const auto& [path, digest] : inputs) inputs_json.push_back({{"path", path}, {"sha256", digest}});
  json tol = json::object();
  for (const auto& [name, value] : tolerances) tol[name] = value;
  json out = {{"tool", "qfdiv"},      {"version", version},  {"command", command},
              {"args", args},         {"inputs", inputs_json}, {"seed", nullptr},
              {"tolerances", tol},    {"timestamp", nullptr}};
  if (seed) out["seed"] = *seed;
  if (timestamp) out["timestamp"] = *timestamp;
  return out;
}

json to_json(const InequalityChain& chain) {
  json terms = json::array();
  for (const auto& t : chain.terms) terms.push_back({{"name", t.name}, {"value", extended(t.value)}});
  json links = json::array();
  for (std::size_t k = 0; k < chain.links.size(); ++k) {
    links.push_back({{"left", chain.terms[k].name},
                     {"right", chain.terms[k + 1].name},
                     {"slack", extended(chain.slacks[k])},
                     {"verdict", to_string(chain.links[k])}});
  }
  return {{"terms", terms}, {"links", links}, {"verdict", to_string(chain.verdict)}};
}

json to_json(const BoundChainReport& report) {
  json out = {{"check", report.check},
              {"generator", report.generator},
              {"verdict", to_string(report.verdict)},
              {"dim", report.dim},
              {"r", extended(report.r)},
              {"R", extended(report.R)}};
  if (report.verdict != Verdict::skipped) out["chain"] = to_json(report.chain);
  out["notes"] = report.notes;
  return out;
}

json to_json(const JointSpectrum& js) {
  json w = json::array();
  for (Eigen::Index i = 0; i < js.dim(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < js.dim(); ++j) row.push_back(js.w(i, j));
    w.push_back(std::move(row));
  }
  return {{"dim", js.dim()},
          {"lambda", std::vector<double>(js.lambda.begin(), js.lambda.end())},
          {"mu", std::vector<double>(js.mu.begin(), js.mu.end())},
          {"w", std::move(w)},
          {"r", extended(js.r)},
          {"R", extended(js.R)}};
}

json to_json(const CheckStats& stats) {
  return {{"pass", stats.pass},
          {"fail", stats.fail},
          {"vacuous", stats.vacuous},
          {"skipped", stats.skipped},
          {"min_slack", extended(stats.min_slack)},
          {"near_tight", stats.near_tight},
          {"slack_histogram", stats.slack_histogram}};
}

json to_json(const Violation& v) {
  return {{"trial", v.trial},
          {"seed", v.seed},
          {"generator", v.generator},
          {"check", v.check},
          {"link", v.link},
          {"left_name", v.left_name},
          {"right_name", v.right_name},
          {"left", extended(v.left)},
          {"right", extended(v.right)},
          {"q", matrix_to_json(v.q)},
          {"p", matrix_to_json(v.p)}};
}

json to_json(const FuzzConfig& config) {
  return {{"dim", config.dim},
          {"trials", config.trials},
          {"seed", config.seed},
          {"sampler", to_string(config.sampler)},
          {"floor", config.effective_floor()},
          {"allow_singular", config.allow_singular},
          {"tol", config.options.tol.rel_tol},
          {"eps_invert", config.options.eps_invert}};
}

json to_json(const FuzzSummary& summary) {
  json checks = json::object();
  for (const auto& [name, stats] : summary.checks) checks[name] = to_json(stats);
  json out = {{"config", to_json(summary.config)},
              {"generators", summary.generators},
              {"dropped_generators", summary.dropped_generators},
              {"reports", summary.reports},
              {"violations", summary.violations.size()},
              {"precondition_errors", summary.precondition_errors},
              {"precondition_messages", summary.precondition_messages},
              {"slack_histogram_edges", {"<0", "[0,1e-12)", "[1e-12,1e-9)", "[1e-9,1e-6)", "[1e-6,1e-3)", "[1e-3,1)", ">=1"}},
              {"checks", checks}};
  if (summary.max_classical_gap) out["max_classical_gap"] = extended(*summary.max_classical_gap);
  return out;
}

}  // namespace qfdiv
