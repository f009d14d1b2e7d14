#pragma once

// JSON formats and run manifests.
//
//   matrix:        {"dim": d, "re": [[...], ...], "im": [[...], ...]}   ("im" optional)
//   distribution:  {"weights": [...]}
//
// Extended reals serialize as numbers when finite and as the strings "inf",
// "-inf" or "nan" otherwise.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qfdiv/bounds.hpp"
#include "qfdiv/fuzz.hpp"
#include "qfdiv/hermitian.hpp"
#include "qfdiv/quantum.hpp"

namespace qfdiv {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

json extended(double v);
/// Inverse of extended(); throws FormatError on anything else.
double parse_extended(const json& j);

json matrix_to_json(const ComplexMatrix& m);
/// Throws FormatError on malformed or non-square input.
ComplexMatrix matrix_from_json(const json& j);

json distribution_to_json(const std::vector<double>& weights);
std::vector<double> distribution_from_json(const json& j);

/// Whole file as bytes; throws FormatError when unreadable.
std::string read_file(const std::string& path);
/// Parses JSON text; throws FormatError with the parser message.
json parse_json(const std::string& text, const std::string& origin);

/// Lower-case hex SHA-256.
std::string sha256_hex(const std::string& bytes);

struct RunManifest {
  std::string command;
  std::vector<std::string> args;
  std::vector<std::pair<std::string, std::string>> inputs;  ///< path, sha256
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> tolerances;
  std::string version = kVersion;
  std::optional<std::string> timestamp;  ///< null unless requested, to keep outputs byte-stable

  json to_json() const;
};

json to_json(const InequalityChain& chain);
json to_json(const BoundChainReport& report);
json to_json(const JointSpectrum& js);
json to_json(const CheckStats& stats);
json to_json(const Violation& violation);
json to_json(const FuzzConfig& config);
json to_json(const FuzzSummary& summary);

}  // namespace qfdiv
