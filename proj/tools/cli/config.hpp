#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "twosex/engine.hpp"

namespace twosex::cli {

/// Malformed or invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };
enum class MatrixMethod { Exact, MonteCarlo };

/// Everything needed to re-run a command bit-identically.
struct RunConfig {
  nlohmann::json law;
  nlohmann::json mating;
  Count initial = 2;

  Count n_max = 10;
  Count cap = 0;
  Count reps = 10000;
  std::uint64_t seed = 1;
  MatrixMethod method = MatrixMethod::Exact;
  OutputFormat format = OutputFormat::Csv;
  std::string out_path;
  bool want_mean = false;

  /// Defaults: litter 3, alpha = 0.25, promiscuous, i = 2.
  static RunConfig defaults();

  ProcessSpec process() const;
  nlohmann::json to_json() const;
};

/// Parses a config document; top-level keys "law", "mating", "initial".
/// Parse errors name the line; field errors name the JSON path.
RunConfig parse_config(const std::string& text, RunConfig base = RunConfig::defaults());
RunConfig load_config(const std::string& path, RunConfig base = RunConfig::defaults());

OffspringLaw law_from_json(const nlohmann::json& law);
MatingRule rule_from_json(const nlohmann::json& mating);

std::string format_name(OutputFormat f);
std::string method_label(MatrixMethod m);

}  // namespace twosex::cli
