#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace twosex::cli {

inline constexpr const char* kToolName = "twosex";
inline constexpr const char* kToolVersion = "0.1.0";

/// A table cell: null, number, integer, text or flag.
using Cell = std::variant<std::monostate, double, Count, std::string, bool>;

/// A command's output: metadata plus one table. Encodes to JSON or CSV with
/// identical numeric content.
struct Report {
  std::string command;
  nlohmann::json meta = nlohmann::json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_note(const std::string& note);
};

/// Header with tool, version, command, resolved config, seed and RNG scheme.
Report make_report(const std::string& command, const RunConfig& config);

nlohmann::json to_json(const Report& report);
void write_json(const Report& report, std::ostream& os);
/// Metadata as "# key: <json>" comment lines, then a header row and data rows.
/// Numbers use 17 significant digits; nulls are empty fields.
void write_csv(const Report& report, std::ostream& os);
void write_report(const Report& report, OutputFormat format, std::ostream& os);

/// Parses write_csv output back into a report (for round-trip checks).
Report read_csv(std::istream& is);

/// Compact table with 6 significant digits for terminals.
void write_summary(const Report& report, std::ostream& os);

}  // namespace twosex::cli
