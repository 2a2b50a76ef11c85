#include "report.hpp"

#include <charconv>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "twosex/random.hpp"

namespace twosex::cli {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json cell_to_json(const Cell& c) {
  return std::visit(Overloaded{
                        [](std::monostate) { return json(nullptr); },
                        [](double v) { return json(v); },
                        [](Count v) { return json(v); },
                        [](const std::string& v) { return json(v); },
                        [](bool v) { return json(v); },
                    },
                    c);
}

std::string format_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string cell_to_csv(const Cell& c, int digits) {
  return std::visit(Overloaded{
                        [](std::monostate) { return std::string(); },
                        [digits](double v) { return format_double(v, digits); },
                        [](Count v) { return std::to_string(v); },
                        [](const std::string& v) { return quote_csv(v); },
                        [](bool v) { return std::string(v ? "true" : "false"); },
                    },
                    c);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char ch = line[k];
    if (quoted) {
      if (ch == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

Cell parse_cell(const std::string& s) {
  if (s.empty()) return std::monostate{};
  if (s == "true") return true;
  if (s == "false") return false;
  Count i = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
  if (ec == std::errc() && p == s.data() + s.size()) return i;
  double d = 0.0;
  auto [q, ec2] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (ec2 == std::errc() && q == s.data() + s.size()) return d;
  return s;
}

}  // namespace

void Report::add_note(const std::string& note) {
  if (!meta.contains("notes")) meta["notes"] = json::array();
  meta["notes"].push_back(note);
}

Report make_report(const std::string& command, const RunConfig& config) {
  Report r;
  r.command = command;
  r.meta["tool"] = kToolName;
  r.meta["version"] = kToolVersion;
  r.meta["command"] = command;
  r.meta["config"] = config.to_json();
  r.meta["seed"] = config.seed;
  r.meta["rng_scheme"] = std::string(kRngScheme);
  return r;
}

json to_json(const Report& report) {
  json doc = report.meta;
  doc["columns"] = report.columns;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(cell_to_json(c));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

void write_json(const Report& report, std::ostream& os) { os << to_json(report).dump(2) << '\n'; }

void write_csv(const Report& report, std::ostream& os) {
  for (const auto& [key, value] : report.meta.items()) os << "# " << key << ": " << value.dump() << '\n';
  for (std::size_t k = 0; k < report.columns.size(); ++k) os << (k ? "," : "") << quote_csv(report.columns[k]);
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << cell_to_csv(row[k], 17);
    os << '\n';
  }
}

void write_report(const Report& report, OutputFormat format, std::ostream& os) {
  if (format == OutputFormat::Json) write_json(report, os);
  else write_csv(report, os);
}

Report read_csv(std::istream& is) {
  Report r;
  std::string line;
  bool header_done = false;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      r.meta[line.substr(2, colon - 2)] = json::parse(line.substr(colon + 2));
      continue;
    }
    if (!header_done) {
      r.columns = split_csv_line(line);
      header_done = true;
      continue;
    }
    std::vector<Cell> row;
    for (const auto& field : split_csv_line(line)) row.push_back(parse_cell(field));
    r.rows.push_back(std::move(row));
  }
  if (r.meta.contains("command")) r.command = r.meta["command"].get<std::string>();
  return r;
}

void write_summary(const Report& report, std::ostream& os) {
  os << report.command << ": " << report.rows.size() << " rows\n";
  for (std::size_t k = 0; k < report.columns.size(); ++k) os << (k ? "  " : "") << std::setw(12) << report.columns[k];
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "  " : "") << std::setw(12) << cell_to_csv(row[k], 6);
    os << '\n';
  }
}

}  // namespace twosex::cli
