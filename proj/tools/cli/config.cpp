#include "config.hpp"

#include <fstream>
#include <sstream>

#include "twosex/error.hpp"

namespace twosex::cli {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError("config field '" + path + "." + key + "' is missing");
  return obj.at(key);
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number()) throw ConfigError("config field '" + path + "." + key + "' must be a number");
  return v.get<double>();
}

Count integer(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number_integer()) throw ConfigError("config field '" + path + "." + key + "' must be an integer");
  return v.get<Count>();
}

std::string type_of(const json& obj, const std::string& path) {
  const json& v = field(obj, "type", path);
  if (!v.is_string()) throw ConfigError("config field '" + path + ".type' must be a string");
  return v.get<std::string>();
}

int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k)
    if (text[k] == '\n') ++line;
  return line;
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.law = {{"type", "sex-multinomial"}, {"litter", 3}, {"alpha", 0.25}};
  c.mating = {{"type", "promiscuous"}};
  c.initial = 2;
  return c;
}

OffspringLaw law_from_json(const json& law) {
  const std::string type = type_of(law, "law");
  try {
    if (type == "sex-multinomial") {
      const Count litter = law.contains("litter") ? integer(law, "litter", "law") : 3;
      return OffspringLaw::sex_multinomial(litter, number(law, "alpha", "law"));
    }
    if (type == "independent-mg") {
      return OffspringLaw::independent_mg({number(law, "b_f", "law"), number(law, "c_f", "law")},
                                          {number(law, "b_m", "law"), number(law, "c_m", "law")});
    }
    if (type == "table") {
      const json& outcomes = field(law, "outcomes", "law");
      if (!outcomes.is_array()) throw ConfigError("config field 'law.outcomes' must be an array");
      std::vector<WeightedOutcome> table;
      for (std::size_t k = 0; k < outcomes.size(); ++k) {
        const std::string path = "law.outcomes[" + std::to_string(k) + "]";
        table.push_back({{integer(outcomes[k], "f", path), integer(outcomes[k], "m", path)},
                         number(outcomes[k], "p", path)});
      }
      return OffspringLaw::tabulated(std::move(table));
    }
  } catch (const ModelError& e) {
    throw ConfigError(std::string("config field 'law': ") + e.what());
  }
  throw ConfigError("config field 'law.type' must be sex-multinomial, independent-mg or table (got '" + type + "')");
}

MatingRule rule_from_json(const json& mating) {
  const std::string type = type_of(mating, "mating");
  if (type == "promiscuous") return MatingRule::promiscuous();
  if (type == "identity") return MatingRule::identity();
  if (type == "polygamous") {
    const Count k = integer(mating, "k", "mating");
    if (k < 1) throw ConfigError("config field 'mating.k' must be >= 1");
    return MatingRule::polygamous(k);
  }
  throw ConfigError("config field 'mating.type' must be promiscuous, polygamous or identity (got '" + type + "')");
}

ProcessSpec RunConfig::process() const {
  if (initial < 1) throw ConfigError("config field 'initial' must be >= 1");
  return ProcessSpec(law_from_json(law), rule_from_json(mating), initial);
}

json RunConfig::to_json() const {
  return {{"law", law},       {"mating", mating},       {"initial", initial},
          {"n_max", n_max},   {"cap", cap},             {"reps", reps},
          {"seed", seed},     {"method", method_label(method)}, {"format", format_name(format)}};
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error at line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (doc.contains("law")) base.law = doc.at("law");
  if (doc.contains("mating")) base.mating = doc.at("mating");
  if (doc.contains("initial")) base.initial = integer(doc, "initial", "$");
  // Validate eagerly so errors surface before any work starts.
  (void)base.process();
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string format_name(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

std::string method_label(MatrixMethod m) { return m == MatrixMethod::Exact ? "exact" : "mc"; }

}  // namespace twosex::cli
