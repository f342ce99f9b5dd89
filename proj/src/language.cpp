#include "pmc/language.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json_util.hpp"
#include "pmc/error.hpp"
#include "text_util.hpp"

namespace pmc::language {

using detail::json;
using detail::ordered_json;

std::string to_string(PatternType type) {
  switch (type) {
    case PatternType::ControlFlow: return "control_flow";
    case PatternType::Data: return "data";
    case PatternType::Resource: return "resource";
  }
  return "control_flow";
}

PatternType parse_pattern_type(const std::string& text) {
  if (text == "control_flow") return PatternType::ControlFlow;
  if (text == "data") return PatternType::Data;
  if (text == "resource") return PatternType::Resource;
  throw input_error("unknown_pattern_type", "unknown pattern type '" + text + "'");
}

std::string to_string(Support support) {
  switch (support) {
    case Support::None: return "none";
    case Support::Partial: return "partial";
    case Support::Full: return "full";
  }
  return "none";
}

Support parse_support(const std::string& text) {
  if (text == "none") return Support::None;
  if (text == "partial") return Support::Partial;
  if (text == "full") return Support::Full;
  throw input_error("unknown_support", "unknown support level '" + text + "'");
}

double complexity_score(const LanguageDescriptor& d) {
  return std::sqrt(d.elements * d.elements + d.characteristics * d.characteristics +
                   d.relationships * d.relationships);
}

std::map<std::string, double> normalize_complexity(const std::vector<LanguageDescriptor>& registry,
                                                   NormalizationMode mode) {
  if (registry.empty()) throw validation_error("empty_registry", "language registry is empty");
  std::vector<double> norms;
  norms.reserve(registry.size());
  for (const auto& d : registry) norms.push_back(complexity_score(d));
  const double max = *std::max_element(norms.begin(), norms.end());
  const double min = *std::min_element(norms.begin(), norms.end());
  if (!(max > 0.0)) throw validation_error("zero_complexity", "every registered language has complexity 0");

  std::map<std::string, double> out;
  for (std::size_t i = 0; i < registry.size(); ++i) {
    const double c = norms[i];
    double value = 0.0;
    if (mode == NormalizationMode::Verbatim) {
      value = 10.0 - ((10.0 * c) - c) / (max * 10.0);
    } else {
      value = max > min ? 10.0 - 9.0 * (c - min) / (max - min) : 10.0;
    }
    out[registry[i].name] = value;
  }
  return out;
}

double PatternScore::control_flow_percentage() const {
  const auto it = percentage.find(PatternType::ControlFlow);
  return it == percentage.end() ? 0.0 : it->second;
}

PatternScore pattern_score(const LanguageDescriptor& descriptor) {
  const PatternSupportTable& table = descriptor.patterns;
  PatternScore score;
  for (PatternType type : {PatternType::ControlFlow, PatternType::Data, PatternType::Resource}) {
    score.supported[type] = 0.0;
  }
  for (const PatternEntry& entry : table.entries) {
    if (entry.support == Support::Full) score.supported[entry.type] += 1.0;
    else if (entry.support == Support::Partial) score.supported[entry.type] += table.partial_weight;
  }
  for (const auto& [type, supported] : score.supported) {
    score.total += supported;
    const auto size = table.catalog_size.find(type);
    const bool has_entries = std::any_of(table.entries.begin(), table.entries.end(),
                                         [t = type](const PatternEntry& e) { return e.type == t; });
    if (size == table.catalog_size.end() || size->second <= 0) {
      if (has_entries) {
        throw validation_error("catalog_size", "catalog size for " + to_string(type) + " patterns is zero",
                               descriptor.name);
      }
      continue;
    }
    score.percentage[type] = supported / size->second;
  }
  return score;
}

void check_descriptor(const LanguageDescriptor& d, const std::string& where) {
  const std::string at = where.empty() ? d.name : where;
  if (d.name.empty()) throw validation_error("language_name", "language name must not be empty", at);
  if (d.elements < 0.0 || d.characteristics < 0.0 || d.relationships < 0.0) {
    throw validation_error("negative_count", "element, characteristic, and relationship counts must be >= 0", at);
  }
  if (d.elements == 0.0 && d.characteristics == 0.0 && d.relationships == 0.0) {
    throw validation_error("zero_complexity", "a registered language needs a nonzero count", at);
  }
  if (d.patterns.partial_weight < 0.0 || d.patterns.partial_weight > 1.0) {
    throw validation_error("partial_weight", "partial weight must lie in [0, 1]", at);
  }
  std::set<std::pair<PatternType, std::string>> seen;
  std::map<PatternType, int> listed;
  for (const PatternEntry& e : d.patterns.entries) {
    if (!seen.emplace(e.type, e.id).second) {
      throw validation_error("duplicate_pattern", "pattern '" + e.id + "' listed twice for " + to_string(e.type), at);
    }
    if (e.support != Support::None) ++listed[e.type];
  }
  for (const auto& [type, count] : listed) {
    const auto size = d.patterns.catalog_size.find(type);
    const int catalog = size == d.patterns.catalog_size.end() ? 0 : size->second;
    if (catalog < count) {
      throw validation_error("catalog_size", "catalog size for " + to_string(type) + " patterns (" +
                                                 std::to_string(catalog) + ") is below the supported count (" +
                                                 std::to_string(count) + ")", at);
    }
  }
}

LanguageDescriptor parse_descriptor(std::string_view document, const std::string& source) {
  const json root = detail::parse_json(document, source);
  detail::check_format(root, "pmc-language", source);
  LanguageDescriptor d;
  d.name = detail::get_string(root, "name", "");
  d.elements = detail::get_number(root, "elements", "");
  d.characteristics = detail::get_number(root, "characteristics", "");
  d.relationships = detail::get_number(root, "relationships", "");
  if (const json* rule = detail::optional_field(root, "counting_rule")) d.counting_rule = detail::as_string(*rule, "counting_rule");
  if (const json* catalog = detail::optional_field(root, "catalog")) {
    if (!catalog->is_object()) throw input_error("type", "expected an object", source + " catalog");
    for (const auto& [key, value] : catalog->items()) {
      const std::string path = "catalog." + key;
      const PatternType type = detail::with_path(path, [&] { return parse_pattern_type(key); });
      d.patterns.catalog_size[type] = detail::as_int(value, path);
    }
  }
  if (const json* partial = detail::optional_field(root, "partial_weight")) {
    d.patterns.partial_weight = detail::as_number(*partial, "partial_weight");
  }
  if (const json* patterns = detail::optional_field(root, "patterns")) {
    detail::as_array(*patterns, "patterns");
    for (std::size_t i = 0; i < patterns->size(); ++i) {
      const json& row = (*patterns)[i];
      const std::string path = detail::index_path("patterns", i);
      PatternEntry e;
      e.id = detail::get_string(row, "id", path);
      if (const json* name = detail::optional_field(row, "name")) e.name = detail::as_string(*name, path + ".name");
      e.type = detail::with_path(path + ".type", [&] { return parse_pattern_type(detail::get_string(row, "type", path)); });
      e.support = detail::with_path(path + ".support", [&] { return parse_support(detail::get_string(row, "support", path)); });
      d.patterns.entries.push_back(std::move(e));
    }
  }
  check_descriptor(d, source);
  return d;
}

LanguageDescriptor load_descriptor_file(const std::filesystem::path& path) {
  return parse_descriptor(detail::read_file(path), path.string());
}

std::string serialize_descriptor(const LanguageDescriptor& d) {
  ordered_json root;
  root["format"] = "pmc-language";
  root["version"] = "1.0";
  root["name"] = d.name;
  root["elements"] = d.elements;
  root["characteristics"] = d.characteristics;
  root["relationships"] = d.relationships;
  root["counting_rule"] = d.counting_rule;
  ordered_json catalog = ordered_json::object();
  for (const auto& [type, size] : d.patterns.catalog_size) catalog[to_string(type)] = size;
  root["catalog"] = catalog;
  root["partial_weight"] = d.patterns.partial_weight;
  ordered_json rows = ordered_json::array();
  for (const auto& e : d.patterns.entries) {
    rows.push_back({{"id", e.id}, {"name", e.name}, {"type", to_string(e.type)}, {"support", to_string(e.support)}});
  }
  root["patterns"] = rows;
  return root.dump(2) + "\n";
}

std::vector<LanguageDescriptor> load_registry(const std::filesystem::path& directory) {
  if (!std::filesystem::is_directory(directory)) {
    throw input_error("io", "language directory not found", directory.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<LanguageDescriptor> registry;
  for (const auto& file : files) registry.push_back(load_descriptor_file(file));
  return registry;
}

const LanguageDescriptor* find_language(const std::vector<LanguageDescriptor>& registry, std::string_view name) {
  const std::string key = detail::lower(name);
  for (const auto& d : registry) {
    if (detail::lower(d.name) == key) return &d;
  }
  // Short keys: "bpmn" -> "BPMN 2.0", "uml-ad" -> "UML-AD".
  for (const auto& d : registry) {
    const std::string full = detail::lower(d.name);
    if (full.rfind(key, 0) == 0 && (full.size() == key.size() || full[key.size()] == ' ')) return &d;
  }
  return nullptr;
}

}  // namespace pmc::language
