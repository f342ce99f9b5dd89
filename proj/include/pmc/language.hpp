#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pmc::language {

enum class PatternType { ControlFlow, Data, Resource };
enum class Support { None, Partial, Full };

std::string to_string(PatternType type);
PatternType parse_pattern_type(const std::string& text);
std::string to_string(Support support);
Support parse_support(const std::string& text);

struct PatternEntry {
  std::string id;
  std::string name;
  PatternType type = PatternType::ControlFlow;
  Support support = Support::None;
};

/// Workflow-pattern support of one language. Patterns absent from `entries`
/// count as unsupported.
struct PatternSupportTable {
  std::vector<PatternEntry> entries;
  std::map<PatternType, int> catalog_size;
  /// Contribution of a partially supported pattern; full support counts 1.
  double partial_weight = 1.0;
};

struct LanguageDescriptor {
  std::string name;
  double elements = 0.0;         // x
  double characteristics = 0.0;  // y
  double relationships = 0.0;    // z
  std::string counting_rule;
  PatternSupportTable patterns;
};

/// Euclidean norm of (x, y, z).
double complexity_score(const LanguageDescriptor& descriptor);

enum class NormalizationMode {
  /// 10 - (10*c - c) / (max * 10): maps the largest norm to 9.1 and zero to 10.
  Verbatim,
  /// Full-range min-max alternative: largest norm -> 1, smallest -> 10.
  /// Offered for sensitivity analysis; scoring uses Verbatim.
  FullRange,
};

/// Complexity coefficient per language name. Throws on an empty registry or
/// when every norm is zero.
std::map<std::string, double> normalize_complexity(const std::vector<LanguageDescriptor>& registry,
                                                   NormalizationMode mode = NormalizationMode::Verbatim);

struct PatternScore {
  double total = 0.0;  // fully plus partially supported patterns, all types
  std::map<PatternType, double> supported;
  std::map<PatternType, double> percentage;  // supported / catalog size, in [0, 1]

  double control_flow_percentage() const;
};

/// Throws when a type with entries has a catalog size of zero.
PatternScore pattern_score(const LanguageDescriptor& descriptor);

/// Registration check: counts non-negative and not all zero, unique pattern
/// ids per type, catalog sizes covering the supported counts. Throws
/// `pmc::Error` on violation.
void check_descriptor(const LanguageDescriptor& descriptor, const std::string& where = {});

LanguageDescriptor parse_descriptor(std::string_view document, const std::string& source = "<language>");
LanguageDescriptor load_descriptor_file(const std::filesystem::path& path);
std::string serialize_descriptor(const LanguageDescriptor& descriptor);

/// All `*.json` descriptors in a directory, sorted by file name.
std::vector<LanguageDescriptor> load_registry(const std::filesystem::path& directory);

/// Case-insensitive lookup that also accepts short keys ("bpmn", "epc",
/// "uml-ad") matching the start of the registered name.
const LanguageDescriptor* find_language(const std::vector<LanguageDescriptor>& registry, std::string_view name);

}  // namespace pmc::language
