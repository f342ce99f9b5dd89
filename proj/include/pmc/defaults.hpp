#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pmc::defaults {

struct EmbeddedFile {
  std::string_view path;  // relative, e.g. "questionnaires/modeler.json"
  std::string_view content;
};

namespace embedded {
const std::vector<EmbeddedFile>& files();
}

inline constexpr std::string_view kEttFile = "ett.json";
inline constexpr std::string_view kModelerSchemaFile = "questionnaires/modeler.json";
inline constexpr std::string_view kReaderSchemaFile = "questionnaires/reader.json";
inline constexpr std::string_view kLanguagesDir = "languages";

/// Contents of a shipped default file. Throws std::out_of_range for an
/// unknown path.
std::string_view file(std::string_view path);

struct InitResult {
  std::vector<std::filesystem::path> written;
  std::vector<std::filesystem::path> skipped;  // existed, not forced
};

/// Writes every default file below `directory`. Existing files are kept
/// unless `force` is set.
InitResult write_defaults(const std::filesystem::path& directory, bool force);

}  // namespace pmc::defaults
