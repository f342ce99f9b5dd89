#include "pmc/defaults.hpp"

#include <fstream>
#include <stdexcept>

#include "pmc/error.hpp"

namespace pmc::defaults {

std::string_view file(std::string_view path) {
  for (const auto& f : embedded::files()) {
    if (f.path == path) return f.content;
  }
  throw std::out_of_range("no shipped default named '" + std::string(path) + "'");
}

InitResult write_defaults(const std::filesystem::path& directory, bool force) {
  InitResult result;
  for (const auto& f : embedded::files()) {
    const std::filesystem::path target = directory / std::filesystem::path(std::string(f.path));
    if (std::filesystem::exists(target) && !force) {
      result.skipped.push_back(target);
      continue;
    }
    std::error_code ec;
    std::filesystem::create_directories(target.parent_path(), ec);
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("io", "cannot write file", target.string());
    out << f.content;
    if (!out) throw input_error("io", "write failed", target.string());
    result.written.push_back(target);
  }
  return result;
}

}  // namespace pmc::defaults
