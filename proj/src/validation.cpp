#include "pmc/validation.hpp"

#include <algorithm>
#include <sstream>

namespace pmc {

bool ValidationReport::ok() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(
      std::count_if(issues.begin(), issues.end(), [](const Issue& i) { return i.severity == Severity::Error; }));
}

std::size_t ValidationReport::warning_count() const { return issues.size() - error_count(); }

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(issues.begin(), issues.end(), [&](const Issue& i) { return i.code == code; });
}

void ValidationReport::error(std::string code, std::string message, std::string where) {
  issues.push_back({Severity::Error, std::move(code), std::move(message), std::move(where)});
}

void ValidationReport::warning(std::string code, std::string message, std::string where) {
  issues.push_back({Severity::Warning, std::move(code), std::move(message), std::move(where)});
}

std::string to_text(const ValidationReport& report) {
  std::ostringstream out;
  if (report.empty()) {
    out << "Validation OK.\n";
    return out.str();
  }
  for (const Issue& issue : report.issues) {
    out << (issue.severity == Severity::Error ? "error" : "warning") << " [" << issue.code << "] " << issue.message;
    if (!issue.where.empty()) out << " (at " << issue.where << ")";
    out << "\n";
  }
  out << report.error_count() << " error(s), " << report.warning_count() << " warning(s)\n";
  return out.str();
}

}  // namespace pmc
