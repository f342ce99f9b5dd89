#pragma once

#include <string>
#include <vector>

namespace pmc {

enum class Severity { Error, Warning };

struct Issue {
  Severity severity = Severity::Error;
  std::string code;     // machine-readable, e.g. "rank_permutation"
  std::string message;  // human-readable
  std::string where;    // path into the checked document
};

/// Ordered list of findings. A report without errors is valid; warnings do
/// not affect validity.
struct ValidationReport {
  std::vector<Issue> issues;

  bool ok() const;
  bool empty() const { return issues.empty(); }
  std::size_t error_count() const;
  std::size_t warning_count() const;
  bool has(const std::string& code) const;

  void error(std::string code, std::string message, std::string where = {});
  void warning(std::string code, std::string message, std::string where = {});
};

std::string to_text(const ValidationReport& report);

}  // namespace pmc
