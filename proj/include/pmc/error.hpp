#pragma once

#include <stdexcept>
#include <string>

namespace pmc {

/// Category of a failure, used by the CLI to pick an exit code.
enum class ErrorKind {
  Input,       // unreadable or malformed input
  Validation,  // well-formed input that violates an invariant
};

/// Error raised by loaders and operations. `where` points into the offending
/// document: a JSON path such as `criteria[2].metrics[0].rank`, or an XML
/// element with its line number.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message, std::string where = {})
      : std::runtime_error(where.empty() ? message : where + ": " + message),
        kind_(kind),
        code_(std::move(code)),
        where_(std::move(where)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }
  const std::string& where() const noexcept { return where_; }

 private:
  ErrorKind kind_;
  std::string code_;
  std::string where_;
};

inline Error input_error(std::string code, const std::string& message, std::string where = {}) {
  return Error(ErrorKind::Input, std::move(code), message, std::move(where));
}

inline Error validation_error(std::string code, const std::string& message, std::string where = {}) {
  return Error(ErrorKind::Validation, std::move(code), message, std::move(where));
}

}  // namespace pmc
