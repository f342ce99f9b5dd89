#pragma once

// Path-aware accessors over nlohmann::json used by every document loader.

#include <string>
#include <string_view>

#include <json.hpp>

#include "pmc/error.hpp"

namespace pmc::detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline json parse_json(std::string_view document, const std::string& source) {
  try {
    return json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw input_error("malformed", std::string("malformed JSON: ") + e.what(), source);
  }
}

inline std::string join_path(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::string index_path(const std::string& path, std::size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

inline const json& require(const json& object, std::string_view key, const std::string& path) {
  if (!object.is_object()) throw input_error("malformed", "expected an object", path);
  const auto it = object.find(key);
  if (it == object.end()) throw input_error("missing_field", "missing field '" + std::string(key) + "'", path);
  return *it;
}

inline const json* optional_field(const json& object, std::string_view key) {
  const auto it = object.find(key);
  if (it == object.end() || it->is_null()) return nullptr;
  return &*it;
}

inline std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) throw input_error("type", "expected a string", path);
  return value.get<std::string>();
}

inline double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw input_error("type", "expected a number", path);
  return value.get<double>();
}

inline int as_int(const json& value, const std::string& path) {
  if (!value.is_number_integer()) throw input_error("type", "expected an integer", path);
  return value.get<int>();
}

inline bool as_bool(const json& value, const std::string& path) {
  if (!value.is_boolean()) throw input_error("type", "expected a boolean", path);
  return value.get<bool>();
}

inline const json& as_array(const json& value, const std::string& path) {
  if (!value.is_array()) throw input_error("type", "expected an array", path);
  return value;
}

inline std::string get_string(const json& object, std::string_view key, const std::string& path) {
  return as_string(require(object, key, path), join_path(path, key));
}

inline double get_number(const json& object, std::string_view key, const std::string& path) {
  return as_number(require(object, key, path), join_path(path, key));
}

inline int get_int(const json& object, std::string_view key, const std::string& path) {
  return as_int(require(object, key, path), join_path(path, key));
}

/// Rejects documents whose "format" tag names a different document type.
inline void check_format(const json& root, std::string_view expected, const std::string& source) {
  if (!root.is_object()) throw input_error("malformed", "document root must be an object", source);
  if (const json* format = optional_field(root, "format")) {
    if (as_string(*format, "format") != expected) {
      throw input_error("wrong_format", "expected format '" + std::string(expected) + "'", source);
    }
  }
}

/// Rethrows enum parse failures with the document path attached.
template <class F>
auto with_path(const std::string& path, F&& parse) {
  try {
    return parse();
  } catch (const Error& e) {
    throw Error(e.kind(), e.code(), e.what(), path);
  }
}

}  // namespace pmc::detail
