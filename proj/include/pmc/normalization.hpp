#pragma once

#include <string>

namespace pmc {

enum class Polarity { HigherIsBetter, LowerIsBetter };

/// Maps a raw metric value onto the common [1, 10] scale (10 is best).
struct NormalizationSpec {
  enum class Kind {
    Identity,            // value already on the scale; clamped to [1, 10]
    LinearClamp,         // lo -> 1, hi -> 10
    InverseLinearClamp,  // lo -> 10, hi -> 1
    Boolean,             // nonzero -> 10, zero -> 1
  };
  Kind kind = Kind::Identity;
  double lo = 0.0;
  double hi = 1.0;

  static NormalizationSpec identity() { return {}; }
  static NormalizationSpec linear(double lo, double hi) { return {Kind::LinearClamp, lo, hi}; }
  static NormalizationSpec inverse_linear(double lo, double hi) { return {Kind::InverseLinearClamp, lo, hi}; }
  static NormalizationSpec boolean() { return {Kind::Boolean, 0.0, 1.0}; }

  bool has_bounds() const { return kind == Kind::LinearClamp || kind == Kind::InverseLinearClamp; }
  bool valid() const { return !has_bounds() || lo < hi; }

  friend bool operator==(const NormalizationSpec&, const NormalizationSpec&) = default;
};

inline constexpr double kScoreMin = 1.0;
inline constexpr double kScoreMax = 10.0;

/// Normalizes `value` per `spec`, then reflects LowerIsBetter scores through
/// s -> 11 - s. Out-of-range values clamp to the interval boundary.
double normalize_metric(double value, const NormalizationSpec& spec, Polarity polarity);

std::string to_string(NormalizationSpec::Kind kind);
NormalizationSpec::Kind parse_normalization_kind(const std::string& text);
std::string to_string(Polarity polarity);
Polarity parse_polarity(const std::string& text);

}  // namespace pmc
