#include "pmc/normalization.hpp"

#include <algorithm>

#include "pmc/error.hpp"

namespace pmc {

double normalize_metric(double value, const NormalizationSpec& spec, Polarity polarity) {
  double score = kScoreMin;
  switch (spec.kind) {
    case NormalizationSpec::Kind::Identity:
      score = std::clamp(value, kScoreMin, kScoreMax);
      break;
    case NormalizationSpec::Kind::LinearClamp:
    case NormalizationSpec::Kind::InverseLinearClamp: {
      if (!spec.valid()) throw validation_error("normalization_bounds", "normalization requires lo < hi");
      const double t = (std::clamp(value, spec.lo, spec.hi) - spec.lo) / (spec.hi - spec.lo);
      score = spec.kind == NormalizationSpec::Kind::LinearClamp ? kScoreMin + 9.0 * t : kScoreMax - 9.0 * t;
      break;
    }
    case NormalizationSpec::Kind::Boolean:
      score = value != 0.0 ? kScoreMax : kScoreMin;
      break;
  }
  if (polarity == Polarity::LowerIsBetter) score = kScoreMin + kScoreMax - score;
  return score;
}

std::string to_string(NormalizationSpec::Kind kind) {
  switch (kind) {
    case NormalizationSpec::Kind::Identity: return "identity";
    case NormalizationSpec::Kind::LinearClamp: return "linear_clamp";
    case NormalizationSpec::Kind::InverseLinearClamp: return "inverse_linear_clamp";
    case NormalizationSpec::Kind::Boolean: return "boolean";
  }
  return "identity";
}

NormalizationSpec::Kind parse_normalization_kind(const std::string& text) {
  if (text == "identity") return NormalizationSpec::Kind::Identity;
  if (text == "linear_clamp") return NormalizationSpec::Kind::LinearClamp;
  if (text == "inverse_linear_clamp") return NormalizationSpec::Kind::InverseLinearClamp;
  if (text == "boolean") return NormalizationSpec::Kind::Boolean;
  throw input_error("unknown_normalization", "unknown normalization kind '" + text + "'");
}

std::string to_string(Polarity polarity) {
  return polarity == Polarity::HigherIsBetter ? "higher_is_better" : "lower_is_better";
}

Polarity parse_polarity(const std::string& text) {
  if (text == "higher_is_better") return Polarity::HigherIsBetter;
  if (text == "lower_is_better") return Polarity::LowerIsBetter;
  throw input_error("unknown_polarity", "unknown polarity '" + text + "'");
}

}  // namespace pmc
