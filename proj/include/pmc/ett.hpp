#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmc/normalization.hpp"
#include "pmc/validation.hpp"

namespace pmc {

enum class Perspective { Modeler, Reader };

std::string to_string(Perspective perspective);
Perspective parse_perspective(const std::string& text);

/// Where a metric's value comes from.
enum class MetricSource { ModelDerived, ModelerQuestionnaire, ReaderQuestionnaire, LanguageRegistry };

std::string to_string(MetricSource source);
MetricSource parse_metric_source(const std::string& text);

struct QualityMetric {
  std::string id;
  std::string name;
  std::string description;
  MetricSource source = MetricSource::ModelerQuestionnaire;
  /// Extractor name for model-derived metrics ("node_count", ...) or the
  /// language quantity ("complexity", "control_flow_patterns").
  std::string binding;
  int rank = 1;
  std::optional<double> weight;  // empty until assigned
  NormalizationSpec normalization;
  Polarity polarity = Polarity::HigherIsBetter;
  /// Catalog entry whose name and description are stand-ins.
  bool placeholder = false;
};

struct QualityCriterion {
  std::string id;
  std::string name;
  Perspective perspective = Perspective::Modeler;
  int rank = 1;
  std::optional<double> weight;
  /// Overrides the tree's `survey_d` for this criterion's metric group.
  std::optional<double> survey_d;
  std::vector<QualityMetric> metrics;
};

enum class WeightingScheme { DNLog, Uniform };

std::string to_string(WeightingScheme scheme);
WeightingScheme parse_weighting_scheme(const std::string& text);

struct InteractionWeights {
  double modeler = 0.1489;
  double reader = 0.8511;

  friend bool operator==(const InteractionWeights&, const InteractionWeights&) = default;
};

struct EvaluationTheoryTree {
  std::string version = "1.0";
  double survey_d = 10.0;
  WeightingScheme criteria_weighting = WeightingScheme::DNLog;
  WeightingScheme metric_weighting = WeightingScheme::DNLog;
  InteractionWeights interaction;
  std::vector<QualityCriterion> criteria;

  std::size_t metric_count() const;
  std::size_t metric_count(Perspective perspective) const;
  std::vector<const QualityCriterion*> criteria_of(Perspective perspective) const;

  const QualityMetric* find_metric(std::string_view id) const;
  const QualityCriterion* find_criterion(std::string_view id) const;
  /// Criterion that owns metric `id`, or nullptr.
  const QualityCriterion* owner_of(std::string_view metric_id) const;

  bool weights_assigned() const;
};

/// Canonical shape of the shipped catalog.
inline constexpr std::size_t kCanonicalModelerMetrics = 54;
inline constexpr std::size_t kCanonicalReaderMetrics = 42;
const std::vector<std::string>& canonical_criteria(Perspective perspective);

/// Structural parse of the JSON tree format. Throws `pmc::Error` (Input) for
/// malformed documents, unknown enum values, or wrong field types. Does not
/// check cross-field invariants.
EvaluationTheoryTree parse_ett(std::string_view document, const std::string& source = "<ett>");

/// parse_ett followed by validate_ett; any error-severity issue is thrown as
/// a Validation error carrying the first issue's code and path.
EvaluationTheoryTree load_ett(std::string_view document, const std::string& source = "<ett>");
EvaluationTheoryTree load_ett_file(const std::filesystem::path& path);

/// Canonical JSON: criteria ordered by perspective then rank, metrics by rank.
std::string serialize_ett(const EvaluationTheoryTree& tree);

ValidationReport validate_ett(const EvaluationTheoryTree& tree);

/// Rank weights within every sibling group: criteria under a perspective
/// and metrics under a criterion, each with its configured scheme.
/// Throws a Validation error for d <= 1.
EvaluationTheoryTree assign_weights(EvaluationTheoryTree tree, double d);
inline EvaluationTheoryTree assign_weights(EvaluationTheoryTree tree) {
  const double d = tree.survey_d;
  return assign_weights(std::move(tree), d);
}

bool semantically_equal(const EvaluationTheoryTree& a, const EvaluationTheoryTree& b);

}  // namespace pmc
