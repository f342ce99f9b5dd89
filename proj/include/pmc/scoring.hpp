#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmc/ett.hpp"

namespace pmc::scoring {

inline constexpr double kDefaultNoiseThreshold = 4.0;

/// A weighted score that may be unavailable.
struct WeightedInput {
  std::string id;
  std::optional<double> score;
  double weight = 1.0;
};

/// Weight-normalized sum of the available metric scores. Throws a Validation
/// error "criterion_unscored" naming the missing ids when none is available,
/// and "invalid_weight" for a non-positive weight.
double aggregate_criterion(std::span<const WeightedInput> metrics);

/// Weight-normalized sum over a perspective's criteria. Every criterion must
/// be scored; otherwise throws "perspective_incomplete".
double perspective_score(std::span<const WeightedInput> criteria);

/// w_m * S_m + w_r * S_r. Throws "interaction_weights" unless both weights
/// are in [0, 1] and sum to 1 within 1e-9.
double combined_score(double modeler_score, double reader_score, const InteractionWeights& weights);

struct MetricResult {
  std::string id;
  std::string name;
  std::string criterion;
  Perspective perspective = Perspective::Modeler;
  MetricSource source = MetricSource::ModelDerived;
  std::optional<double> raw;
  double score = 0.0;
  double weight = 1.0;

  friend bool operator==(const MetricResult&, const MetricResult&) = default;
};

struct CriterionResult {
  std::string id;
  std::string name;
  Perspective perspective = Perspective::Modeler;
  int rank = 1;
  double weight = 1.0;
  double score = 0.0;

  friend bool operator==(const CriterionResult&, const CriterionResult&) = default;
};

struct RespondentResult {
  std::string respondent;
  double score = 0.0;

  friend bool operator==(const RespondentResult&, const RespondentResult&) = default;
};

struct NoiseFlag {
  enum class Level { Metric, Criterion };
  Level level = Level::Metric;
  std::string id;
  std::string name;
  std::string path;  // "<perspective> / <criterion> / <metric>"
  Perspective perspective = Perspective::Modeler;
  double score = 0.0;
  double threshold = kDefaultNoiseThreshold;

  friend bool operator==(const NoiseFlag&, const NoiseFlag&) = default;
};

std::string to_string(NoiseFlag::Level level);

struct ComprehensionEvaluation {
  std::string model_id;
  std::vector<MetricResult> metrics;
  std::vector<CriterionResult> criteria;
  double modeler_score = 0.0;   // S_m
  double reader_score = 0.0;    // S_r, mean over respondents
  double combined_score = 0.0;  // S_b
  InteractionWeights interaction;
  std::vector<RespondentResult> readers;
  double noise_threshold = kDefaultNoiseThreshold;
  std::vector<NoiseFlag> noise;

  const CriterionResult* find_criterion(const std::string& id) const;
  const MetricResult* find_metric(const std::string& id) const;

  friend bool operator==(const ComprehensionEvaluation&, const ComprehensionEvaluation&) = default;
};

/// Metrics and criteria scoring below `threshold`, ascending by score (ties
/// by path).
std::vector<NoiseFlag> detect_noise(const ComprehensionEvaluation& evaluation,
                                    double threshold = kDefaultNoiseThreshold);

/// Everything the aggregation needs, already on the [1, 10] scale except
/// model-derived and language values, which are raw and normalized here.
struct EvaluationInputs {
  std::string model_id;
  std::map<std::string, double> model_values;     // metric id -> raw value
  std::map<std::string, double> language_values;  // binding -> raw value
  std::map<std::string, double> modeler_scores;   // metric id -> score
  /// One map per reader respondent, metric id -> score.
  std::vector<std::pair<std::string, std::map<std::string, double>>> reader_scores;
};

/// Scores a tree with weights assigned. Reader questionnaire metrics are
/// averaged over respondents; `readers` records each respondent's own S_r.
ComprehensionEvaluation evaluate(const EvaluationTheoryTree& tree, const EvaluationInputs& inputs,
                                 double noise_threshold = kDefaultNoiseThreshold);

/// Checks score bounds and S_b consistency; report-based.
ValidationReport check_evaluation(const ComprehensionEvaluation& evaluation);

}  // namespace pmc::scoring
