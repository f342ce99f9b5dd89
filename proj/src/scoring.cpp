#include "pmc/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "pmc/error.hpp"

namespace pmc::scoring {

namespace {

constexpr double kTolerance = 1e-9;

/// Weighted mean of the inputs that carry a score; nullopt when none does.
std::optional<double> weighted_mean(std::span<const WeightedInput> inputs) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& in : inputs) {
    if (!(in.weight > 0.0) || !std::isfinite(in.weight)) {
      throw validation_error("invalid_weight", "weight must be positive", in.id);
    }
    if (!in.score) continue;
    num += in.weight * *in.score;
    den += in.weight;
  }
  if (den == 0.0) return std::nullopt;
  // Clamp away rounding drift; a convex combination cannot leave its hull.
  double lo = kScoreMax;
  double hi = kScoreMin;
  for (const auto& in : inputs) {
    if (!in.score) continue;
    lo = std::min(lo, *in.score);
    hi = std::max(hi, *in.score);
  }
  return std::clamp(num / den, std::min(lo, hi), std::max(lo, hi));
}

std::string missing_ids(std::span<const WeightedInput> inputs) {
  std::string out;
  for (const auto& in : inputs) {
    if (in.score) continue;
    out += (out.empty() ? "" : ", ") + in.id;
  }
  return out;
}

bool in_range(double s) { return s >= kScoreMin - kTolerance && s <= kScoreMax + kTolerance; }

}  // namespace

double aggregate_criterion(std::span<const WeightedInput> metrics) {
  const auto mean = weighted_mean(metrics);
  if (!mean) throw validation_error("criterion_unscored", "criterion unscored; missing metrics: " + missing_ids(metrics));
  return *mean;
}

double perspective_score(std::span<const WeightedInput> criteria) {
  if (criteria.empty()) throw validation_error("perspective_incomplete", "perspective incomplete: no criteria");
  const std::string missing = missing_ids(criteria);
  if (!missing.empty()) throw validation_error("perspective_incomplete", "perspective incomplete; unscored: " + missing);
  return *weighted_mean(criteria);
}

double combined_score(double modeler_score, double reader_score, const InteractionWeights& w) {
  const bool valid = w.modeler >= 0.0 && w.modeler <= 1.0 && w.reader >= 0.0 && w.reader <= 1.0 &&
                     std::abs(w.modeler + w.reader - 1.0) <= kTolerance;
  if (!valid) throw validation_error("interaction_weights", "interaction weights must lie in [0, 1] and sum to 1");
  const double s = w.modeler * modeler_score + w.reader * reader_score;
  return std::clamp(s, std::min(modeler_score, reader_score), std::max(modeler_score, reader_score));
}

std::string to_string(NoiseFlag::Level level) { return level == NoiseFlag::Level::Metric ? "metric" : "criterion"; }

const CriterionResult* ComprehensionEvaluation::find_criterion(const std::string& id) const {
  for (const auto& c : criteria) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const MetricResult* ComprehensionEvaluation::find_metric(const std::string& id) const {
  for (const auto& m : metrics) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

std::vector<NoiseFlag> detect_noise(const ComprehensionEvaluation& evaluation, double threshold) {
  std::vector<NoiseFlag> flags;
  for (const auto& c : evaluation.criteria) {
    if (c.score >= threshold) continue;
    flags.push_back({NoiseFlag::Level::Criterion, c.id, c.name, to_string(c.perspective) + " / " + c.name,
                     c.perspective, c.score, threshold});
  }
  for (const auto& m : evaluation.metrics) {
    if (m.score >= threshold) continue;
    const CriterionResult* owner = evaluation.find_criterion(m.criterion);
    const std::string criterion = owner ? owner->name : m.criterion;
    flags.push_back({NoiseFlag::Level::Metric, m.id, m.name,
                     to_string(m.perspective) + " / " + criterion + " / " + m.name, m.perspective, m.score, threshold});
  }
  std::sort(flags.begin(), flags.end(), [](const NoiseFlag& a, const NoiseFlag& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.path < b.path;
  });
  return flags;
}

ComprehensionEvaluation evaluate(const EvaluationTheoryTree& tree, const EvaluationInputs& inputs,
                                 double noise_threshold) {
  ComprehensionEvaluation eval;
  eval.model_id = inputs.model_id;
  eval.interaction = tree.interaction;
  eval.noise_threshold = noise_threshold;

  // Reader questionnaire metrics average over respondents that answered them.
  std::map<std::string, std::pair<double, int>> reader_sums;
  for (const auto& [respondent, scores] : inputs.reader_scores) {
    for (const auto& [metric, s] : scores) {
      auto& [total, count] = reader_sums[metric];
      total += s;
      ++count;
    }
  }

  auto metric_value = [&](const QualityMetric& m, const std::map<std::string, double>* reader)
      -> std::pair<std::optional<double>, std::optional<double>> {
    auto lookup = [](const std::map<std::string, double>& map, const std::string& key) -> std::optional<double> {
      const auto it = map.find(key);
      return it == map.end() ? std::nullopt : std::optional<double>(it->second);
    };
    std::optional<double> raw;
    std::optional<double> value;
    switch (m.source) {
      case MetricSource::ModelDerived:
        raw = value = lookup(inputs.model_values, m.id);
        break;
      case MetricSource::LanguageRegistry:
        raw = value = lookup(inputs.language_values, m.binding);
        break;
      case MetricSource::ModelerQuestionnaire:
        value = lookup(inputs.modeler_scores, m.id);
        break;
      case MetricSource::ReaderQuestionnaire:
        if (reader) {
          value = lookup(*reader, m.id);
        } else if (const auto it = reader_sums.find(m.id); it != reader_sums.end()) {
          value = it->second.first / it->second.second;
        }
        break;
    }
    if (!value) return {raw, std::nullopt};
    return {raw, normalize_metric(*value, m.normalization, m.polarity)};
  };

  auto score_perspective = [&](Perspective p, const std::map<std::string, double>* reader, bool record) {
    std::vector<WeightedInput> criterion_inputs;
    for (const QualityCriterion* c : tree.criteria_of(p)) {
      std::vector<WeightedInput> metric_inputs;
      for (const QualityMetric& m : c->metrics) {
        const auto [raw, score] = metric_value(m, reader);
        const double weight = m.weight.value_or(1.0);
        metric_inputs.push_back({m.id, score, weight});
        if (record && score) {
          eval.metrics.push_back({m.id, m.name, c->id, p, m.source, raw, *score, weight});
        }
      }
      double q = 0.0;
      try {
        q = aggregate_criterion(metric_inputs);
      } catch (const Error& e) {
        throw Error(e.kind(), e.code(), e.what(), c->id);
      }
      const double weight = c->weight.value_or(1.0);
      criterion_inputs.push_back({c->id, q, weight});
      if (record) eval.criteria.push_back({c->id, c->name, p, c->rank, weight, q});
    }
    return perspective_score(criterion_inputs);
  };

  eval.modeler_score = score_perspective(Perspective::Modeler, nullptr, true);
  eval.reader_score = score_perspective(Perspective::Reader, nullptr, true);
  for (const auto& [respondent, scores] : inputs.reader_scores) {
    eval.readers.push_back({respondent, score_perspective(Perspective::Reader, &scores, false)});
  }
  eval.combined_score = combined_score(eval.modeler_score, eval.reader_score, eval.interaction);
  eval.noise = detect_noise(eval, noise_threshold);
  return eval;
}

ValidationReport check_evaluation(const ComprehensionEvaluation& e) {
  ValidationReport report;
  for (const auto& m : e.metrics) {
    if (!in_range(m.score)) report.error("score_range", "metric score outside [1, 10]", m.id);
  }
  for (const auto& c : e.criteria) {
    if (!in_range(c.score)) report.error("score_range", "criterion score outside [1, 10]", c.id);
  }
  if (e.criteria.empty()) report.error("evaluation_incomplete", "evaluation has no criterion scores");
  const std::pair<const char*, double> totals[] = {
      {"S_m", e.modeler_score}, {"S_r", e.reader_score}, {"S_b", e.combined_score}};
  for (const auto& [name, value] : totals) {
    if (!in_range(value)) report.error("score_range", std::string(name) + " outside [1, 10]", name);
  }
  const InteractionWeights& w = e.interaction;
  if (std::abs(w.modeler + w.reader - 1.0) > kTolerance || w.modeler < 0.0 || w.reader < 0.0) {
    report.error("interaction_weights", "interaction weights must sum to 1");
  } else if (std::abs(w.modeler * e.modeler_score + w.reader * e.reader_score - e.combined_score) > kTolerance) {
    report.error("combined_inconsistent", "S_b differs from w_m * S_m + w_r * S_r", "S_b");
  }
  return report;
}

}  // namespace pmc::scoring
