#include "pmc/ett.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "json_util.hpp"
#include "pmc/error.hpp"
#include "pmc/model.hpp"
#include "pmc/ranking.hpp"
#include "text_util.hpp"

namespace pmc {

using detail::json;
using detail::ordered_json;

std::string to_string(Perspective perspective) {
  return perspective == Perspective::Modeler ? "modeler" : "reader";
}

Perspective parse_perspective(const std::string& text) {
  if (text == "modeler") return Perspective::Modeler;
  if (text == "reader") return Perspective::Reader;
  throw input_error("unknown_perspective", "unknown perspective '" + text + "'");
}

std::string to_string(MetricSource source) {
  switch (source) {
    case MetricSource::ModelDerived: return "model_derived";
    case MetricSource::ModelerQuestionnaire: return "modeler_questionnaire";
    case MetricSource::ReaderQuestionnaire: return "reader_questionnaire";
    case MetricSource::LanguageRegistry: return "language_registry";
  }
  return "model_derived";
}

MetricSource parse_metric_source(const std::string& text) {
  if (text == "model_derived") return MetricSource::ModelDerived;
  if (text == "modeler_questionnaire") return MetricSource::ModelerQuestionnaire;
  if (text == "reader_questionnaire") return MetricSource::ReaderQuestionnaire;
  if (text == "language_registry") return MetricSource::LanguageRegistry;
  throw input_error("unknown_source", "unknown metric source '" + text + "'");
}

std::string to_string(WeightingScheme scheme) { return scheme == WeightingScheme::DNLog ? "dnlog" : "uniform"; }

WeightingScheme parse_weighting_scheme(const std::string& text) {
  if (text == "dnlog") return WeightingScheme::DNLog;
  if (text == "uniform") return WeightingScheme::Uniform;
  throw input_error("unknown_weighting", "unknown weighting scheme '" + text + "'");
}

std::size_t EvaluationTheoryTree::metric_count() const {
  std::size_t n = 0;
  for (const auto& c : criteria) n += c.metrics.size();
  return n;
}

std::size_t EvaluationTheoryTree::metric_count(Perspective perspective) const {
  std::size_t n = 0;
  for (const auto& c : criteria) {
    if (c.perspective == perspective) n += c.metrics.size();
  }
  return n;
}

std::vector<const QualityCriterion*> EvaluationTheoryTree::criteria_of(Perspective perspective) const {
  std::vector<const QualityCriterion*> out;
  for (const auto& c : criteria) {
    if (c.perspective == perspective) out.push_back(&c);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto* a, const auto* b) { return a->rank < b->rank; });
  return out;
}

const QualityMetric* EvaluationTheoryTree::find_metric(std::string_view id) const {
  for (const auto& c : criteria) {
    for (const auto& m : c.metrics) {
      if (m.id == id) return &m;
    }
  }
  return nullptr;
}

const QualityCriterion* EvaluationTheoryTree::find_criterion(std::string_view id) const {
  for (const auto& c : criteria) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const QualityCriterion* EvaluationTheoryTree::owner_of(std::string_view metric_id) const {
  for (const auto& c : criteria) {
    for (const auto& m : c.metrics) {
      if (m.id == metric_id) return &c;
    }
  }
  return nullptr;
}

bool EvaluationTheoryTree::weights_assigned() const {
  for (const auto& c : criteria) {
    if (!c.weight) return false;
    for (const auto& m : c.metrics) {
      if (!m.weight) return false;
    }
  }
  return true;
}

const std::vector<std::string>& canonical_criteria(Perspective perspective) {
  static const std::vector<std::string> modeler = {"Process Modeling Language", "Process Modeling Tool", "Information",
                                                   "Errors", "Person", "Process Modeling Guidelines"};
  static const std::vector<std::string> reader = {"Process Modeling Language", "Medium",
                                                  "Information",               "Person",
                                                  "Level of Detail",           "Representation Factors",
                                                  "Comprehension Questions"};
  return perspective == Perspective::Modeler ? modeler : reader;
}

namespace {

std::optional<double> optional_number(const json& object, std::string_view key, const std::string& path) {
  if (const json* value = detail::optional_field(object, key)) {
    return detail::as_number(*value, detail::join_path(path, key));
  }
  return std::nullopt;
}

NormalizationSpec parse_normalization(const json& value, const std::string& path) {
  NormalizationSpec spec;
  const std::string kind_path = detail::join_path(path, "kind");
  spec.kind = detail::with_path(kind_path, [&] {
    return parse_normalization_kind(detail::get_string(value, "kind", path));
  });
  if (spec.has_bounds()) {
    spec.lo = detail::get_number(value, "lo", path);
    spec.hi = detail::get_number(value, "hi", path);
  }
  return spec;
}

QualityMetric parse_metric(const json& value, const std::string& path) {
  QualityMetric m;
  m.id = detail::get_string(value, "id", path);
  m.name = detail::get_string(value, "name", path);
  if (const json* description = detail::optional_field(value, "description")) {
    m.description = detail::as_string(*description, detail::join_path(path, "description"));
  }
  m.source = detail::with_path(detail::join_path(path, "source"), [&] {
    return parse_metric_source(detail::get_string(value, "source", path));
  });
  if (const json* binding = detail::optional_field(value, "binding")) {
    m.binding = detail::as_string(*binding, detail::join_path(path, "binding"));
  }
  m.rank = detail::get_int(value, "rank", path);
  m.weight = optional_number(value, "weight", path);
  if (const json* normalization = detail::optional_field(value, "normalization")) {
    m.normalization = parse_normalization(*normalization, detail::join_path(path, "normalization"));
  }
  if (const json* polarity = detail::optional_field(value, "polarity")) {
    const std::string polarity_path = detail::join_path(path, "polarity");
    m.polarity = detail::with_path(polarity_path, [&] { return parse_polarity(detail::as_string(*polarity, polarity_path)); });
  }
  if (const json* placeholder = detail::optional_field(value, "placeholder")) {
    m.placeholder = detail::as_bool(*placeholder, detail::join_path(path, "placeholder"));
  }
  return m;
}

QualityCriterion parse_criterion(const json& value, const std::string& path) {
  QualityCriterion c;
  c.id = detail::get_string(value, "id", path);
  c.name = detail::get_string(value, "name", path);
  c.perspective = detail::with_path(detail::join_path(path, "perspective"), [&] {
    return parse_perspective(detail::get_string(value, "perspective", path));
  });
  c.rank = detail::get_int(value, "rank", path);
  c.weight = optional_number(value, "weight", path);
  c.survey_d = optional_number(value, "survey_d", path);
  const std::string metrics_path = detail::join_path(path, "metrics");
  const json& metrics = detail::as_array(detail::require(value, "metrics", path), metrics_path);
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    c.metrics.push_back(parse_metric(metrics[i], detail::index_path(metrics_path, i)));
  }
  return c;
}

ordered_json normalization_json(const NormalizationSpec& spec) {
  ordered_json out;
  out["kind"] = to_string(spec.kind);
  if (spec.has_bounds()) {
    out["lo"] = spec.lo;
    out["hi"] = spec.hi;
  }
  return out;
}

void check_rank_permutation(std::vector<int> ranks, const std::string& code, const std::string& what,
                            const std::string& where, ValidationReport& report) {
  std::sort(ranks.begin(), ranks.end());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] != static_cast<int>(i) + 1) {
      report.error(code, "rank permutation violation: " + what + " ranks are not a permutation of 1.." +
                             std::to_string(ranks.size()), where);
      return;
    }
  }
}

bool is_weight_ok(const std::optional<double>& weight) { return !weight || (std::isfinite(*weight) && *weight > 0.0); }

}  // namespace

EvaluationTheoryTree parse_ett(std::string_view document, const std::string& source) {
  const json root = detail::parse_json(document, source);
  detail::check_format(root, "pmc-ett", source);
  EvaluationTheoryTree tree;
  tree.version = detail::get_string(root, "version", "");
  if (auto d = optional_number(root, "survey_d", "")) tree.survey_d = *d;
  if (const json* weighting = detail::optional_field(root, "weighting")) {
    if (const json* level = detail::optional_field(*weighting, "criteria")) {
      tree.criteria_weighting = detail::with_path("weighting.criteria", [&] {
        return parse_weighting_scheme(detail::as_string(*level, "weighting.criteria"));
      });
    }
    if (const json* level = detail::optional_field(*weighting, "metrics")) {
      tree.metric_weighting = detail::with_path("weighting.metrics", [&] {
        return parse_weighting_scheme(detail::as_string(*level, "weighting.metrics"));
      });
    }
  }
  const json& interaction = detail::require(root, "interaction_weights", "");
  tree.interaction.modeler = detail::get_number(interaction, "modeler", "interaction_weights");
  tree.interaction.reader = detail::get_number(interaction, "reader", "interaction_weights");
  const json& criteria = detail::as_array(detail::require(root, "criteria", ""), "criteria");
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    tree.criteria.push_back(parse_criterion(criteria[i], detail::index_path("criteria", i)));
  }
  return tree;
}

EvaluationTheoryTree load_ett(std::string_view document, const std::string& source) {
  EvaluationTheoryTree tree = parse_ett(document, source);
  const ValidationReport report = validate_ett(tree);
  if (!report.ok()) {
    const auto first = std::find_if(report.issues.begin(), report.issues.end(),
                                    [](const Issue& i) { return i.severity == Severity::Error; });
    throw validation_error(first->code, first->message, first->where);
  }
  return tree;
}

EvaluationTheoryTree load_ett_file(const std::filesystem::path& path) {
  return load_ett(detail::read_file(path), path.string());
}

std::string serialize_ett(const EvaluationTheoryTree& tree) {
  ordered_json root;
  root["format"] = "pmc-ett";
  root["version"] = tree.version;
  root["survey_d"] = tree.survey_d;
  root["weighting"] = {{"criteria", to_string(tree.criteria_weighting)},
                       {"metrics", to_string(tree.metric_weighting)}};
  root["interaction_weights"] = {{"modeler", tree.interaction.modeler}, {"reader", tree.interaction.reader}};

  std::vector<const QualityCriterion*> criteria;
  for (const auto& c : tree.criteria) criteria.push_back(&c);
  std::stable_sort(criteria.begin(), criteria.end(), [](const auto* a, const auto* b) {
    if (a->perspective != b->perspective) return a->perspective == Perspective::Modeler;
    return a->rank < b->rank;
  });

  ordered_json out_criteria = ordered_json::array();
  for (const QualityCriterion* c : criteria) {
    ordered_json oc;
    oc["id"] = c->id;
    oc["name"] = c->name;
    oc["perspective"] = to_string(c->perspective);
    oc["rank"] = c->rank;
    if (c->weight) oc["weight"] = *c->weight;
    if (c->survey_d) oc["survey_d"] = *c->survey_d;
    std::vector<const QualityMetric*> metrics;
    for (const auto& m : c->metrics) metrics.push_back(&m);
    std::stable_sort(metrics.begin(), metrics.end(), [](const auto* a, const auto* b) { return a->rank < b->rank; });
    ordered_json out_metrics = ordered_json::array();
    for (const QualityMetric* m : metrics) {
      ordered_json om;
      om["id"] = m->id;
      om["name"] = m->name;
      om["description"] = m->description;
      om["source"] = to_string(m->source);
      om["rank"] = m->rank;
      if (!m->binding.empty()) om["binding"] = m->binding;
      if (m->weight) om["weight"] = *m->weight;
      om["normalization"] = normalization_json(m->normalization);
      om["polarity"] = to_string(m->polarity);
      om["placeholder"] = m->placeholder;
      out_metrics.push_back(std::move(om));
    }
    oc["metrics"] = std::move(out_metrics);
    out_criteria.push_back(std::move(oc));
  }
  root["criteria"] = std::move(out_criteria);
  return root.dump(2) + "\n";
}

ValidationReport validate_ett(const EvaluationTheoryTree& tree) {
  ValidationReport report;
  if (tree.version.empty()) report.error("version", "version must not be empty", "version");
  if (!(tree.survey_d > 1.0)) report.error("survey_d", "survey score d must be greater than 1", "survey_d");

  const auto& iw = tree.interaction;
  if (!(iw.modeler >= 0.0 && iw.modeler <= 1.0 && iw.reader >= 0.0 && iw.reader <= 1.0)) {
    report.error("interaction_weights_range", "interaction weights must lie in [0, 1]", "interaction_weights");
  }
  if (!(std::abs(iw.modeler + iw.reader - 1.0) <= 1e-9)) {
    report.error("interaction_weights_sum", "interaction weights must sum to 1", "interaction_weights");
  }

  std::map<std::string, std::string> metric_ids;
  std::map<std::string, std::string> criterion_ids;
  std::map<Perspective, std::vector<int>> criterion_ranks;
  for (std::size_t ci = 0; ci < tree.criteria.size(); ++ci) {
    const QualityCriterion& c = tree.criteria[ci];
    const std::string cpath = detail::index_path("criteria", ci);
    if (c.id.empty()) report.error("empty_id", "criterion id must not be empty", detail::join_path(cpath, "id"));
    if (!criterion_ids.emplace(c.id, cpath).second) {
      report.error("duplicate_criterion_id", "duplicate criterion id '" + c.id + "' (first at " + criterion_ids[c.id] + ")",
                   detail::join_path(cpath, "id"));
    }
    criterion_ranks[c.perspective].push_back(c.rank);
    if (!is_weight_ok(c.weight)) report.error("nonpositive_weight", "weight must be positive", detail::join_path(cpath, "weight"));
    if (c.survey_d && !(*c.survey_d > 1.0)) {
      report.error("survey_d", "survey score d must be greater than 1", detail::join_path(cpath, "survey_d"));
    }
    const auto& names = canonical_criteria(c.perspective);
    if (std::find(names.begin(), names.end(), c.name) == names.end()) {
      report.warning("noncanonical_criterion", "criterion '" + c.name + "' is not one of the catalog's " +
                                                   to_string(c.perspective) + " criteria",
                     detail::join_path(cpath, "name"));
    }
    if (c.metrics.empty()) {
      report.error("criterion_empty", "criterion '" + c.id + "' has no metrics", detail::join_path(cpath, "metrics"));
    }

    std::vector<int> ranks;
    for (std::size_t mi = 0; mi < c.metrics.size(); ++mi) {
      const QualityMetric& m = c.metrics[mi];
      const std::string mpath = detail::index_path(detail::join_path(cpath, "metrics"), mi);
      ranks.push_back(m.rank);
      if (m.id.empty()) report.error("empty_id", "metric id must not be empty", detail::join_path(mpath, "id"));
      if (!metric_ids.emplace(m.id, mpath).second) {
        report.error("duplicate_metric_id", "duplicate metric id '" + m.id + "' (first at " + metric_ids[m.id] + ")",
                     detail::join_path(mpath, "id"));
      }
      if (!is_weight_ok(m.weight)) report.error("nonpositive_weight", "weight must be positive", detail::join_path(mpath, "weight"));
      if (!m.normalization.valid()) {
        report.error("normalization_bounds", "normalization requires lo < hi", detail::join_path(mpath, "normalization"));
      }
      if (m.source == MetricSource::LanguageRegistry && m.binding != "complexity" && m.binding != "control_flow_patterns") {
        report.error("unknown_binding", "language metric binding must be 'complexity' or 'control_flow_patterns'",
                     detail::join_path(mpath, "binding"));
      }
      if (m.source == MetricSource::ModelDerived) {
        const auto& names = model::extractor_names();
        if (m.binding.empty()) {
          report.error("missing_binding", "model-derived metric needs an extractor binding", detail::join_path(mpath, "binding"));
        } else if (std::find(names.begin(), names.end(), m.binding) == names.end()) {
          report.warning("unknown_extractor", "no extractor named '" + m.binding + "'", detail::join_path(mpath, "binding"));
        }
      }
    }
    check_rank_permutation(ranks, "rank_permutation", "metric", detail::join_path(cpath, "metrics"), report);
  }

  if (tree.criteria.empty()) report.error("empty_tree", "tree has no criteria", "criteria");
  for (Perspective p : {Perspective::Modeler, Perspective::Reader}) {
    auto it = criterion_ranks.find(p);
    if (it == criterion_ranks.end()) {
      // Loadable, but scoring needs both perspectives.
      if (!tree.criteria.empty()) {
        report.warning("perspective_empty", "perspective '" + to_string(p) + "' has no criteria", "criteria");
      }
      continue;
    }
    check_rank_permutation(it->second, "criterion_rank_permutation", to_string(p) + " criterion", "criteria", report);
  }

  const std::size_t modeler = tree.metric_count(Perspective::Modeler);
  const std::size_t reader = tree.metric_count(Perspective::Reader);
  if (modeler != kCanonicalModelerMetrics || reader != kCanonicalReaderMetrics) {
    report.warning("noncanonical_metric_count",
                   "non-canonical metric count: " + std::to_string(modeler) + " modeler / " + std::to_string(reader) +
                       " reader (catalog: " + std::to_string(kCanonicalModelerMetrics) + " / " +
                       std::to_string(kCanonicalReaderMetrics) + ")",
                   "criteria");
  }
  return report;
}

EvaluationTheoryTree assign_weights(EvaluationTheoryTree tree, double d) {
  if (!(d > 1.0)) throw validation_error("survey_d", "survey score d must be greater than 1");
  tree.survey_d = d;
  auto weigh = [](WeightingScheme scheme, int n, int k, double group_d, const std::string& where) {
    if (k < 1 || k > n) {
      throw validation_error("rank_permutation", "rank " + std::to_string(k) + " outside 1.." + std::to_string(n), where);
    }
    return scheme == WeightingScheme::DNLog ? ranking::dnlog_weight(n, k, group_d) : 1.0;
  };
  std::map<Perspective, int> group_size;
  for (const auto& c : tree.criteria) ++group_size[c.perspective];
  for (auto& c : tree.criteria) {
    c.weight = weigh(tree.criteria_weighting, group_size[c.perspective], c.rank, d, c.id);
    const double metric_d = c.survey_d.value_or(d);
    if (!(metric_d > 1.0)) throw validation_error("survey_d", "survey score d must be greater than 1", c.id);
    const int n = static_cast<int>(c.metrics.size());
    for (auto& m : c.metrics) m.weight = weigh(tree.metric_weighting, n, m.rank, metric_d, m.id);
  }
  return tree;
}

bool semantically_equal(const EvaluationTheoryTree& a, const EvaluationTheoryTree& b) {
  return serialize_ett(a) == serialize_ett(b);
}

}  // namespace pmc
