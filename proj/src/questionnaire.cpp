#include "pmc/questionnaire.hpp"

#include <set>

#include "json_util.hpp"
#include "pmc/error.hpp"
#include "text_util.hpp"

namespace pmc::questionnaire {

using detail::json;
using detail::ordered_json;

namespace {

std::string polarity_name(QuestionPolarity p) { return p == QuestionPolarity::Reversed ? "reversed" : "positive"; }

QuestionPolarity parse_question_polarity(const std::string& text) {
  if (text == "positive") return QuestionPolarity::Positive;
  if (text == "reversed") return QuestionPolarity::Reversed;
  throw input_error("unknown_polarity", "unknown question polarity '" + text + "'");
}

MetricSource source_for(Perspective p) {
  return p == Perspective::Modeler ? MetricSource::ModelerQuestionnaire : MetricSource::ReaderQuestionnaire;
}

}  // namespace

const Question* QuestionnaireSchema::find(std::string_view id) const {
  for (const auto& q : questions) {
    if (q.id == id) return &q;
  }
  return nullptr;
}

ValidationReport validate_schema(const QuestionnaireSchema& schema, const EvaluationTheoryTree& tree) {
  ValidationReport report;
  std::set<std::string> seen;
  const MetricSource expected = source_for(schema.perspective);
  for (std::size_t i = 0; i < schema.questions.size(); ++i) {
    const Question& q = schema.questions[i];
    const std::string where = detail::index_path("questions", i);
    if (q.id.empty()) report.error("empty_id", "question id must not be empty", where);
    if (!seen.insert(q.id).second) report.error("duplicate_question_id", "duplicate question id '" + q.id + "'", where);
    if (const Likert* l = std::get_if<Likert>(&q.kind); l && l->levels < 2) {
      report.error("likert_levels", "Likert questions need at least 2 levels", where);
    }
    const QualityMetric* metric = tree.find_metric(q.metric);
    if (metric == nullptr) {
      report.error("unknown_metric", "question '" + q.id + "' binds unknown metric '" + q.metric + "'", where);
    } else if (metric->source != expected) {
      report.error("binding_source", "metric '" + q.metric + "' is not a " + to_string(expected) + " metric", where);
    }
  }
  const std::size_t canonical =
      schema.perspective == Perspective::Modeler ? kCanonicalModelerQuestions : kCanonicalReaderQuestions;
  if (schema.questions.size() != canonical) {
    report.warning("noncanonical_question_count",
                   "non-canonical question count: " + std::to_string(schema.questions.size()) + " (default " +
                       std::to_string(canonical) + ")");
  }
  return report;
}

ValidationReport validate_responses(const QuestionnaireSchema& schema, const ResponseSet& responses) {
  ValidationReport report;
  if (responses.perspective != schema.perspective) {
    report.error("perspective_mismatch",
                 "responses are for the " + to_string(responses.perspective) + " questionnaire, schema is " +
                     to_string(schema.perspective));
  }
  for (const Question& q : schema.questions) {
    const auto it = responses.answers.find(q.id);
    if (it == responses.answers.end()) {
      report.error("missing_answer", "missing answer: " + q.id, q.id);
      continue;
    }
    const Answer& a = it->second;
    if (const Likert* l = std::get_if<Likert>(&q.kind)) {
      const int* level = std::get_if<int>(&a);
      if (level == nullptr) {
        report.error("answer_type", "question " + q.id + " expects a Likert level", q.id);
      } else if (*level < 1 || *level > l->levels) {
        report.error("out_of_range", "answer " + std::to_string(*level) + " to " + q.id + " is outside [1, " +
                                         std::to_string(l->levels) + "]", q.id);
      }
    } else if (!std::holds_alternative<bool>(a)) {
      report.error("answer_type", "question " + q.id + " expects true or false", q.id);
    }
  }
  for (const auto& [id, answer] : responses.answers) {
    if (schema.find(id) == nullptr) report.error("unknown_question", "unknown question id: " + id, id);
  }
  return report;
}

double answer_score(const QuestionKind& kind, const Answer& answer) {
  if (const Likert* l = std::get_if<Likert>(&kind)) {
    const int v = std::get<int>(answer);
    return kScoreMin + (kScoreMax - kScoreMin) * static_cast<double>(v - 1) / static_cast<double>(l->levels - 1);
  }
  return std::get<bool>(answer) ? kScoreMax : kScoreMin;
}

std::map<std::string, double> score_responses(const QuestionnaireSchema& schema, const ResponseSet& responses) {
  const ValidationReport report = validate_responses(schema, responses);
  if (!report.ok()) {
    const Issue& first = report.issues.front();
    throw validation_error(first.code, "invalid responses from '" + responses.respondent + "':\n" + to_text(report),
                           first.where);
  }
  std::map<std::string, std::pair<double, int>> sums;
  for (const Question& q : schema.questions) {
    double s = answer_score(q.kind, responses.answers.at(q.id));
    if (q.polarity == QuestionPolarity::Reversed) s = kScoreMax + kScoreMin - s;
    auto& [total, count] = sums[q.metric];
    total += s;
    ++count;
  }
  std::map<std::string, double> out;
  for (const auto& [metric, entry] : sums) out[metric] = entry.first / entry.second;
  return out;
}

QuestionnaireSchema parse_schema(std::string_view document, const std::string& source) {
  const json root = detail::parse_json(document, source);
  detail::check_format(root, "pmc-questionnaire", source);
  QuestionnaireSchema schema;
  if (const json* v = detail::optional_field(root, "version")) schema.version = detail::as_string(*v, "version");
  schema.perspective =
      detail::with_path("perspective", [&] { return parse_perspective(detail::get_string(root, "perspective", "")); });
  const json& questions = detail::as_array(detail::require(root, "questions", ""), "questions");
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const json& row = questions[i];
    const std::string path = detail::index_path("questions", i);
    Question q;
    q.id = detail::get_string(row, "id", path);
    if (const json* t = detail::optional_field(row, "text")) q.text = detail::as_string(*t, path + ".text");
    const std::string kind = detail::get_string(row, "kind", path);
    if (kind == "likert") {
      q.kind = Likert{detail::get_int(row, "levels", path)};
    } else if (kind == "true_false") {
      q.kind = TrueFalse{};
    } else {
      throw input_error("unknown_question_kind", "unknown question kind '" + kind + "'", path + ".kind");
    }
    q.metric = detail::get_string(row, "metric", path);
    if (const json* p = detail::optional_field(row, "polarity")) {
      q.polarity = detail::with_path(path + ".polarity",
                                     [&] { return parse_question_polarity(detail::as_string(*p, path + ".polarity")); });
    }
    schema.questions.push_back(std::move(q));
  }
  return schema;
}

QuestionnaireSchema load_schema_file(const std::filesystem::path& path) {
  return parse_schema(detail::read_file(path), path.string());
}

std::string serialize_schema(const QuestionnaireSchema& schema) {
  ordered_json root;
  root["format"] = "pmc-questionnaire";
  root["version"] = schema.version;
  root["perspective"] = to_string(schema.perspective);
  ordered_json rows = ordered_json::array();
  for (const Question& q : schema.questions) {
    ordered_json row;
    row["id"] = q.id;
    row["text"] = q.text;
    if (const Likert* l = std::get_if<Likert>(&q.kind)) {
      row["kind"] = "likert";
      row["levels"] = l->levels;
    } else {
      row["kind"] = "true_false";
    }
    row["metric"] = q.metric;
    row["polarity"] = polarity_name(q.polarity);
    rows.push_back(std::move(row));
  }
  root["questions"] = std::move(rows);
  return root.dump(2) + "\n";
}

ResponseSet parse_responses(std::string_view document, const std::string& source) {
  const json root = detail::parse_json(document, source);
  detail::check_format(root, "pmc-responses", source);
  ResponseSet r;
  r.respondent = detail::get_string(root, "respondent", "");
  if (const json* v = detail::optional_field(root, "schema_version")) {
    r.schema_version = detail::as_string(*v, "schema_version");
  }
  r.perspective =
      detail::with_path("perspective", [&] { return parse_perspective(detail::get_string(root, "perspective", "")); });
  const json& answers = detail::require(root, "answers", "");
  if (!answers.is_object()) throw input_error("type", "expected an object", "answers");
  for (const auto& [id, value] : answers.items()) {
    const std::string path = "answers." + id;
    if (value.is_boolean()) {
      r.answers[id] = value.get<bool>();
    } else if (value.is_number_integer()) {
      r.answers[id] = value.get<int>();
    } else {
      throw input_error("type", "expected true, false, or an integer level", path);
    }
  }
  return r;
}

ResponseSet load_responses_file(const std::filesystem::path& path) {
  return parse_responses(detail::read_file(path), path.string());
}

std::string serialize_responses(const ResponseSet& responses) {
  ordered_json root;
  root["format"] = "pmc-responses";
  root["version"] = "1.0";
  root["respondent"] = responses.respondent;
  root["schema_version"] = responses.schema_version;
  root["perspective"] = to_string(responses.perspective);
  ordered_json answers = ordered_json::object();
  for (const auto& [id, a] : responses.answers) {
    if (const bool* b = std::get_if<bool>(&a)) answers[id] = *b;
    else answers[id] = std::get<int>(a);
  }
  root["answers"] = std::move(answers);
  return root.dump(2) + "\n";
}

}  // namespace pmc::questionnaire
