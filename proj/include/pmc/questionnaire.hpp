#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pmc/ett.hpp"
#include "pmc/validation.hpp"

namespace pmc::questionnaire {

enum class QuestionPolarity { Positive, Reversed };

struct TrueFalse {};
struct Likert {
  int levels = 5;
};
using QuestionKind = std::variant<TrueFalse, Likert>;

struct Question {
  std::string id;
  std::string text;
  QuestionKind kind = Likert{};
  std::string metric;  // bound QualityMetric id
  QuestionPolarity polarity = QuestionPolarity::Positive;
};

struct QuestionnaireSchema {
  std::string version = "1.0";
  Perspective perspective = Perspective::Modeler;
  std::vector<Question> questions;

  const Question* find(std::string_view id) const;
};

inline constexpr std::size_t kCanonicalModelerQuestions = 49;
inline constexpr std::size_t kCanonicalReaderQuestions = 24;

using Answer = std::variant<bool, int>;

struct ResponseSet {
  std::string respondent;
  std::string schema_version = "1.0";
  Perspective perspective = Perspective::Modeler;
  std::map<std::string, Answer> answers;
};

/// Schema self-check against a tree: unique question ids, Likert levels >= 2,
/// every binding targets a metric of the matching questionnaire source.
ValidationReport validate_schema(const QuestionnaireSchema& schema, const EvaluationTheoryTree& tree);

/// Lists missing answers, unknown question ids, out-of-range Likert levels,
/// and answers of the wrong type. Empty report means complete and valid.
ValidationReport validate_responses(const QuestionnaireSchema& schema, const ResponseSet& responses);

/// Score of a single answer on [1, 10] before polarity is applied.
double answer_score(const QuestionKind& kind, const Answer& answer);

/// Per-metric scores: each answer mapped onto [1, 10], reversed questions
/// reflected through 11 - s, and several questions on one metric averaged.
/// Throws a Validation error when the responses do not validate.
std::map<std::string, double> score_responses(const QuestionnaireSchema& schema, const ResponseSet& responses);

QuestionnaireSchema parse_schema(std::string_view document, const std::string& source = "<questionnaire>");
QuestionnaireSchema load_schema_file(const std::filesystem::path& path);
std::string serialize_schema(const QuestionnaireSchema& schema);

ResponseSet parse_responses(std::string_view document, const std::string& source = "<responses>");
ResponseSet load_responses_file(const std::filesystem::path& path);
std::string serialize_responses(const ResponseSet& responses);

}  // namespace pmc::questionnaire
