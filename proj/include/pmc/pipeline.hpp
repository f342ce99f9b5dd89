#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pmc/ett.hpp"
#include "pmc/language.hpp"
#include "pmc/model.hpp"
#include "pmc/questionnaire.hpp"
#include "pmc/scoring.hpp"

namespace pmc {

/// Tree, schemas, and language registry in effect for an evaluation.
struct Configuration {
  EvaluationTheoryTree tree;  // weights assigned
  questionnaire::QuestionnaireSchema modeler_schema;
  questionnaire::QuestionnaireSchema reader_schema;
  std::vector<language::LanguageDescriptor> registry;
};

/// Overrides for `load_configuration`. Unset paths fall back to
/// `config_dir`, and files missing there fall back to the shipped defaults.
struct ConfigPaths {
  std::optional<std::filesystem::path> config_dir;
  std::optional<std::filesystem::path> ett;
  std::optional<std::filesystem::path> modeler_schema;
  std::optional<std::filesystem::path> reader_schema;
  std::optional<std::filesystem::path> languages_dir;
};

/// Name of the environment variable naming the default config directory.
inline constexpr const char* kConfigDirEnv = "PMC_CONFIG_DIR";

/// Text of one config document and a name for messages.
struct ConfigDocument {
  std::string text;
  std::string source;
};

/// Resolves `relative` (e.g. "ett.json") as `explicit_path`, then the config
/// directory, then the shipped default.
ConfigDocument resolve_document(const std::optional<std::filesystem::path>& explicit_path, const ConfigPaths& paths,
                                std::string_view relative);
std::vector<language::LanguageDescriptor> load_language_registry(const ConfigPaths& paths);

Configuration load_configuration(const ConfigPaths& paths);
Configuration default_configuration();

struct ModelSubmission {
  std::string model_id;
  model::ProcessModelGraph graph;
  std::string language = "BPMN 2.0";
  questionnaire::ResponseSet modeler;
  std::vector<questionnaire::ResponseSet> readers;
};

/// Runs registry scoring, metric extraction, questionnaire scoring, and
/// aggregation for one model.
scoring::ComprehensionEvaluation evaluate_model(const Configuration& config, const ModelSubmission& submission,
                                                double noise_threshold = scoring::kDefaultNoiseThreshold);

}  // namespace pmc
