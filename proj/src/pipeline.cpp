#include "pmc/pipeline.hpp"

#include <cstdlib>

#include "pmc/defaults.hpp"
#include "pmc/error.hpp"
#include "text_util.hpp"

namespace pmc {

namespace {

namespace fs = std::filesystem;

std::optional<fs::path> config_dir(const ConfigPaths& paths) {
  if (paths.config_dir) return paths.config_dir;
  if (const char* env = std::getenv(kConfigDirEnv); env != nullptr && *env != '\0') return fs::path(env);
  return std::nullopt;
}

/// Document text and its display name, resolved as explicit path, then the
/// config directory, then the shipped default.
ConfigDocument resolve(const std::optional<fs::path>& explicit_path, const std::optional<fs::path>& dir,
                       std::string_view relative) {
  if (explicit_path) return {detail::read_file(*explicit_path), explicit_path->string()};
  if (dir) {
    const fs::path candidate = *dir / fs::path(std::string(relative));
    if (fs::exists(candidate)) return {detail::read_file(candidate), candidate.string()};
  }
  return {std::string(defaults::file(relative)), "<default " + std::string(relative) + ">"};
}

std::vector<language::LanguageDescriptor> resolve_registry(const ConfigPaths& paths,
                                                           const std::optional<fs::path>& dir) {
  if (paths.languages_dir) return language::load_registry(*paths.languages_dir);
  if (dir) {
    const fs::path candidate = *dir / fs::path(std::string(defaults::kLanguagesDir));
    if (fs::is_directory(candidate)) return language::load_registry(candidate);
  }
  std::vector<language::LanguageDescriptor> registry;
  const std::string prefix = std::string(defaults::kLanguagesDir) + "/";
  for (const auto& f : defaults::embedded::files()) {
    if (f.path.substr(0, prefix.size()) != prefix) continue;
    registry.push_back(language::parse_descriptor(f.content, "<default " + std::string(f.path) + ">"));
  }
  return registry;
}

questionnaire::QuestionnaireSchema checked_schema(const ConfigDocument& doc,
                                                  Perspective expected, const EvaluationTheoryTree& tree) {
  auto schema = questionnaire::parse_schema(doc.text, doc.source);
  if (schema.perspective != expected) {
    throw validation_error("perspective_mismatch", "expected a " + to_string(expected) + " questionnaire", doc.source);
  }
  const ValidationReport report = questionnaire::validate_schema(schema, tree);
  if (!report.ok()) {
    const Issue& first = report.issues.front();
    throw validation_error(first.code, first.message, doc.source + " " + first.where);
  }
  return schema;
}

}  // namespace

ConfigDocument resolve_document(const std::optional<fs::path>& explicit_path, const ConfigPaths& paths,
                                std::string_view relative) {
  return resolve(explicit_path, config_dir(paths), relative);
}

std::vector<language::LanguageDescriptor> load_language_registry(const ConfigPaths& paths) {
  return resolve_registry(paths, config_dir(paths));
}

Configuration load_configuration(const ConfigPaths& paths) {
  const auto dir = config_dir(paths);
  Configuration config;
  const auto ett = resolve(paths.ett, dir, defaults::kEttFile);
  config.tree = load_ett(ett.text, ett.source);
  if (!config.tree.weights_assigned()) config.tree = assign_weights(std::move(config.tree));
  config.modeler_schema =
      checked_schema(resolve(paths.modeler_schema, dir, defaults::kModelerSchemaFile), Perspective::Modeler, config.tree);
  config.reader_schema =
      checked_schema(resolve(paths.reader_schema, dir, defaults::kReaderSchemaFile), Perspective::Reader, config.tree);
  config.registry = resolve_registry(paths, dir);
  return config;
}

Configuration default_configuration() {
  Configuration config;
  config.tree = assign_weights(load_ett(defaults::file(defaults::kEttFile), "<default ett.json>"));
  config.modeler_schema = checked_schema({std::string(defaults::file(defaults::kModelerSchemaFile)), "<default modeler>"},
                                         Perspective::Modeler, config.tree);
  config.reader_schema = checked_schema({std::string(defaults::file(defaults::kReaderSchemaFile)), "<default reader>"},
                                        Perspective::Reader, config.tree);
  config.registry = resolve_registry(ConfigPaths{}, std::nullopt);
  return config;
}

scoring::ComprehensionEvaluation evaluate_model(const Configuration& config, const ModelSubmission& submission,
                                                double noise_threshold) {
  const language::LanguageDescriptor* lang = language::find_language(config.registry, submission.language);
  if (lang == nullptr) {
    throw validation_error("unknown_language", "language '" + submission.language + "' is not registered");
  }
  if (submission.readers.empty()) {
    throw input_error("missing_responses", "at least one reader response set is required");
  }

  scoring::EvaluationInputs inputs;
  inputs.model_id = submission.model_id;
  inputs.language_values["complexity"] =
      language::normalize_complexity(config.registry, language::NormalizationMode::Verbatim).at(lang->name);
  inputs.language_values["control_flow_patterns"] = language::pattern_score(*lang).control_flow_percentage();
  for (const auto& v : model::extract_metrics(submission.graph, config.tree)) inputs.model_values[v.metric_id] = v.value;
  inputs.modeler_scores = questionnaire::score_responses(config.modeler_schema, submission.modeler);
  for (const auto& r : submission.readers) {
    inputs.reader_scores.emplace_back(r.respondent, questionnaire::score_responses(config.reader_schema, r));
  }
  return scoring::evaluate(config.tree, inputs, noise_threshold);
}

}  // namespace pmc
