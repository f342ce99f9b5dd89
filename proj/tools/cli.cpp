#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "pmc/defaults.hpp"
#include "pmc/error.hpp"
#include "pmc/pipeline.hpp"
#include "pmc/ranking.hpp"
#include "pmc/report.hpp"

namespace pmc::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct GlobalOptions {
  std::string config_dir;
  std::string ett;
  std::string modeler_schema;
  std::string reader_schema;
  std::string languages;

  ConfigPaths paths() const {
    ConfigPaths p;
    if (!config_dir.empty()) p.config_dir = config_dir;
    if (!ett.empty()) p.ett = ett;
    if (!modeler_schema.empty()) p.modeler_schema = modeler_schema;
    if (!reader_schema.empty()) p.reader_schema = reader_schema;
    if (!languages.empty()) p.languages_dir = languages;
    return p;
  }
};

struct ScoreOptions {
  std::vector<std::string> models;
  std::string modeler;
  std::vector<std::string> readers;
  std::string language = "BPMN 2.0";
  std::string format = "text";
  double threshold = scoring::kDefaultNoiseThreshold;
  std::string weights;
  int jobs = 1;
  std::string output;
};

struct SurveyOptions {
  std::string input;
  std::string method = "dnlog";
  double d = 10.0;
  double p = 2.0;
  bool compare = false;
  std::string format = "text";
};

struct LanguageOptions {
  bool full_range = false;
  std::string format = "text";
};

struct InspectOptions {
  std::string model;
  std::string format = "json";
};

struct FillOptions {
  std::string perspective;
  std::string respondent;
  std::string output;
};

struct InitOptions {
  std::string dir = ".";
  bool force = false;
};

std::string fmt(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
  return buffer;
}

std::string pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text + " " : text + std::string(width - text.size(), ' ');
}

void emit(const std::string& body, const std::string& output, std::ostream& out) {
  if (output.empty()) {
    out << body;
    return;
  }
  std::ofstream file(output, std::ios::binary | std::ios::trunc);
  if (!file) throw input_error("io", "cannot write file", output);
  file << body;
}

InteractionWeights parse_weights(const std::string& text) {
  const auto comma = text.find(',');
  const auto parse = [&](const std::string& part) {
    char* end = nullptr;
    const double v = std::strtod(part.c_str(), &end);
    if (part.empty() || end != part.c_str() + part.size() || !std::isfinite(v)) {
      throw input_error("weights_format", "--weights expects 'w_m,w_r', e.g. 0.15,0.85");
    }
    return v;
  };
  if (comma == std::string::npos) throw input_error("weights_format", "--weights expects 'w_m,w_r', e.g. 0.15,0.85");
  return {parse(text.substr(0, comma)), parse(text.substr(comma + 1))};
}

int cmd_score(const ScoreOptions& o, const GlobalOptions& g, std::ostream& out) {
  const report::Format format = report::parse_format(o.format);
  if (format == report::Format::Csv && o.models.size() > 1) {
    throw input_error("conflicting_flags", "--format csv takes a single --model");
  }
  if (!std::isfinite(o.threshold)) throw input_error("threshold", "--threshold must be a finite number");

  Configuration config = load_configuration(g.paths());
  if (!o.weights.empty()) config.tree.interaction = parse_weights(o.weights);

  const auto modeler = questionnaire::load_responses_file(o.modeler);
  std::vector<questionnaire::ResponseSet> readers;
  for (const auto& r : o.readers) readers.push_back(questionnaire::load_responses_file(r));

  auto score_one = [&](const std::string& path) {
    ModelSubmission submission;
    submission.model_id = fs::path(path).stem().string();
    submission.graph = model::load_model_file(path);
    submission.language = o.language;
    submission.modeler = modeler;
    submission.readers = readers;
    return evaluate_model(config, submission, o.threshold);
  };

  // Independent evaluations; results are collected in input order.
  std::vector<scoring::ComprehensionEvaluation> results;
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, o.jobs));
  for (std::size_t start = 0; start < o.models.size(); start += jobs) {
    std::vector<std::future<scoring::ComprehensionEvaluation>> batch;
    const std::size_t stop = std::min(o.models.size(), start + jobs);
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, score_one, o.models[i]));
    }
    for (auto& f : batch) results.push_back(f.get());
  }

  std::string body;
  if (format == report::Format::Json && results.size() > 1) {
    ordered_json all = ordered_json::array();
    for (const auto& e : results) all.push_back(ordered_json::parse(report::evaluation_to_json(e)));
    body = all.dump(2) + "\n";
  } else {
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (i > 0) body += "\n";
      body += report::export_evaluation(results[i], format).body;
    }
  }
  emit(body, o.output, out);
  return kExitOk;
}

int cmd_ett_validate(const GlobalOptions& g, std::ostream& out) {
  const ConfigPaths paths = g.paths();
  const ConfigDocument doc = resolve_document(paths.ett, paths, defaults::kEttFile);
  const EvaluationTheoryTree tree = parse_ett(doc.text, doc.source);
  const ValidationReport report = validate_ett(tree);
  out << doc.source << ": " << tree.metric_count() << " metrics (" << tree.metric_count(Perspective::Modeler)
      << " modeler, " << tree.metric_count(Perspective::Reader) << " reader), " << tree.criteria.size()
      << " criteria\n";
  if (!report.empty()) out << to_text(report);
  out << (report.ok() ? "valid" : "invalid") << " (" << report.error_count() << " errors, " << report.warning_count()
      << " warnings)\n";
  return report.ok() ? kExitOk : kExitValidation;
}

std::string ranking_table(const std::vector<ranking::RankedItem>& items) {
  std::size_t width = 4;
  for (const auto& i : items) width = std::max(width, i.item.size());
  std::string text = pad("rank", 6) + pad("item", width + 2) + "score\n";
  for (std::size_t r = 0; r < items.size(); ++r) {
    text += pad(std::to_string(r + 1), 6) + pad(items[r].item, width + 2) + fmt(items[r].score, 6) + "\n";
  }
  return text;
}

int cmd_survey_rank(const SurveyOptions& o, std::ostream& out) {
  if (o.format != "text" && o.format != "json") throw input_error("unsupported_format", "survey rank supports text and json");
  const ranking::SurveyDataset data = ranking::load_survey_csv(o.input);
  if (o.compare) {
    const auto rows = ranking::compare_methods(data);
    if (o.format == "json") {
      ordered_json all = ordered_json::array();
      for (const auto& row : rows) {
        ordered_json r;
        r["method"] = row.method;
        r["growth"] = ranking::to_string(row.growth);
        r["weights"] = row.weights;
        ordered_json items = ordered_json::array();
        for (const auto& i : row.ranking) items.push_back({{"item", i.item}, {"score", i.score}});
        r["ranking"] = std::move(items);
        all.push_back(std::move(r));
      }
      out << all.dump(2) << "\n";
      return kExitOk;
    }
    out << data.items.size() << " items, " << data.ranks << " ranks, " << data.respondent_count << " respondents\n\n";
    out << pad("method", 22) << pad("growth", 13) << "weights\n";
    for (const auto& row : rows) {
      std::string weights;
      for (double w : row.weights) weights += (weights.empty() ? "" : ", ") + fmt(w, 4);
      out << pad(row.method, 22) << pad(ranking::to_string(row.growth), 13) << weights << "\n";
    }
    for (const auto& row : rows) out << "\n" << row.method << "\n" << ranking_table(row.ranking);
    return kExitOk;
  }
  const ranking::RankMethod method = ranking::parse_method(o.method, o.p, o.d);
  const auto ranked = ranking::rank_items(data, method);
  if (o.format == "json") {
    ordered_json items = ordered_json::array();
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      items.push_back({{"rank", r + 1}, {"item", ranked[r].item}, {"score", ranked[r].score}});
    }
    out << ordered_json{{"method", ranking::method_name(method)}, {"ranking", items}}.dump(2) << "\n";
    return kExitOk;
  }
  out << "method " << ranking::method_name(method) << ", " << data.respondent_count << " respondents\n";
  out << ranking_table(ranked);
  return kExitOk;
}

int cmd_language_compare(const LanguageOptions& o, const GlobalOptions& g, std::ostream& out) {
  if (o.format != "text" && o.format != "json") {
    throw input_error("unsupported_format", "language compare supports text and json");
  }
  const auto registry = load_language_registry(g.paths());
  const auto mode = o.full_range ? language::NormalizationMode::FullRange : language::NormalizationMode::Verbatim;
  const auto coefficients = language::normalize_complexity(registry, mode);
  const auto share = [](const language::PatternScore& s, language::PatternType t) {
    const auto it = s.percentage.find(t);
    return it == s.percentage.end() ? 0.0 : it->second;
  };
  if (o.format == "json") {
    ordered_json all = ordered_json::array();
    for (const auto& d : registry) {
      const auto score = language::pattern_score(d);
      all.push_back({{"name", d.name},
                     {"elements", d.elements},
                     {"characteristics", d.characteristics},
                     {"relationships", d.relationships},
                     {"norm", language::complexity_score(d)},
                     {"coefficient", coefficients.at(d.name)},
                     {"patterns", score.total},
                     {"control_flow", share(score, language::PatternType::ControlFlow)},
                     {"data", share(score, language::PatternType::Data)},
                     {"resource", share(score, language::PatternType::Resource)}});
    }
    out << ordered_json{{"normalization", o.full_range ? "full_range" : "verbatim"}, {"languages", all}}.dump(2)
        << "\n";
    return kExitOk;
  }
  std::size_t width = 8;
  for (const auto& d : registry) width = std::max(width, d.name.size());
  out << pad("language", width + 2) << pad("x", 6) << pad("y", 6) << pad("z", 6) << pad("||C||", 10)
      << pad(o.full_range ? "C_bar*" : "C_bar", 9) << pad("P", 6) << pad("control", 9) << pad("data", 9) << "resource\n";
  for (const auto& d : registry) {
    const auto score = language::pattern_score(d);
    out << pad(d.name, width + 2) << pad(fmt(d.elements, 0), 6) << pad(fmt(d.characteristics, 0), 6)
        << pad(fmt(d.relationships, 0), 6) << pad(fmt(language::complexity_score(d), 4), 10)
        << pad(fmt(coefficients.at(d.name), 4), 9) << pad(fmt(score.total, 0), 6)
        << pad(fmt(share(score, language::PatternType::ControlFlow), 4), 9)
        << pad(fmt(share(score, language::PatternType::Data), 4), 9)
        << fmt(share(score, language::PatternType::Resource), 4) << "\n";
  }
  if (o.full_range) out << "* full-range min-max normalization onto [1, 10], not the verbatim coefficient\n";
  return kExitOk;
}

int cmd_model_inspect(const InspectOptions& o, std::ostream& out) {
  const model::ProcessModelGraph graph = model::load_model_file(o.model);
  const auto metrics = model::all_metrics(graph);
  if (o.format == "json") {
    out << model::graph_to_json(graph, metrics);
    return kExitOk;
  }
  if (o.format != "text") throw input_error("unsupported_format", "model inspect supports text and json");
  out << o.model << ": " << graph.nodes.size() << " nodes, " << graph.edges.size() << " edges\n";
  std::map<std::string, int> kinds;
  for (const auto& n : graph.nodes) ++kinds[model::to_string(n.kind)];
  for (const auto& [kind, count] : kinds) out << "  " << pad(kind, 22) << count << "\n";
  out << "metrics\n";
  for (const auto& [name, value] : metrics) out << "  " << pad(name, 26) << fmt(value, 4) << "\n";
  if (!graph.warnings.empty()) {
    out << "warnings\n";
    for (const auto& w : graph.warnings) out << "  " << w << "\n";
  }
  return kExitOk;
}

std::optional<questionnaire::Answer> read_answer(const questionnaire::Question& q, const std::string& line) {
  std::string text;
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) text += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (const auto* likert = std::get_if<questionnaire::Likert>(&q.kind)) {
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || v < 1 || v > likert->levels) return std::nullopt;
    return static_cast<int>(v);
  }
  if (text == "y" || text == "yes" || text == "t" || text == "true") return true;
  if (text == "n" || text == "no" || text == "f" || text == "false") return false;
  return std::nullopt;
}

int cmd_fill(const FillOptions& o, const GlobalOptions& g, std::istream& in, std::ostream& out, std::ostream& err) {
  const Perspective perspective = parse_perspective(o.perspective);
  const Configuration config = load_configuration(g.paths());
  const auto& schema = perspective == Perspective::Modeler ? config.modeler_schema : config.reader_schema;
  questionnaire::ResponseSet responses;
  responses.respondent = o.respondent;
  responses.schema_version = schema.version;
  responses.perspective = perspective;
  // Prompts go to the error stream so stdout carries only the response file.
  for (std::size_t i = 0; i < schema.questions.size(); ++i) {
    const auto& q = schema.questions[i];
    const auto* likert = std::get_if<questionnaire::Likert>(&q.kind);
    const std::string hint = likert ? "1-" + std::to_string(likert->levels) : "y/n";
    while (true) {
      err << "[" << (i + 1) << "/" << schema.questions.size() << "] " << q.text << " (" << hint << "): " << std::flush;
      std::string line;
      if (!std::getline(in, line)) {
        throw input_error("incomplete_input", "input ended before question " + q.id + " was answered");
      }
      if (const auto answer = read_answer(q, line)) {
        responses.answers[q.id] = *answer;
        break;
      }
      err << "expected " << hint << "\n";
    }
  }
  emit(questionnaire::serialize_responses(responses), o.output, out);
  return kExitOk;
}

int cmd_init(const InitOptions& o, std::ostream& out) {
  const auto result = defaults::write_defaults(o.dir, o.force);
  for (const auto& p : result.written) out << "wrote " << p.string() << "\n";
  for (const auto& p : result.skipped) out << "kept " << p.string() << " (exists; --force overwrites)\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Process model comprehension scoring", "pmc"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config-dir", g.config_dir, "Directory with ett.json, questionnaires/, languages/");
  app.add_option("--ett", g.ett, "Evaluation theory tree file");
  app.add_option("--modeler-schema", g.modeler_schema, "Modeler questionnaire schema");
  app.add_option("--reader-schema", g.reader_schema, "Reader questionnaire schema");
  app.add_option("--languages", g.languages, "Directory of language descriptor files");

  ScoreOptions so;
  auto* score = app.add_subcommand("score", "Score process models end to end");
  score->add_option("--model", so.models, "BPMN 2.0 model file (repeatable)")->required();
  score->add_option("--modeler", so.modeler, "Modeler response file")->required();
  score->add_option("--reader", so.readers, "Reader response file (repeatable)")->required();
  score->add_option("--language", so.language, "Registered modeling language")->capture_default_str();
  score->add_option("--format", so.format, "text, markdown, json, or csv")->capture_default_str();
  score->add_option("--threshold", so.threshold, "Noise threshold")->capture_default_str();
  score->add_option("--weights", so.weights, "Interaction weights override 'w_m,w_r'");
  score->add_option("--jobs", so.jobs, "Models scored concurrently")->check(CLI::PositiveNumber)->capture_default_str();
  score->add_option("-o,--output", so.output, "Write the report to a file");

  auto* ett = app.add_subcommand("ett", "Evaluation theory tree tools");
  ett->require_subcommand(1);
  auto* ett_validate = ett->add_subcommand("validate", "Validate the tree and list every finding");

  SurveyOptions sv;
  auto* survey = app.add_subcommand("survey", "Survey placement tools");
  survey->require_subcommand(1);
  auto* survey_rank = survey->add_subcommand("rank", "Rank items of a survey dataset");
  survey_rank->add_option("input", sv.input, "Survey CSV file")->required();
  survey_rank->add_option("--method", sv.method, "rank-sum, reciprocal-rank, rank-exponent, dcg, dnlog")
      ->capture_default_str();
  survey_rank->add_option("--d", sv.d, "DNLog survey score d")->capture_default_str();
  survey_rank->add_option("--p", sv.p, "Rank exponent p")->capture_default_str();
  survey_rank->add_flag("--compare", sv.compare, "Compare all five methods");
  survey_rank->add_option("--format", sv.format, "text or json")->capture_default_str();

  LanguageOptions lo;
  auto* lang = app.add_subcommand("language", "Modeling language registry tools");
  lang->require_subcommand(1);
  auto* lang_compare = lang->add_subcommand("compare", "Complexity and pattern support of registered languages");
  lang_compare->add_flag("--full-range", lo.full_range, "Min-max normalization onto [1, 10] instead of the verbatim coefficient");
  lang_compare->add_option("--format", lo.format, "text or json")->capture_default_str();

  InspectOptions io;
  auto* mdl = app.add_subcommand("model", "Process model tools");
  mdl->require_subcommand(1);
  auto* inspect = mdl->add_subcommand("inspect", "Print the parsed graph and its metrics");
  inspect->add_option("model", io.model, "BPMN 2.0 model file")->required();
  inspect->add_option("--format", io.format, "json or text")->capture_default_str();

  FillOptions fo;
  auto* quest = app.add_subcommand("questionnaire", "Questionnaire tools");
  quest->require_subcommand(1);
  auto* fill = quest->add_subcommand("fill", "Answer a questionnaire interactively");
  fill->add_option("--perspective", fo.perspective, "modeler or reader")->required();
  fill->add_option("--respondent", fo.respondent, "Respondent id")->required();
  fill->add_option("-o,--output", fo.output, "Write the response file here instead of stdout");

  InitOptions ino;
  auto* init = app.add_subcommand("init", "Write the default configuration files");
  init->add_option("--dir", ino.dir, "Target directory")->capture_default_str();
  init->add_flag("--force", ino.force, "Overwrite existing files");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*score) return cmd_score(so, g, out);
    if (*ett_validate) return cmd_ett_validate(g, out);
    if (*survey_rank) return cmd_survey_rank(sv, out);
    if (*lang_compare) return cmd_language_compare(lo, g, out);
    if (*inspect) return cmd_model_inspect(io, out);
    if (*fill) return cmd_fill(fo, g, in, out, err);
    if (*init) return cmd_init(ino, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Input ? kExitInput : kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  err << app.help();
  return kExitInput;
}

}  // namespace pmc::cli
