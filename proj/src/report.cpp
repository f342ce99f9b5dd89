#include "pmc/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json_util.hpp"
#include "pmc/error.hpp"

namespace pmc::report {

using detail::json;
using detail::ordered_json;
using scoring::ComprehensionEvaluation;

std::string to_string(Format format) {
  switch (format) {
    case Format::PlainText: return "text";
    case Format::Markdown: return "markdown";
    case Format::Json: return "json";
    case Format::Csv: return "csv";
  }
  return "text";
}

Format parse_format(const std::string& name) {
  if (name == "text") return Format::PlainText;
  if (name == "markdown") return Format::Markdown;
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw input_error("unsupported_format", "unsupported format '" + name + "' (text, markdown, json, csv)");
}

double round2(double value) {
  // The epsilon absorbs binary representation error so 6.065 rounds up.
  return std::floor(value * 100.0 + 0.5 + 1e-9) / 100.0;
}

std::string fixed2(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.2f", round2(value));
  return buffer;
}

namespace {

/// Shortest decimal text that reads back to the same double.
std::string shortest(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : text + std::string(width - text.size(), ' ');
}

void require_complete(const ComprehensionEvaluation& e) {
  const ValidationReport report = scoring::check_evaluation(e);
  if (!report.ok()) {
    const Issue& first = report.issues.front();
    throw validation_error(first.code, "incomplete evaluation:\n" + to_text(report), first.where);
  }
}

std::string weights_note(const ComprehensionEvaluation& e) {
  return "w_m = " + shortest(e.interaction.modeler) + ", w_r = " + shortest(e.interaction.reader);
}

std::string render_text(const ComprehensionEvaluation& e) {
  std::ostringstream out;
  out << "Process model comprehension summary";
  if (!e.model_id.empty()) out << ": " << e.model_id;
  out << "\n\n";
  out << "S_m (modeler) " << fixed2(e.modeler_score) << "\n";
  out << "S_r (reader)  " << fixed2(e.reader_score);
  if (!e.readers.empty()) out << "  (mean of " << e.readers.size() << " reader" << (e.readers.size() == 1 ? "" : "s") << ")";
  out << "\n";
  out << "S_b (both)    " << fixed2(e.combined_score) << "  (" << weights_note(e) << ")\n";
  if (!e.readers.empty()) {
    out << "\nReaders\n";
    for (const auto& r : e.readers) out << "  " << pad(r.respondent, 24) << fixed2(r.score) << "\n";
  }

  std::size_t width = 9;
  for (const auto& c : e.criteria) width = std::max(width, c.name.size());
  out << "\nCriteria\n";
  out << "  " << pad("perspective", 13) << pad("criterion", width + 2) << pad("weight", 8) << "Q_c\n";
  for (const auto& c : e.criteria) {
    out << "  " << pad(to_string(c.perspective), 13) << pad(c.name, width + 2) << pad(fixed2(c.weight), 8)
        << fixed2(c.score) << "\n";
  }

  out << "\nNoise (threshold " << fixed2(e.noise_threshold) << ")\n";
  if (e.noise.empty()) {
    out << "  no noise detected above threshold\n";
  } else {
    for (const auto& f : e.noise) {
      out << "  " << fixed2(f.score) << "  " << pad(scoring::to_string(f.level), 10) << f.path << "\n";
    }
  }
  return out.str();
}

std::string render_markdown(const ComprehensionEvaluation& e) {
  std::ostringstream out;
  out << "# Process model comprehension summary";
  if (!e.model_id.empty()) out << ": " << e.model_id;
  out << "\n\n";
  out << "| Score | Value |\n|---|---|\n";
  out << "| S_m (modeler) | " << fixed2(e.modeler_score) << " |\n";
  out << "| S_r (reader) | " << fixed2(e.reader_score) << " |\n";
  out << "| S_b (both) | " << fixed2(e.combined_score) << " |\n\n";
  out << "Interaction weights: " << weights_note(e) << "\n";
  if (!e.readers.empty()) {
    out << "\n## Readers\n\n| Respondent | S_r |\n|---|---|\n";
    for (const auto& r : e.readers) out << "| " << r.respondent << " | " << fixed2(r.score) << " |\n";
  }
  out << "\n## Criteria\n\n| Perspective | Criterion | Weight | Q_c |\n|---|---|---|---|\n";
  for (const auto& c : e.criteria) {
    out << "| " << to_string(c.perspective) << " | " << c.name << " | " << fixed2(c.weight) << " | " << fixed2(c.score)
        << " |\n";
  }
  out << "\n## Noise (threshold " << fixed2(e.noise_threshold) << ")\n\n";
  if (e.noise.empty()) {
    out << "no noise detected above threshold\n";
  } else {
    out << "| Score | Level | Path |\n|---|---|---|\n";
    for (const auto& f : e.noise) {
      out << "| " << fixed2(f.score) << " | " << scoring::to_string(f.level) << " | " << f.path << " |\n";
    }
  }
  return out.str();
}

std::string render_csv(const ComprehensionEvaluation& e) {
  std::ostringstream out;
  out << "id,criterion,perspective,raw,normalized,weight\n";
  for (const auto& m : e.metrics) {
    out << csv_field(m.id) << ',' << csv_field(m.criterion) << ',' << to_string(m.perspective) << ','
        << (m.raw ? shortest(*m.raw) : "") << ',' << shortest(m.score) << ',' << shortest(m.weight) << "\n";
  }
  return out.str();
}

Perspective perspective_at(const json& row, const std::string& path) {
  return detail::with_path(path + ".perspective",
                           [&] { return parse_perspective(detail::get_string(row, "perspective", path)); });
}

}  // namespace

ReportDocument render_summary(const ComprehensionEvaluation& evaluation, Format format) {
  require_complete(evaluation);
  switch (format) {
    case Format::Markdown: return {format, render_markdown(evaluation)};
    case Format::PlainText: return {format, render_text(evaluation)};
    default: throw input_error("unsupported_format", "summary supports text and markdown only");
  }
}

ReportDocument export_evaluation(const ComprehensionEvaluation& evaluation, Format format) {
  switch (format) {
    case Format::Json: return {format, evaluation_to_json(evaluation)};
    case Format::Csv: return {format, render_csv(evaluation)};
    default: return render_summary(evaluation, format);
  }
}

std::string evaluation_to_json(const ComprehensionEvaluation& e) {
  ordered_json root;
  root["format"] = "pmc-evaluation";
  root["version"] = "1.0";
  root["model_id"] = e.model_id;
  root["scores"] = {{"modeler", e.modeler_score}, {"reader", e.reader_score}, {"combined", e.combined_score}};
  root["interaction_weights"] = {{"modeler", e.interaction.modeler}, {"reader", e.interaction.reader}};
  root["noise_threshold"] = e.noise_threshold;
  ordered_json readers = ordered_json::array();
  for (const auto& r : e.readers) readers.push_back({{"respondent", r.respondent}, {"score", r.score}});
  root["readers"] = std::move(readers);
  ordered_json criteria = ordered_json::array();
  for (const auto& c : e.criteria) {
    criteria.push_back({{"id", c.id}, {"name", c.name}, {"perspective", to_string(c.perspective)},
                        {"rank", c.rank}, {"weight", c.weight}, {"score", c.score}});
  }
  root["criteria"] = std::move(criteria);
  ordered_json metrics = ordered_json::array();
  for (const auto& m : e.metrics) {
    ordered_json row;
    row["id"] = m.id;
    row["name"] = m.name;
    row["criterion"] = m.criterion;
    row["perspective"] = to_string(m.perspective);
    row["source"] = to_string(m.source);
    row["raw"] = m.raw ? ordered_json(*m.raw) : ordered_json(nullptr);
    row["score"] = m.score;
    row["weight"] = m.weight;
    metrics.push_back(std::move(row));
  }
  root["metrics"] = std::move(metrics);
  ordered_json noise = ordered_json::array();
  for (const auto& f : e.noise) {
    noise.push_back({{"level", scoring::to_string(f.level)}, {"id", f.id}, {"name", f.name}, {"path", f.path},
                     {"perspective", to_string(f.perspective)}, {"score", f.score}, {"threshold", f.threshold}});
  }
  root["noise"] = std::move(noise);
  return root.dump(2) + "\n";
}

ComprehensionEvaluation evaluation_from_json(std::string_view document, const std::string& source) {
  const json root = detail::parse_json(document, source);
  detail::check_format(root, "pmc-evaluation", source);
  ComprehensionEvaluation e;
  if (const json* id = detail::optional_field(root, "model_id")) e.model_id = detail::as_string(*id, "model_id");
  const json& scores = detail::require(root, "scores", "");
  e.modeler_score = detail::get_number(scores, "modeler", "scores");
  e.reader_score = detail::get_number(scores, "reader", "scores");
  e.combined_score = detail::get_number(scores, "combined", "scores");
  if (const json* w = detail::optional_field(root, "interaction_weights")) {
    e.interaction.modeler = detail::get_number(*w, "modeler", "interaction_weights");
    e.interaction.reader = detail::get_number(*w, "reader", "interaction_weights");
  }
  if (const json* t = detail::optional_field(root, "noise_threshold")) {
    e.noise_threshold = detail::as_number(*t, "noise_threshold");
  }
  if (const json* readers = detail::optional_field(root, "readers")) {
    detail::as_array(*readers, "readers");
    for (std::size_t i = 0; i < readers->size(); ++i) {
      const std::string path = detail::index_path("readers", i);
      e.readers.push_back({detail::get_string((*readers)[i], "respondent", path),
                           detail::get_number((*readers)[i], "score", path)});
    }
  }
  const json& criteria = detail::as_array(detail::require(root, "criteria", ""), "criteria");
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const json& row = criteria[i];
    const std::string path = detail::index_path("criteria", i);
    scoring::CriterionResult c;
    c.id = detail::get_string(row, "id", path);
    c.name = detail::get_string(row, "name", path);
    c.perspective = perspective_at(row, path);
    if (const json* r = detail::optional_field(row, "rank")) c.rank = detail::as_int(*r, path + ".rank");
    if (const json* w = detail::optional_field(row, "weight")) c.weight = detail::as_number(*w, path + ".weight");
    c.score = detail::get_number(row, "score", path);
    e.criteria.push_back(std::move(c));
  }
  if (const json* metrics = detail::optional_field(root, "metrics")) {
    detail::as_array(*metrics, "metrics");
    for (std::size_t i = 0; i < metrics->size(); ++i) {
      const json& row = (*metrics)[i];
      const std::string path = detail::index_path("metrics", i);
      scoring::MetricResult m;
      m.id = detail::get_string(row, "id", path);
      m.name = detail::get_string(row, "name", path);
      m.criterion = detail::get_string(row, "criterion", path);
      m.perspective = perspective_at(row, path);
      if (const json* s = detail::optional_field(row, "source")) {
        m.source = detail::with_path(path + ".source", [&] { return parse_metric_source(detail::as_string(*s, path)); });
      }
      if (const json* raw = detail::optional_field(row, "raw")) m.raw = detail::as_number(*raw, path + ".raw");
      m.score = detail::get_number(row, "score", path);
      if (const json* w = detail::optional_field(row, "weight")) m.weight = detail::as_number(*w, path + ".weight");
      e.metrics.push_back(std::move(m));
    }
  }
  // Flags are derived data; a document without them gets them recomputed.
  const json* noise = detail::optional_field(root, "noise");
  if (noise == nullptr) {
    e.noise = scoring::detect_noise(e, e.noise_threshold);
    return e;
  }
  detail::as_array(*noise, "noise");
  for (std::size_t i = 0; i < noise->size(); ++i) {
    const json& row = (*noise)[i];
    const std::string path = detail::index_path("noise", i);
    scoring::NoiseFlag f;
    const std::string level = detail::get_string(row, "level", path);
    if (level == "metric") f.level = scoring::NoiseFlag::Level::Metric;
    else if (level == "criterion") f.level = scoring::NoiseFlag::Level::Criterion;
    else throw input_error("unknown_level", "unknown noise level '" + level + "'", path + ".level");
    f.id = detail::get_string(row, "id", path);
    f.name = detail::get_string(row, "name", path);
    f.path = detail::get_string(row, "path", path);
    f.perspective = perspective_at(row, path);
    f.score = detail::get_number(row, "score", path);
    f.threshold = detail::get_number(row, "threshold", path);
    e.noise.push_back(std::move(f));
  }
  return e;
}

}  // namespace pmc::report
