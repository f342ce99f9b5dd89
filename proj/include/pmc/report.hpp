#pragma once

#include <string>
#include <string_view>

#include "pmc/scoring.hpp"

namespace pmc::report {

enum class Format { PlainText, Markdown, Json, Csv };

std::string to_string(Format format);
/// Accepts "text", "markdown", "json", "csv". Throws an Input error otherwise.
Format parse_format(const std::string& name);

struct ReportDocument {
  Format format = Format::PlainText;
  std::string body;
};

/// Round half up to two decimals, as shown in the summary.
double round2(double value);
std::string fixed2(double value);

/// Summary view: S_m, S_r, S_b, the criterion table, and the noise list.
/// Throws a Validation error for an incomplete evaluation.
ReportDocument render_summary(const scoring::ComprehensionEvaluation& evaluation,
                              Format format = Format::PlainText);

/// Json: the full evaluation at full precision. Csv: one row per metric.
/// Text and Markdown: same as render_summary.
ReportDocument export_evaluation(const scoring::ComprehensionEvaluation& evaluation, Format format);

std::string evaluation_to_json(const scoring::ComprehensionEvaluation& evaluation);
scoring::ComprehensionEvaluation evaluation_from_json(std::string_view document,
                                                      const std::string& source = "<evaluation>");

}  // namespace pmc::report
