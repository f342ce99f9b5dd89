#include "pmc/ranking.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>

#include "pmc/error.hpp"
#include "text_util.hpp"

namespace pmc::ranking {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void check_method(const RankMethod& method) {
  std::visit(Overloaded{
                 [](const RankExponent& m) {
                   if (!(m.p > 0.0)) throw validation_error("rank_exponent_p", "rank exponent requires p > 0");
                 },
                 [](const DNLog& m) {
                   if (!(m.d > 1.0)) throw validation_error("dnlog_d", "DNLog requires d > 1");
                 },
                 [](const auto&) {},
             },
             method);
}

bool nearly_equal(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

std::string method_name(const RankMethod& method) {
  return std::visit(Overloaded{
                        [](const RankSum&) { return std::string("rank-sum"); },
                        [](const ReciprocalRank&) { return std::string("reciprocal-rank"); },
                        [](const RankExponent&) { return std::string("rank-exponent"); },
                        [](const DiscountedCumulativeGain&) { return std::string("dcg"); },
                        [](const DNLog&) { return std::string("dnlog"); },
                    },
                    method);
}

RankMethod parse_method(const std::string& name, double p, double d) {
  const std::string key = detail::lower(name);
  RankMethod method;
  if (key == "rank-sum") method = RankSum{};
  else if (key == "reciprocal-rank") method = ReciprocalRank{};
  else if (key == "rank-exponent") method = RankExponent{p};
  else if (key == "dcg") method = DiscountedCumulativeGain{};
  else if (key == "dnlog") method = DNLog{d};
  else throw input_error("unknown_method", "unknown ranking method '" + name + "'");
  check_method(method);
  return method;
}

std::vector<RankMethod> all_methods() {
  return {RankSum{}, ReciprocalRank{}, RankExponent{}, DiscountedCumulativeGain{}, DNLog{}};
}

double dnlog_weight(int n, int k, double d) {
  if (n == 1) return d;
  return std::pow(10.0, (n - k) * std::log10(d) / (n - 1));
}

double method_weight(const RankMethod& method, int n, int k) {
  if (n < 1 || k < 1 || k > n) {
    throw validation_error("rank_out_of_range",
                           "rank " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  check_method(method);
  return std::visit(Overloaded{
                        [&](const RankSum&) { return static_cast<double>(n - k + 1); },
                        [&](const ReciprocalRank&) { return 1.0 / k; },
                        [&](const RankExponent& m) { return std::pow(static_cast<double>(n - k + 1), m.p); },
                        [&](const DiscountedCumulativeGain&) { return 1.0 / std::log2(k + 1.0); },
                        [&](const DNLog& m) { return dnlog_weight(n, k, m.d); },
                    },
                    method);
}

std::vector<double> weight_sequence(const RankMethod& method, int n) {
  std::vector<double> weights;
  weights.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int k = 1; k <= n; ++k) weights.push_back(method_weight(method, n, k));
  return weights;
}

double weighted_mean_rank(std::span<const double> placements, std::span<const double> weights) {
  if (placements.size() != weights.size()) {
    throw validation_error("length_mismatch", "placements and weights differ in length (" +
                                                  std::to_string(placements.size()) + " vs " +
                                                  std::to_string(weights.size()) + ")");
  }
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    numerator += weights[k] * placements[k];
    denominator += weights[k];
  }
  return numerator / denominator;
}

std::vector<RankedItem> rank_items(const SurveyDataset& dataset, const RankMethod& method) {
  std::vector<RankedItem> ranked;
  if (dataset.items.empty()) return ranked;
  const std::vector<double> weights = weight_sequence(method, dataset.ranks);
  ranked.reserve(dataset.items.size());
  for (std::size_t i = 0; i < dataset.items.size(); ++i) {
    ranked.push_back({dataset.items[i], weighted_mean_rank(dataset.placements[i], weights)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedItem& a, const RankedItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item < b.item;
  });
  return ranked;
}

std::string to_string(Growth growth) {
  switch (growth) {
    case Growth::LinearLike: return "linear-like";
    case Growth::Polynomial: return "polynomial";
    case Growth::Exponential: return "exponential";
  }
  return "polynomial";
}

Growth classify_growth(std::span<const double> weights) {
  bool constant_difference = true;
  bool constant_ratio = true;
  for (std::size_t k = 2; k < weights.size(); ++k) {
    if (!nearly_equal(weights[k - 2] - weights[k - 1], weights[k - 1] - weights[k])) constant_difference = false;
    if (!nearly_equal(weights[k - 2] / weights[k - 1], weights[k - 1] / weights[k])) constant_ratio = false;
  }
  if (constant_difference) return Growth::LinearLike;
  if (constant_ratio) return Growth::Exponential;
  return Growth::Polynomial;
}

Growth method_growth(const RankMethod& method, int n) {
  const std::vector<double> weights = weight_sequence(method, std::max(n, 3));
  return classify_growth(weights);
}

std::vector<MethodComparison> compare_methods(const SurveyDataset& dataset) {
  std::vector<MethodComparison> rows;
  for (const RankMethod& method : all_methods()) {
    MethodComparison row;
    row.method = method_name(method);
    row.weights = weight_sequence(method, dataset.ranks);
    row.growth = method_growth(method, dataset.ranks);
    row.ranking = rank_items(dataset, method);
    rows.push_back(std::move(row));
  }
  return rows;
}

ValidationReport validate_dataset(const SurveyDataset& dataset) {
  ValidationReport report;
  if (dataset.ranks < 1) report.error("ranks", "number of ranks must be at least 1");
  if (dataset.respondent_count < 1) report.error("respondents", "respondent count must be positive");
  if (dataset.placements.size() != dataset.items.size()) {
    report.error("shape", "one placement row per item required");
    return report;
  }
  for (std::size_t i = 0; i < dataset.items.size(); ++i) {
    const auto& row = dataset.placements[i];
    const std::string where = "item " + dataset.items[i];
    if (static_cast<int>(row.size()) != dataset.ranks) {
      report.error("shape", "expected " + std::to_string(dataset.ranks) + " placements", where);
      continue;
    }
    if (std::any_of(row.begin(), row.end(), [](double p) { return !(p >= 0.0) || p > 1.0; })) {
      report.error("placement_range", "placements must lie in [0, 1]", where);
    }
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "placements sum to " << sum << ", expected 1";
      report.error("placement_sum", msg.str(), where);
    }
  }
  return report;
}

SurveyDataset parse_survey_csv(std::istream& in, const std::string& source) {
  SurveyDataset dataset;
  std::map<std::string, std::size_t> index;
  std::map<std::pair<std::size_t, int>, double> cells;
  bool header_seen = false;
  bool respondents_seen = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    const std::string text = detail::trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      const std::string body = detail::trim(text.substr(1));
      const auto colon = body.find(':');
      if (colon != std::string::npos && detail::lower(detail::trim(body.substr(0, colon))) == "respondents") {
        const auto count = detail::parse_int(detail::trim(body.substr(colon + 1)));
        if (!count) throw input_error("survey_format", "respondent count is not an integer", where);
        dataset.respondent_count = *count;
        respondents_seen = true;
      }
      continue;
    }
    const std::vector<std::string> fields = detail::split(text, ',');
    if (!header_seen) {
      if (fields.size() != 3 || detail::lower(detail::trim(fields[0])) != "item" ||
          detail::lower(detail::trim(fields[1])) != "rank" || detail::lower(detail::trim(fields[2])) != "fraction") {
        throw input_error("survey_format", "expected header 'item,rank,fraction'", where);
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) throw input_error("survey_format", "expected 3 fields", where);
    const std::string item = detail::trim(fields[0]);
    const auto rank = detail::parse_int(detail::trim(fields[1]));
    const auto fraction = detail::parse_double(detail::trim(fields[2]));
    if (item.empty()) throw input_error("survey_format", "empty item id", where);
    if (!rank || *rank < 1) throw input_error("survey_format", "rank must be a positive integer", where);
    if (!fraction) throw input_error("survey_format", "fraction is not a number", where);
    auto [it, inserted] = index.emplace(item, dataset.items.size());
    if (inserted) dataset.items.push_back(item);
    if (!cells.emplace(std::make_pair(it->second, *rank), *fraction).second) {
      throw input_error("survey_format", "duplicate row for item '" + item + "' rank " + std::to_string(*rank), where);
    }
    dataset.ranks = std::max(dataset.ranks, *rank);
  }
  if (!header_seen) throw input_error("survey_format", "missing header 'item,rank,fraction'", source);
  if (!respondents_seen) throw input_error("survey_format", "missing '# respondents: N' line", source);
  dataset.placements.assign(dataset.items.size(), std::vector<double>(static_cast<std::size_t>(dataset.ranks), 0.0));
  for (const auto& [key, value] : cells) dataset.placements[key.first][static_cast<std::size_t>(key.second - 1)] = value;

  const ValidationReport report = validate_dataset(dataset);
  if (!report.ok()) {
    const Issue& first = report.issues.front();
    throw validation_error(first.code, first.message, source + (first.where.empty() ? "" : " " + first.where));
  }
  return dataset;
}

SurveyDataset load_survey_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw input_error("io", "cannot open survey file", path.string());
  return parse_survey_csv(in, path.string());
}

}  // namespace pmc::ranking
