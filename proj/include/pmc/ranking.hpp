#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pmc/validation.hpp"

namespace pmc::ranking {

/// Aggregated survey placements: `placements[i][k-1]` is the fraction of
/// respondents that put `items[i]` on rank k.
struct SurveyDataset {
  std::vector<std::string> items;
  int ranks = 0;
  std::vector<std::vector<double>> placements;
  int respondent_count = 0;
};

struct RankSum {};
struct ReciprocalRank {};
struct RankExponent {
  double p = 2.0;
};
struct DiscountedCumulativeGain {};
/// Distance normalized logarithm: rank 1 weighs `d`, rank n weighs 1, and
/// the ranks in between are spaced geometrically.
struct DNLog {
  double d = 10.0;
};

using RankMethod = std::variant<RankSum, ReciprocalRank, RankExponent, DiscountedCumulativeGain, DNLog>;

std::string method_name(const RankMethod& method);

/// Parses "rank-sum", "reciprocal-rank", "rank-exponent", "dcg", "dnlog".
/// Parameters come from `p` and `d`.
RankMethod parse_method(const std::string& name, double p = 2.0, double d = 10.0);

/// The five methods with their default parameters, in a fixed order.
std::vector<RankMethod> all_methods();

/// DNLog weight of rank k among n; n == 1 yields d.
double dnlog_weight(int n, int k, double d);

/// Weight of rank k (1-based) among n ranks. Throws on k outside [1, n] or
/// invalid method parameters.
double method_weight(const RankMethod& method, int n, int k);

/// w_1..w_n for a method.
std::vector<double> weight_sequence(const RankMethod& method, int n);

/// Weighted arithmetic mean of an item's placements.
double weighted_mean_rank(std::span<const double> placements, std::span<const double> weights);

struct RankedItem {
  std::string item;
  double score = 0.0;
};

/// Items ordered by descending score; ties fall back to the item id.
std::vector<RankedItem> rank_items(const SurveyDataset& dataset, const RankMethod& method);

enum class Growth { LinearLike, Polynomial, Exponential };
std::string to_string(Growth growth);

/// Classifies a non-increasing weight sequence by ratio tests: constant
/// differences are linear-like, constant ratios exponential, anything else
/// polynomial. Sequences shorter than three are extended by probing the
/// method at n = 3, see `method_growth`.
Growth classify_growth(std::span<const double> weights);
Growth method_growth(const RankMethod& method, int n);

struct MethodComparison {
  std::string method;
  std::vector<double> weights;
  Growth growth = Growth::Polynomial;
  std::vector<RankedItem> ranking;
};

std::vector<MethodComparison> compare_methods(const SurveyDataset& dataset);

ValidationReport validate_dataset(const SurveyDataset& dataset);

/// Reads the tabular survey format:
///
///     # respondents: 131
///     item,rank,fraction
///     information,1,0.42
///
/// Missing (item, rank) cells are zero. Throws `pmc::Error` on malformed
/// rows or when the dataset fails validation.
SurveyDataset parse_survey_csv(std::istream& in, const std::string& source = "<survey>");
SurveyDataset load_survey_csv(const std::filesystem::path& path);

}  // namespace pmc::ranking
