#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "pmc/error.hpp"
#include "pmc/ranking.hpp"

using namespace pmc::ranking;

namespace {

// Independent DNLog evaluation through exp/log rather than pow(10, ...).
double dnlog_oracle(int n, int k, double d) {
  if (n == 1) return d;
  return std::exp(std::log(d) * static_cast<double>(n - k) / static_cast<double>(n - 1));
}

SurveyDataset random_dataset(std::mt19937& rng, int max_ranks, int max_items) {
  std::uniform_int_distribution<int> ranks(1, max_ranks);
  std::uniform_int_distribution<int> items(0, max_items);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SurveyDataset data;
  data.ranks = ranks(rng);
  data.respondent_count = 50;
  const int count = items(rng);
  for (int i = 0; i < count; ++i) {
    data.items.push_back("item" + std::to_string(i));
    std::vector<double> row(static_cast<std::size_t>(data.ranks));
    for (double& p : row) p = unit(rng);
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    for (double& p : row) p /= sum;
    data.placements.push_back(row);
  }
  return data;
}

}  // namespace

TEST(DnlogWeight, EndpointsOfAFiveGroup) {
  EXPECT_DOUBLE_EQ(dnlog_weight(5, 1, 10.0), 10.0);
  EXPECT_DOUBLE_EQ(dnlog_weight(5, 5, 10.0), 1.0);
}

TEST(DnlogWeight, MiddleRankMatchesExpLogOracle) {
  EXPECT_NEAR(dnlog_weight(5, 3, 10.0), dnlog_oracle(5, 3, 10.0), 1e-12);
  EXPECT_NEAR(dnlog_weight(5, 3, 10.0), 3.1622776601683795, 1e-12);
}

TEST(DnlogWeight, TwoRanksWithDFour) {
  EXPECT_EQ(weight_sequence(DNLog{4.0}, 2), (std::vector<double>{4.0, 1.0}));
}

TEST(DnlogWeight, SingletonGetsD) { EXPECT_DOUBLE_EQ(dnlog_weight(1, 1, 7.0), 7.0); }

TEST(DnlogWeight, LastOfTenIsOne) { EXPECT_DOUBLE_EQ(method_weight(DNLog{10.0}, 10, 10), 1.0); }

TEST(DnlogWeight, RejectsDAtMostOne) {
  EXPECT_THROW(method_weight(DNLog{1.0}, 3, 1), pmc::Error);
  EXPECT_THROW(method_weight(DNLog{0.5}, 3, 1), pmc::Error);
}

TEST(DnlogWeight, EndpointAndGeometricSpacingForManyGroups) {
  for (double d : {1.5, 2.0, 4.0, 10.0, 100.0}) {
    for (int n = 2; n <= 15; ++n) {
      const auto w = weight_sequence(DNLog{d}, n);
      EXPECT_NEAR(w.front(), d, 1e-12 * d);
      EXPECT_NEAR(w.back(), 1.0, 1e-12);
      for (int k = 0; k + 2 < n; ++k) EXPECT_NEAR(w[k] / w[k + 1], w[k + 1] / w[k + 2], 1e-9);
      for (int k = 0; k < n; ++k) EXPECT_NEAR(w[k], dnlog_oracle(n, k + 1, d), 1e-12 * d);
    }
  }
}

TEST(MethodWeight, FixedFormulas) {
  EXPECT_DOUBLE_EQ(method_weight(RankSum{}, 5, 2), 4.0);
  EXPECT_DOUBLE_EQ(method_weight(ReciprocalRank{}, 5, 4), 0.25);
  EXPECT_DOUBLE_EQ(method_weight(RankExponent{}, 5, 2), 16.0);
  EXPECT_DOUBLE_EQ(method_weight(RankExponent{3.0}, 4, 1), 64.0);
  EXPECT_DOUBLE_EQ(method_weight(DiscountedCumulativeGain{}, 5, 1), 1.0);
  EXPECT_DOUBLE_EQ(method_weight(DiscountedCumulativeGain{}, 5, 3), 0.5);
}

TEST(MethodWeight, RankOutOfRange) {
  try {
    method_weight(RankSum{}, 5, 6);
    FAIL() << "expected an error";
  } catch (const pmc::Error& e) {
    EXPECT_EQ(e.code(), "rank_out_of_range");
  }
  EXPECT_THROW(method_weight(RankSum{}, 5, 0), pmc::Error);
  EXPECT_THROW(method_weight(RankExponent{0.0}, 5, 1), pmc::Error);
}

TEST(MethodWeight, EveryMethodPositiveAndNonIncreasing) {
  for (const auto& method : all_methods()) {
    for (int n = 1; n <= 12; ++n) {
      const auto w = weight_sequence(method, n);
      ASSERT_EQ(w.size(), static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) {
        EXPECT_GT(w[k], 0.0) << method_name(method);
        if (k > 0) EXPECT_LE(w[k], w[k - 1]) << method_name(method);
      }
    }
  }
}

TEST(ParseMethod, NamesAndParameters) {
  EXPECT_EQ(method_name(parse_method("dnlog")), "dnlog");
  EXPECT_DOUBLE_EQ(std::get<DNLog>(parse_method("dnlog", 2.0, 5.0)).d, 5.0);
  EXPECT_DOUBLE_EQ(std::get<RankExponent>(parse_method("rank-exponent", 3.0)).p, 3.0);
  EXPECT_TRUE(std::holds_alternative<DiscountedCumulativeGain>(parse_method("dcg")));
  EXPECT_THROW(parse_method("borda"), pmc::Error);
  EXPECT_THROW(parse_method("dnlog", 2.0, 1.0), pmc::Error);
}

TEST(WeightedMeanRank, HandArithmetic) {
  const std::vector<double> p = {0.5, 0.3, 0.2};
  const std::vector<double> w = {9.0, 3.0, 1.0};
  EXPECT_NEAR(weighted_mean_rank(p, w), 5.6 / 13.0, 1e-15);
  EXPECT_NEAR(weighted_mean_rank(p, w), 0.430769230769, 1e-12);
}

TEST(WeightedMeanRank, UniformPlacementsIgnoreWeights) {
  const std::vector<double> p(4, 0.25);
  EXPECT_NEAR(weighted_mean_rank(p, std::vector<double>{10, 4, 2, 1}), 0.25, 1e-15);
  EXPECT_NEAR(weighted_mean_rank(p, std::vector<double>{1, 1, 1, 1}), 0.25, 1e-15);
}

TEST(WeightedMeanRank, AllFirstPlacementsGiveFirstWeightShare) {
  const std::vector<double> p = {1.0, 0.0, 0.0};
  const std::vector<double> w = {5.0, 2.0, 1.0};
  EXPECT_NEAR(weighted_mean_rank(p, w), 5.0 / 8.0, 1e-15);
}

TEST(WeightedMeanRank, LengthMismatch) {
  EXPECT_THROW(weighted_mean_rank(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}), pmc::Error);
}

TEST(WeightedMeanRank, ScaleInvariance) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 8;
    std::vector<double> p(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n)), scaled(static_cast<std::size_t>(n));
    const double c = unit(rng) * 50.0;
    for (int k = 0; k < n; ++k) {
      p[k] = unit(rng);
      w[k] = unit(rng);
      scaled[k] = w[k] * c;
    }
    EXPECT_NEAR(weighted_mean_rank(p, w), weighted_mean_rank(p, scaled), 1e-12);
  }
}

TEST(RankItems, DominantItemFirstUnderEveryMethod) {
  SurveyDataset data{{"b_second", "a_first"}, 2, {{0.0, 1.0}, {1.0, 0.0}}, 10};
  for (const auto& method : all_methods()) {
    const auto ranked = rank_items(data, method);
    ASSERT_EQ(ranked.size(), 2u);
    EXPECT_EQ(ranked[0].item, "a_first") << method_name(method);
  }
}

TEST(RankItems, EmptyDataset) {
  SurveyDataset data{{}, 3, {}, 1};
  EXPECT_TRUE(rank_items(data, DNLog{}).empty());
}

TEST(RankItems, TiesBreakById) {
  SurveyDataset data{{"zeta", "alpha", "mid"}, 2, {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}, 4};
  const auto ranked = rank_items(data, RankSum{});
  EXPECT_EQ(ranked[0].item, "alpha");
  EXPECT_EQ(ranked[1].item, "mid");
  EXPECT_EQ(ranked[2].item, "zeta");
}

TEST(RankItems, ThreeItemHandComputation) {
  // DNLog, d = 10, n = 3: weights (10, sqrt 10, 1), sum 14.16227766.
  SurveyDataset data{{"x", "y", "z"}, 3, {{0.2, 0.3, 0.5}, {0.6, 0.1, 0.3}, {0.2, 0.6, 0.2}}, 10};
  const double r10 = std::sqrt(10.0);
  const double sum = 11.0 + r10;
  const double x = (2.0 + 0.3 * r10 + 0.5) / sum;
  const double y = (6.0 + 0.1 * r10 + 0.3) / sum;
  const double z = (2.0 + 0.6 * r10 + 0.2) / sum;
  const auto ranked = rank_items(data, DNLog{});
  ASSERT_EQ(ranked.size(), 3u);
  EXPECT_EQ(ranked[0].item, "y");
  EXPECT_EQ(ranked[1].item, "z");
  EXPECT_EQ(ranked[2].item, "x");
  EXPECT_NEAR(ranked[0].score, y, 1e-12);
  EXPECT_NEAR(ranked[1].score, z, 1e-12);
  EXPECT_NEAR(ranked[2].score, x, 1e-12);
}

TEST(RankItems, MatchesBruteForceOnRandomDatasets) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const SurveyDataset data = random_dataset(rng, 6, 8);
    const auto ranked = rank_items(data, DNLog{});
    std::vector<std::pair<double, std::string>> expected;
    for (std::size_t i = 0; i < data.items.size(); ++i) {
      double num = 0.0;
      double den = 0.0;
      for (int k = 1; k <= data.ranks; ++k) {
        const double w = dnlog_oracle(data.ranks, k, 10.0);
        num += w * data.placements[i][k - 1];
        den += w;
      }
      expected.emplace_back(num / den, data.items[i]);
    }
    std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    ASSERT_EQ(ranked.size(), expected.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      EXPECT_EQ(ranked[i].item, expected[i].second);
      EXPECT_NEAR(ranked[i].score, expected[i].first, 1e-9);
    }
  }
}

TEST(Growth, Classification) {
  EXPECT_EQ(method_growth(DNLog{}, 5), Growth::Exponential);
  EXPECT_EQ(method_growth(RankSum{}, 5), Growth::LinearLike);
  EXPECT_EQ(method_growth(RankExponent{}, 5), Growth::Polynomial);
  EXPECT_EQ(method_growth(DiscountedCumulativeGain{}, 5), Growth::Polynomial);
  // Observed shape of 1/k, whatever label other sources give it.
  EXPECT_EQ(method_growth(ReciprocalRank{}, 5), Growth::Polynomial);
  EXPECT_EQ(classify_growth(std::vector<double>{8, 4, 2, 1}), Growth::Exponential);
  EXPECT_EQ(classify_growth(std::vector<double>{7, 5, 3, 1}), Growth::LinearLike);
}

TEST(Growth, ShortGroupsProbeAtThree) {
  EXPECT_EQ(method_growth(DNLog{}, 2), Growth::Exponential);
  EXPECT_EQ(method_growth(RankSum{}, 1), Growth::LinearLike);
}

TEST(CompareMethods, OneRowPerMethodWithSameItems) {
  SurveyDataset data{{"a", "b", "c"}, 3, {{0.2, 0.3, 0.5}, {0.6, 0.1, 0.3}, {0.2, 0.6, 0.2}}, 10};
  const auto rows = compare_methods(data);
  ASSERT_EQ(rows.size(), 5u);
  std::map<std::string, const MethodComparison*> by_name;
  for (const auto& r : rows) by_name[r.method] = &r;
  ASSERT_TRUE(by_name.count("dnlog") && by_name.count("rank-sum"));
  EXPECT_EQ(by_name["dnlog"]->growth, Growth::Exponential);
  EXPECT_EQ(by_name["rank-sum"]->growth, Growth::LinearLike);
  auto items = [](const MethodComparison& m) {
    std::set<std::string> s;
    for (const auto& r : m.ranking) s.insert(r.item);
    return s;
  };
  EXPECT_EQ(items(*by_name["dnlog"]), items(*by_name["rank-sum"]));
  EXPECT_EQ(items(*by_name["dnlog"]).size(), 3u);
}

TEST(SurveyCsv, LoadsFixture) {
  const SurveyDataset data = load_survey_csv(PMC_FIXTURE_DIR "/survey.csv");
  EXPECT_EQ(data.items.size(), 6u);
  EXPECT_EQ(data.ranks, 6);
  EXPECT_EQ(data.respondent_count, 131);
  EXPECT_TRUE(validate_dataset(data).ok());
}

TEST(SurveyCsv, MissingCellsAreZero) {
  std::istringstream in("# respondents: 3\nitem,rank,fraction\na,1,1.0\nb,2,1.0\n");
  const SurveyDataset data = parse_survey_csv(in);
  ASSERT_EQ(data.items.size(), 2u);
  EXPECT_EQ(data.ranks, 2);
  EXPECT_DOUBLE_EQ(data.placements[0][1], 0.0);
  EXPECT_DOUBLE_EQ(data.placements[1][0], 0.0);
}

TEST(SurveyCsv, Errors) {
  auto code_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_survey_csv(in);
    } catch (const pmc::Error& e) {
      return e.code();
    }
    return std::string("none");
  };
  EXPECT_EQ(code_of("item,rank,fraction\na,1,1\n"), "survey_format");
  EXPECT_EQ(code_of("# respondents: 3\na,1,1\n"), "survey_format");
  EXPECT_EQ(code_of("# respondents: 3\nitem,rank,fraction\na,1,x\n"), "survey_format");
  EXPECT_EQ(code_of("# respondents: 3\nitem,rank,fraction\na,0,1\n"), "survey_format");
  EXPECT_EQ(code_of("# respondents: 3\nitem,rank,fraction\na,1,0.5\na,1,0.5\n"), "survey_format");
  EXPECT_EQ(code_of("# respondents: 3\nitem,rank,fraction\na,1,0.5\na,2,0.4\n"), "placement_sum");
}

TEST(ValidateDataset, FlagsNegativeFractions) {
  SurveyDataset data{{"a"}, 2, {{1.5, -0.5}}, 3};
  EXPECT_FALSE(validate_dataset(data).ok());
}
