#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

#include "oracles.hpp"
#include "support.hpp"
#include "xdalign/aligner.hpp"

using namespace xdalign;
using testing_support::matrix;

namespace {

using Triple = std::tuple<std::string, std::string, double>;

std::set<Triple> triples(const PairSet& p) {
  std::set<Triple> out;
  for (const auto& d : p.pairs) out.insert({d.src_id, d.tgt_id, d.score});
  return out;
}

oracle::CellSet cells(const SimilarityMatrix& m, double theta, Strategy s) {
  oracle::CellSet out;
  for (const auto& c : align_cells(m, theta, s)) out.insert({c.row, c.col});
  return out;
}

oracle::CellSet oracle_for(Strategy s, const oracle::Matrix& scores, double theta) {
  switch (s) {
    case Strategy::AboveThreshold:
      return oracle::above_threshold(scores, theta);
    case Strategy::BestTarget:
      return oracle::best_target(scores, theta);
    case Strategy::BestSource:
      return oracle::best_source(scores, theta);
    case Strategy::Union:
      return oracle::union_of(scores, theta);
    case Strategy::Intersection:
      return oracle::intersection(scores, theta);
  }
  return {};
}

}  // namespace

TEST(Align, AboveThresholdReferenceCase) {
  const auto p = align(matrix({{50, 40}, {47, 48}}), 46, Strategy::AboveThreshold);
  EXPECT_EQ(triples(p), (std::set<Triple>{{"d1", "f1", 50}, {"d2", "f1", 47}, {"d2", "f2", 48}}));
}

TEST(Align, IntersectionReferenceCase) {
  const auto p = align(matrix({{50, 40}, {47, 48}}), 46, Strategy::Intersection);
  EXPECT_EQ(triples(p), (std::set<Triple>{{"d1", "f1", 50}, {"d2", "f2", 48}}));
}

TEST(Align, AsymmetricReferenceCase) {
  const auto m = matrix({{50, 49}, {48, 20}});
  EXPECT_EQ(triples(align(m, 46, Strategy::BestTarget)), (std::set<Triple>{{"d1", "f1", 50}, {"d1", "f2", 49}}));
  EXPECT_EQ(triples(align(m, 46, Strategy::BestSource)), (std::set<Triple>{{"d1", "f1", 50}, {"d2", "f1", 48}}));
  EXPECT_EQ(triples(align(m, 46, Strategy::Union)),
            (std::set<Triple>{{"d1", "f1", 50}, {"d1", "f2", 49}, {"d2", "f1", 48}}));
  EXPECT_EQ(triples(align(m, 46, Strategy::Intersection)), (std::set<Triple>{{"d1", "f1", 50}}));
}

TEST(Align, EverythingBelowThresholdIsEmpty) {
  const auto m = matrix({{10, 20}, {30, 45.5}});
  for (auto s : kAllStrategies) EXPECT_TRUE(align(m, 46, s).pairs.empty()) << to_string(s);
}

TEST(Align, SingletonIntersection) {
  EXPECT_EQ(triples(align(matrix({{90}}), 46, Strategy::Intersection)), (std::set<Triple>{{"d1", "f1", 90}}));
}

TEST(Align, ThresholdIsInclusive) {
  for (auto s : kAllStrategies) EXPECT_EQ(align(matrix({{46}}), 46, s).pairs.size(), 1u) << to_string(s);
}

TEST(Align, TiesGoToLowestIndex) {
  const auto m = matrix({{70, 70}, {70, 70}});
  EXPECT_EQ(cells(m, 0, Strategy::BestSource), (oracle::CellSet{{0, 0}, {1, 0}}));
  EXPECT_EQ(cells(m, 0, Strategy::BestTarget), (oracle::CellSet{{0, 0}, {0, 1}}));
  EXPECT_EQ(cells(m, 0, Strategy::Intersection), (oracle::CellSet{{0, 0}}));
}

TEST(Align, CarriesDateStrategyAndThreshold) {
  const auto p = align(matrix({{90}}, "2021-11-13"), 12.5, Strategy::Union);
  EXPECT_EQ(p.strategy, Strategy::Union);
  EXPECT_EQ(p.threshold, 12.5);
  EXPECT_EQ(p.pairs.at(0).date, "2021-11-13");
}

TEST(Align, RejectsThresholdOutsideRange) {
  EXPECT_THROW(align(matrix({{1}}), -0.5, Strategy::Union), std::invalid_argument);
  EXPECT_THROW(align(matrix({{1}}), 100.5, Strategy::Union), std::invalid_argument);
}

TEST(Align, EmptySideGivesNoPairs) {
  const auto m = SimilarityMatrix::from_rows({}, {"f1"}, {});
  for (auto s : kAllStrategies) EXPECT_TRUE(align(m, 0, s).pairs.empty());
}

TEST(Align, StrategyNames) {
  for (auto s : kAllStrategies) EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_EQ(parse_strategy("best-tgt"), Strategy::BestTarget);
  EXPECT_EQ(parse_strategy("best-src"), Strategy::BestSource);
  EXPECT_THROW(parse_strategy("hungarian"), std::invalid_argument);
}

TEST(AlignProperty, MatchesNaiveOracles) {
  std::mt19937_64 rng(101);
  for (int round = 0; round < 300; ++round) {
    const auto scores = testing_support::random_scores(rng);
    const auto m = matrix(scores);
    for (double theta : {0.0, 23.0, 46.0, 80.0})
      for (auto s : kAllStrategies) ASSERT_EQ(cells(m, theta, s), oracle_for(s, scores, theta)) << to_string(s);
  }
}

TEST(AlignProperty, SetAlgebraAndCardinality) {
  std::mt19937_64 rng(202);
  for (int round = 0; round < 300; ++round) {
    const auto m = matrix(testing_support::random_scores(rng));
    const double theta = (round % 5) * 20.0;
    const auto above = cells(m, theta, Strategy::AboveThreshold);
    const auto bt = cells(m, theta, Strategy::BestTarget);
    const auto bs = cells(m, theta, Strategy::BestSource);
    const auto uni = cells(m, theta, Strategy::Union);
    const auto inter = cells(m, theta, Strategy::Intersection);
    oracle::CellSet expect_union = bs, expect_inter;
    expect_union.insert(bt.begin(), bt.end());
    for (const auto& c : bs)
      if (bt.count(c)) expect_inter.insert(c);
    EXPECT_EQ(uni, expect_union);
    EXPECT_EQ(inter, expect_inter);
    for (const auto* set : {&bt, &bs, &uni, &inter})
      for (const auto& c : *set) EXPECT_TRUE(above.count(c));
    std::set<std::size_t> rows, cols, bt_cols, bs_rows;
    for (const auto& [r, c] : inter) {
      EXPECT_TRUE(rows.insert(r).second);
      EXPECT_TRUE(cols.insert(c).second);
    }
    for (const auto& c : bt) EXPECT_TRUE(bt_cols.insert(c.second).second);
    for (const auto& c : bs) EXPECT_TRUE(bs_rows.insert(c.first).second);
  }
}

TEST(AlignProperty, RaisingThresholdOnlyRemovesPairs) {
  std::mt19937_64 rng(303);
  for (int round = 0; round < 200; ++round) {
    const auto m = matrix(testing_support::random_scores(rng));
    for (auto s : kAllStrategies) {
      const auto low = cells(m, 30, s), high = cells(m, 60, s);
      for (const auto& c : high) EXPECT_TRUE(low.count(c));
    }
  }
}

TEST(AlignProperty, OutputIsSortedByPosition) {
  std::mt19937_64 rng(404);
  for (int round = 0; round < 100; ++round) {
    const auto m = matrix(testing_support::random_scores(rng));
    for (auto s : kAllStrategies) {
      const auto c = align_cells(m, 10, s);
      EXPECT_TRUE(std::is_sorted(c.begin(), c.end(), [](const Cell& a, const Cell& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
      }));
    }
  }
}
