//------------------------------------------------------------------------------
//
//   Copyright 2026 The anplane Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------
#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "anplane/curve_sweep.hpp"
#include "generators.hpp"

namespace anplane {
namespace {

CandidateRecord cand(std::string text, std::string sys, double acc, double nll_per_token, int tokens)
{
  return {std::move(text), std::move(sys), acc, -nll_per_token * tokens, tokens};
}

SegmentRecord two_candidates(std::string id = "s")
{
  SegmentRecord s;
  s.segment_id = std::move(id);
  s.candidates = {cand("first", "a", 0.8, 3.0, 4), cand("second", "b", 0.6, 1.0, 5)};
  return s;
}

TEST(BetaGrid, Parse)
{
  auto g = parse_beta_grid("1e-2:1e2:log5");
  ASSERT_EQ(g.size(), 5u);
  EXPECT_NEAR(g[0], 1e-2, 1e-17);
  EXPECT_NEAR(g[2], 1.0, 1e-15);
  EXPECT_NEAR(g[4], 1e2, 1e-12);
  auto l = parse_beta_grid("0:1:lin3");
  EXPECT_EQ(l, (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(parse_beta_grid("0,0.5,2"), (std::vector<double>{0.0, 0.5, 2.0}));
  EXPECT_THROW(parse_beta_grid("1:2:cubic4"), InvalidArgument);
  EXPECT_THROW(parse_beta_grid("0:2:log4"), InvalidArgument);
  EXPECT_THROW(parse_beta_grid("-1,2"), InvalidArgument);
  EXPECT_THROW(parse_beta_grid(""), InvalidArgument);
}

TEST(BetaGrid, Default)
{
  auto g = default_beta_grid();
  ASSERT_EQ(g.size(), 50u);
  EXPECT_NEAR(g.front(), 1e-4, 1e-19);
  EXPECT_NEAR(g.back(), 1e4, 1e-10);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
}

TEST(PairwiseSum, ExactOnSmallAndCompensatesLarge)
{
  std::vector<double> v{1.0, 2.0, 3.5};
  EXPECT_EQ(pairwise_sum(v), 6.5);
  std::vector<double> many(1 << 20, 0.1);
  EXPECT_NEAR(pairwise_sum(many), 0.1 * (1 << 20), 1e-6);
  EXPECT_EQ(pairwise_sum(std::span<const double>{}), 0.0);
}

TEST(OracleSelect, HandDerivedSwitch)
{
  auto s = two_candidates();
  EXPECT_EQ(oracle_select(s, 0.05).text, "first");
  EXPECT_EQ(oracle_select(s, 0.2).text, "second");
  EXPECT_EQ(oracle_select(s, 0.0).text, "first");
  EXPECT_EQ(oracle_select(s, 1e9).text, "second");
  EXPECT_THROW(oracle_select(s, -0.1), InvalidArgument);
  SegmentRecord empty;
  EXPECT_THROW(oracle_select(empty, 1.0), DataError);
}

TEST(SweepCurve, SingleCandidateIsFlat)
{
  SegmentRecord s;
  s.segment_id = "s";
  s.candidates = {cand("only", "a", 0.7, 2.5, 2)};
  std::vector<SegmentRecord> segs{s};
  auto res = sweep_curve(segs, default_beta_grid());
  for (auto const &p : res.points)
  {
    EXPECT_EQ(p.accuracy, 0.7);
    EXPECT_EQ(p.mean_nll, 2.5);
  }
}

TEST(SweepCurve, TwoSegmentsTwoDistinctPoints)
{
  std::vector<SegmentRecord> segs{two_candidates("s1"), two_candidates("s2")};
  auto res = sweep_curve(segs, default_beta_grid());
  std::set<std::pair<double, double>> distinct;
  for (auto const &p : res.points)
  {
    distinct.insert({p.accuracy, p.mean_nll});
    // the switch is at β = 0.1 where 0.8 - 3β = 0.6 - β
    if (p.beta < 0.1)
    {
      EXPECT_DOUBLE_EQ(p.accuracy, 0.8);
    }
    else
    {
      EXPECT_DOUBLE_EQ(p.accuracy, 0.6);
    }
  }
  EXPECT_EQ(distinct.size(), 2u);
  EXPECT_EQ(res.n_segments, 2u);
  EXPECT_EQ(res.selected.size(), 50u);
  EXPECT_THROW(sweep_curve(std::span<const SegmentRecord>{}, default_beta_grid()), DataError);
}

TEST(SweepCurve, MonotoneProperty)
{
  testing::for_all(
      21, 100,
      [](testing::Rng &rng) {
        return testing::random_pool(rng, static_cast<std::size_t>(testing::uniform_int(rng, 1, 20)),
                                    static_cast<std::size_t>(testing::uniform_int(rng, 1, 8)));
      },
      [](std::vector<SegmentRecord> const &segs) -> ::testing::AssertionResult {
        auto res = sweep_curve(segs, default_beta_grid());
        for (std::size_t i = 0; i + 1 < res.points.size(); ++i)
        {
          if (res.points[i + 1].mean_nll > res.points[i].mean_nll + 1e-12 ||
              res.points[i + 1].accuracy > res.points[i].accuracy + 1e-12)
          {
            return ::testing::AssertionFailure() << "increase at beta index " << i;
          }
        }
        return ::testing::AssertionSuccess();
      });
}

TEST(SweepCurve, SelectionsAreArgmax)
{
  testing::Rng rng(22);
  auto segs  = testing::random_pool(rng, 10, 6);
  auto betas = log_grid(1e-2, 1e2, 9);
  auto res   = sweep_curve(segs, betas);
  for (std::size_t b = 0; b < betas.size(); ++b)
  {
    for (std::size_t s = 0; s < segs.size(); ++s)
    {
      auto const &chosen = segs[s].candidates[res.selected[b][s]];
      for (auto const &c : segs[s].candidates)
      {
        EXPECT_GE(chosen.accuracy - betas[b] * chosen.nll_per_token(),
                  c.accuracy - betas[b] * c.nll_per_token() - 1e-15);
      }
    }
  }
}

TEST(SystemPoints, SingleCandidate)
{
  SegmentRecord s;
  s.segment_id = "s";
  s.candidates = {cand("x", "sys", 0.7, 2.5, 2)};
  std::vector<SegmentRecord> segs{s};
  auto pts = system_points(segs, {2.0, 10});
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].mean_accuracy, 0.7);
  EXPECT_EQ(pts[0].mean_lpp, 2.5);
  EXPECT_EQ(pts[0].lpp_distance_to_ref, 0.5);
  std::vector<std::string> unknown{"nope"};
  EXPECT_THROW(system_points(segs, {2.0, 10}, unknown), DataError);
}

TEST(SystemPoints, PoolOnlyCandidatesSkippedAndCoverageCounted)
{
  auto segs = load_segments(ANPLANE_FIXTURE_DIR "/segments_small.jsonl");
  auto pts  = system_points(segs, {1.8, 500});
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0].system_id, "llm-a");
  for (auto const &p : pts)
  {
    EXPECT_EQ(p.n_segments + p.n_excluded, segs.size());
  }
}

TEST(SystemPoints, CoincidesWithCurvePointWhenIdentical)
{
  // system "b" always carries the β = 1e9 selection
  std::vector<SegmentRecord> segs{two_candidates("s1"), two_candidates("s2")};
  std::vector<double> betas{1e9};
  auto res = sweep_curve(segs, betas);
  auto pts = system_points(segs, {1.0, 1}, std::vector<std::string>{"b"});
  EXPECT_DOUBLE_EQ(pts[0].mean_accuracy, res.points[0].accuracy);
  EXPECT_DOUBLE_EQ(pts[0].mean_lpp, res.points[0].mean_nll);
}

TEST(Dominance, PoolMembersNeverViolate)
{
  testing::Rng rng(31);
  for (int t = 0; t < 20; ++t)
  {
    auto segs = testing::random_pool(rng, 12, 5);
    auto res  = sweep_curve(segs, default_beta_grid());
    auto pts  = system_points(segs, {2.0, 100});
    auto rep  = dominance_check(res, pts);
    EXPECT_EQ(rep.violations, 0u);
    for (auto const &e : rep.entries)
    {
      EXPECT_LE(e.certificate_margin, 1e-12);
    }
  }
}

TEST(Dominance, SuperSystemFlagged)
{
  testing::Rng rng(32);
  auto segs = testing::random_pool(rng, 12, 4);
  auto res  = sweep_curve(segs, default_beta_grid());
  SystemPoint super;
  super.system_id     = "super";
  super.mean_accuracy = 2.0;
  super.mean_lpp      = 0.1;
  std::vector<SystemPoint> sys{super};
  auto rep = dominance_check(res, sys);
  ASSERT_EQ(rep.violations, 1u);
  EXPECT_GT(rep.entries[0].certificate_margin, 0.5);
  EXPECT_EQ(dominance_check(res, std::span<const SystemPoint>{}).entries.size(), 0u);
}

TEST(Dominance, ChordMarginInsideRange)
{
  std::vector<SegmentRecord> segs{two_candidates("s1")};
  auto res = sweep_curve(segs, default_beta_grid());
  SystemPoint mid;
  mid.system_id     = "mid";
  mid.mean_accuracy = 0.69;
  mid.mean_lpp      = 2.0;
  std::vector<SystemPoint> sys{mid};
  auto rep = dominance_check(res, sys);
  ASSERT_TRUE(rep.entries[0].chord_margin.has_value());
  EXPECT_NEAR(*rep.entries[0].chord_margin, -0.01, 1e-12);
  EXPECT_FALSE(rep.entries[0].violation);
}

}  // namespace
}  // namespace anplane
