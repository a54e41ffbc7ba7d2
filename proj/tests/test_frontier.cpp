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
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "anplane/curve_sweep.hpp"
#include "anplane/frontier.hpp"
#include "generators.hpp"

namespace anplane {
namespace {

JointInstance uniform_2x2()
{
  return JointInstance({"a", "b"}, {"u", "v"}, {{0.25, 0.25}, {0.25, 0.25}});
}

// Best accuracy with no naturalness term: each row puts its mass on the
// candidate minimising the conditional expected distortion.
double per_row_optimum(JointInstance const &inst, DistortionTable const &delta)
{
  double total = 0.0;
  for (std::size_t x = 0; x < inst.nx(); ++x)
  {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t yc = 0; yc < inst.ny(); ++yc)
    {
      double e = 0.0;
      for (std::size_t yr = 0; yr < inst.ny(); ++yr)
      {
        e += inst(x, yr) * delta(x, yr, yc);
      }
      best = std::min(best, e);
    }
    total += best;
  }
  return -total;
}

// Every system whose rows lie on the grid, evaluated directly.
template <typename F>
void for_each_grid_system(JointInstance const &inst, std::size_t res, F &&f)
{
  auto const rows = simplex_grid(inst.ny(), res);
  std::vector<std::size_t> idx(inst.nx(), 0);
  while (true)
  {
    std::vector<std::vector<double>> q;
    for (auto i : idx)
    {
      q.push_back(rows[i]);
    }
    f(ConditionalSystem(testing::labels('x', inst.nx()), testing::labels('y', inst.ny()), q));
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == rows.size())
    {
      idx[k++] = 0;
    }
    if (k == idx.size())
    {
      return;
    }
  }
}

TEST(SystemAccuracy, Examples)
{
  auto inst = uniform_2x2();
  auto half = ConditionalSystem({"a", "b"}, {"u", "v"}, {{0.5, 0.5}, {0.5, 0.5}});
  EXPECT_EQ(system_accuracy(half, inst, DistortionTable::zeros(2, 2)), 0.0);
  EXPECT_DOUBLE_EQ(system_accuracy(half, inst, DistortionTable::exact_match(2, 2)), -0.5);
  JointInstance noiseless({"a", "b"}, {"u", "v"}, {{0.4, 0.0}, {0.0, 0.6}});
  auto copy = ConditionalSystem({"a", "b"}, {"u", "v"}, {{1.0, 0.0}, {0.0, 1.0}});
  EXPECT_EQ(system_accuracy(copy, noiseless, DistortionTable::exact_match(2, 2)), 0.0);
  EXPECT_THROW(system_accuracy(copy, noiseless, DistortionTable::zeros(3, 2)), InvalidArgument);
}

TEST(SystemMarginal, Examples)
{
  auto r   = std::vector<double>{0.2, 0.8};
  auto j   = uniform_2x2();
  auto sys = ConditionalSystem::constant_rows(j, r);
  auto m   = system_marginal(sys, j.marginal_x());
  EXPECT_NEAR(m[0], 0.2, 1e-15);
  auto split = ConditionalSystem({"a", "b"}, {"u", "v"}, {{1.0, 0.0}, {0.0, 1.0}});
  auto point = FiniteDistribution({"a", "b"}, {1.0, 0.0});
  EXPECT_EQ(system_marginal(split, point)[0], 1.0);
  auto uni = FiniteDistribution({"a", "b"}, {0.5, 0.5});
  EXPECT_EQ(system_marginal(split, uni)[1], 0.5);
}

TEST(ConditionalEntropy, Examples)
{
  JointInstance det({"a", "b"}, {"u", "v"}, {{0.4, 0.0}, {0.0, 0.6}});
  EXPECT_EQ(conditional_entropy(det), 0.0);
  EXPECT_NEAR(conditional_entropy(uniform_2x2()), std::numbers::ln2, 1e-15);
  JointInstance skew({"a", "b"}, {"u", "v"}, {{0.375, 0.125}, {0.375, 0.125}});
  EXPECT_NEAR(conditional_entropy(skew), 0.75 * std::log(4.0 / 3.0) + 0.25 * std::log(4.0), 1e-15);
}

TEST(Scalarization, ZeroBetaIsUnconstrainedOptimum)
{
  testing::Rng rng(5);
  for (int t = 0; t < 20; ++t)
  {
    auto inst  = testing::random_joint(rng, 3, 3);
    auto delta = testing::random_delta(rng, 3, 3);
    auto r     = testing::random_distribution(rng, 3);
    std::vector<double> betas{0.0};
    double const want = per_row_optimum(inst, delta);
    for (auto div : {FrontierDivergence::tv(), FrontierDivergence::kl()})
    {
      auto fr = scalarization_frontier(inst, delta, r, div, betas);
      EXPECT_NEAR(fr.sweep[0].point.accuracy, want, 1e-6) << t;
    }
  }
}

TEST(Scalarization, LargeBetaMatchesReferenceMarginal)
{
  testing::Rng rng(6);
  auto inst  = testing::random_joint(rng, 3, 3);
  auto delta = testing::random_delta(rng, 3, 3);
  auto r     = testing::random_distribution(rng, 3);
  std::vector<double> betas{1e6};
  auto fr = scalarization_frontier(inst, delta, r, FrontierDivergence::tv(), betas);
  auto m  = system_marginal(fr.sweep[0].system, inst.marginal_x());
  EXPECT_LE(FrontierDivergence::tv()(m.probs(), r.probs()), 1e-3);
}

TEST(Scalarization, SmoothFamiliesApproachTvAtZeroNaturalness)
{
  auto b   = load_joint_instance(ANPLANE_FIXTURE_DIR "/instance_2x3.json");
  auto tv  = scalarization_frontier(b.joint, b.delta, b.r_y, FrontierDivergence::tv(),
                                    std::vector<double>{1e6});
  // best accuracy among systems whose marginal is exactly r_y
  double const at_r = tv.sweep[0].point.accuracy;
  for (auto const &kind : {std::string("kl"), std::string("d2")})
  {
    auto fr  = scalarization_frontier(b.joint, b.delta, b.r_y, divergence_for(kind, b),
                                      default_beta_grid());
    auto rep = verify_an_properties(fr.points, 1e-6);
    EXPECT_TRUE(rep.monotone) << kind;
    EXPECT_TRUE(rep.concave) << kind;
    EXPECT_NEAR(fr.sweep.back().point.accuracy, at_r, 1e-3) << kind;
  }
}

TEST(Scalarization, ZeroDistortionGivesOrigin)
{
  testing::Rng rng(7);
  auto inst  = testing::random_joint(rng, 2, 3);
  auto r     = testing::random_distribution(rng, 3);
  auto betas = log_grid(1e-3, 1e3, 7);
  betas.insert(betas.begin(), 0.0);
  for (auto div : {FrontierDivergence::tv(), FrontierDivergence::kl(),
                   FrontierDivergence::d2(Eigen::MatrixXd::Identity(3, 3))})
  {
    auto fr = scalarization_frontier(inst, DistortionTable::zeros(2, 3), r, div, betas);
    for (auto const &s : fr.sweep)
    {
      EXPECT_NEAR(s.point.accuracy, 0.0, 1e-12);
      EXPECT_NEAR(s.point.naturalness, 0.0, 1e-4) << family_name(div.family) << " beta "
                                                  << *s.point.beta;
    }
  }
}

TEST(Scalarization, Errors)
{
  auto inst  = uniform_2x2();
  auto delta = DistortionTable::exact_match(2, 2);
  std::vector<double> betas{1.0};
  auto r0 = FiniteDistribution({"u", "v"}, {1.0, 0.0});
  EXPECT_THROW(scalarization_frontier(inst, delta, r0, FrontierDivergence::kl(), betas),
               InvalidArgument);
  auto r = FiniteDistribution({"u", "v"}, {0.5, 0.5});
  EXPECT_THROW(scalarization_frontier(inst, delta, r,
                                      FrontierDivergence::d2(Eigen::MatrixXd::Identity(3, 3)), betas),
               InvalidArgument);
  std::vector<double> neg{-1.0};
  EXPECT_THROW(scalarization_frontier(inst, delta, r, FrontierDivergence::tv(), neg),
               InvalidArgument);
  EXPECT_THROW(FrontierDivergence::d2(-Eigen::MatrixXd::Identity(2, 2)), DataError);
}

TEST(Scalarization, PointsSortedByNaturalness)
{
  testing::Rng rng(8);
  auto inst  = testing::random_joint(rng, 3, 3);
  auto delta = testing::random_delta(rng, 3, 3);
  auto r     = testing::random_distribution(rng, 3);
  auto fr    = scalarization_frontier(inst, delta, r, FrontierDivergence::tv(), default_beta_grid());
  for (std::size_t i = 0; i + 1 < fr.points.size(); ++i)
  {
    EXPECT_LT(fr.points[i].naturalness, fr.points[i + 1].naturalness);
  }
  EXPECT_EQ(fr.sweep.size(), 50u);
}

// The scalarised objective at each β beats every system on a coarse grid.
TEST(Scalarization, DualOptimalAgainstGridProperty)
{
  testing::Rng rng(9);
  for (int t = 0; t < 6; ++t)
  {
    auto const nx = static_cast<std::size_t>(testing::uniform_int(rng, 1, 2));
    auto const ny = static_cast<std::size_t>(testing::uniform_int(rng, 2, 3));
    auto inst  = testing::random_joint(rng, nx, ny);
    auto delta = testing::random_delta(rng, nx, ny);
    auto r     = testing::random_distribution(rng, ny);
    std::vector<double> pts(ny);
    std::iota(pts.begin(), pts.end(), 0.0);
    Eigen::MatrixXd const k = Kernel::rbf(0.5).gram(pts);
    std::vector<double> betas{0.1, 1.0, 5.0};
    for (auto div : {FrontierDivergence::tv(), FrontierDivergence::kl(), FrontierDivergence::d2(k)})
    {
      auto fr = scalarization_frontier(inst, delta, r, div, betas);
      auto px = inst.marginal_x();
      for_each_grid_system(inst, 10, [&](ConditionalSystem const &q) {
        double const acc = system_accuracy(q, inst, delta);
        auto m           = system_marginal(q, px);
        double d         = div(m.probs(), r.probs());
        if (div.family == DivergenceFamily::kD2)
        {
          d = d * d;
        }
        for (std::size_t b = 0; b < betas.size(); ++b)
        {
          ASSERT_GE(fr.sweep[b].objective, acc - betas[b] * d - 1e-7)
              << family_name(div.family) << " beta " << betas[b];
        }
      });
    }
  }
}

TEST(SimplexGrid, Counts)
{
  EXPECT_EQ(simplex_grid(2, 100).size(), 101u);
  EXPECT_EQ(simplex_grid(3, 4).size(), 15u);
  EXPECT_EQ(simplex_grid(1, 5).size(), 1u);
  for (auto const &row : simplex_grid(3, 7))
  {
    double s = 0.0;
    for (double v : row)
    {
      s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-15);
  }
  EXPECT_THROW(simplex_grid(0, 5), InvalidArgument);
}

TEST(BruteForce, OneByTwoStaircase)
{
  JointInstance inst({"x"}, {"u", "v"}, {{0.75, 0.25}});
  auto r  = FiniteDistribution({"u", "v"}, {0.3, 0.7});
  auto fr = brute_force_frontier(inst, DistortionTable::exact_match(1, 2), r,
                                 FrontierDivergence::tv(), 100);
  EXPECT_EQ(fr.evaluated, 101u);
  auto rep = verify_an_properties(fr, 0.0);
  EXPECT_TRUE(rep.monotone);
  // closed form: q = Q(u); A = -(0.75(1-q) + 0.25 q), N = -|q - 0.3|
  EXPECT_NEAR(frontier_accuracy_at(fr.points, -1e-12), -(0.75 * 0.7 + 0.25 * 0.3), 1e-12);
  EXPECT_NEAR(frontier_accuracy_at(fr.points, -1.0), -0.25, 1e-12);
}

TEST(BruteForce, ZeroDistortionCollapses)
{
  testing::Rng rng(10);
  auto inst = testing::random_joint(rng, 2, 2);
  auto r    = testing::random_distribution(rng, 2);
  auto fr   = brute_force_frontier(inst, DistortionTable::zeros(2, 2), r, FrontierDivergence::tv(), 20);
  ASSERT_EQ(fr.points.size(), 1u);
  EXPECT_EQ(fr.points[0].accuracy, 0.0);
  EXPECT_GE(fr.points[0].naturalness, -0.05);
}

TEST(BruteForce, TooLarge)
{
  testing::Rng rng(11);
  auto inst = testing::random_joint(rng, 4, 3);
  auto r    = testing::random_distribution(rng, 3);
  EXPECT_THROW(brute_force_frontier(inst, testing::random_delta(rng, 4, 3), r,
                                    FrontierDivergence::tv(), 10),
               InvalidArgument);
}

TEST(BruteForce, AgreesWithDirectEnumeration)
{
  testing::Rng rng(12);
  auto inst  = testing::random_joint(rng, 2, 2);
  auto delta = testing::random_delta(rng, 2, 2);
  auto r     = testing::random_distribution(rng, 2);
  std::size_t const res = 25;
  for (auto div : {FrontierDivergence::tv(), FrontierDivergence::kl()})
  {
    auto fr = brute_force_frontier(inst, delta, r, div, res);
    std::vector<CurvePoint> all;
    auto px = inst.marginal_x();
    for_each_grid_system(inst, res, [&](ConditionalSystem const &q) {
      all.push_back({-div(system_marginal(q, px).probs(), r.probs()), system_accuracy(q, inst, delta),
                     std::nullopt});
    });
    for (double n : {-0.9, -0.5, -0.2, -0.1, -0.02})
    {
      // bucketing may shift a point by one bucket width in N
      double const want = frontier_accuracy_at(all, n);
      double const got  = frontier_accuracy_at(fr.points, n);
      EXPECT_NEAR(got, want, 0.05) << family_name(div.family) << " N=" << n;
    }
    EXPECT_NEAR(fr.points.back().accuracy, frontier_accuracy_at(all, fr.points.back().naturalness), 1e-9);
  }
}

TEST(VerifyProperties, Examples)
{
  std::vector<CurvePoint> convex{{-1.0, 0.0, {}}, {-0.5, -0.4, {}}, {0.0, -0.5, {}}};
  auto rep = verify_an_properties(convex, 1e-9);
  EXPECT_TRUE(rep.monotone);
  EXPECT_FALSE(rep.concave);
  EXPECT_EQ(rep.worst_concavity_index, 1u);
  EXPECT_NEAR(rep.worst_concavity, 0.15, 1e-15);

  std::vector<CurvePoint> two{{-1.0, 0.0, {}}, {0.0, 0.3, {}}};
  auto r2 = verify_an_properties(two, 1e-9);
  EXPECT_FALSE(r2.monotone);
  EXPECT_TRUE(r2.concave);
}

TEST(VerifyProperties, BruteForceStaircasePasses)
{
  testing::Rng rng(13);
  for (int t = 0; t < 5; ++t)
  {
    auto inst  = testing::random_joint(rng, 2, 2);
    auto delta = testing::random_delta(rng, 2, 2);
    auto r     = testing::random_distribution(rng, 2);
    std::size_t const res = 40;
    auto fr = brute_force_frontier(inst, delta, r, FrontierDivergence::tv(), res);
    EXPECT_TRUE(verify_an_properties(fr, 3.0 / res).passed()) << t;
  }
}

TEST(NoTwoBirds, Examples)
{
  JointInstance det({"a", "b"}, {"u", "v"}, {{0.4, 0.0}, {0.0, 0.6}});
  auto rep = no_two_birds_demo(det, DistortionTable::exact_match(2, 2));
  EXPECT_EQ(rep.conditional_entropy, 0.0);
  EXPECT_EQ(rep.tv_to_reference, 0.0);
  EXPECT_FALSE(rep.not_distribution_preserving);

  JointInstance skew({"x"}, {"y1", "y2"}, {{0.75, 0.25}});
  auto r2 = no_two_birds_demo(skew, DistortionTable::exact_match(1, 2));
  EXPECT_EQ(r2.q_star_marginal[0], 1.0);
  EXPECT_DOUBLE_EQ(r2.tv_to_reference, 0.25);
  EXPECT_TRUE(r2.not_distribution_preserving);
}

TEST(DivergenceFor, FromBundle)
{
  auto b = load_joint_instance(ANPLANE_FIXTURE_DIR "/instance_2x3.json");
  auto d = divergence_for("d2", b);
  EXPECT_EQ(d.family, DivergenceFamily::kD2);
  EXPECT_NEAR(d.kernel(0, 1), std::exp(-0.5), 1e-15);
  EXPECT_EQ(divergence_for("tv", b).family, DivergenceFamily::kTV);
  EXPECT_THROW(divergence_for("hellinger", b), InvalidArgument);
  b.kernel_preset.reset();
  EXPECT_THROW(divergence_for("d2", b), DataError);
}

}  // namespace
}  // namespace anplane
