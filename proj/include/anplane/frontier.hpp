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
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "anplane/data_model.hpp"
#include "anplane/divergences.hpp"

namespace anplane {

struct CurvePoint
{
  double naturalness = 0.0;  ///< N = -D(Q_y, R_y)
  double accuracy    = 0.0;  ///< A = -Δ(Q)
  std::optional<double> beta;

  bool operator==(CurvePoint const &) const = default;
};

enum class FrontierSolver
{
  kScalarization,
  kBruteForce,
};

/// Divergence on the output alphabet: TV, D(Q_y || R_y), or the root of the
/// finite-support D2^2 with kernel matrix `kernel` over y labels.
struct FrontierDivergence
{
  DivergenceFamily family = DivergenceFamily::kTV;
  Eigen::MatrixXd kernel;

  static FrontierDivergence tv() { return {DivergenceFamily::kTV, {}}; }
  static FrontierDivergence kl() { return {DivergenceFamily::kKL, {}}; }
  static FrontierDivergence d2(Eigen::MatrixXd kernel);

  double operator()(std::span<const double> q, std::span<const double> r) const;
};

/// `tv`, `kl` or `d2`. For d2 the kernel comes from the bundle: an explicit
/// table, or a preset evaluated on `points` (atom indices when absent).
FrontierDivergence divergence_for(std::string const &kind, InstanceBundle const &bundle);

/// One scalarization solve.
struct SweepPoint
{
  CurvePoint point;
  double objective      = 0.0;
  std::size_t iterations = 0;
  bool converged        = true;
  ConditionalSystem system;
};

struct FrontierResult
{
  /// Sorted strictly increasing in naturalness.
  std::vector<CurvePoint> points;
  FrontierSolver solver     = FrontierSolver::kScalarization;
  DivergenceFamily family   = DivergenceFamily::kTV;
  /// Scalarization only: one entry per β, in grid order.
  std::vector<SweepPoint> sweep;
  /// Brute force only: number of systems evaluated.
  std::size_t evaluated = 0;
};

struct ScalarizationOptions
{
  std::size_t restarts       = 8;
  std::size_t max_iterations = 20000;
  std::size_t window         = 50;
  double tolerance           = 1e-10;
  std::uint64_t seed         = 0;
};

double system_accuracy(ConditionalSystem const &q, JointInstance const &inst,
                       DistortionTable const &delta);

FiniteDistribution system_marginal(ConditionalSystem const &q, FiniteDistribution const &p_x);

/// H[y | x] in nats.
double conditional_entropy(JointInstance const &inst);

/// TV is solved exactly as a linear program; KL and D2 by exponentiated
/// gradient with restarts. β = 0 prefers, among accuracy-optimal systems, the
/// most natural one.
FrontierResult scalarization_frontier(JointInstance const &inst, DistortionTable const &delta,
                                      FiniteDistribution const &r_y,
                                      FrontierDivergence const &divergence,
                                      std::span<const double> betas,
                                      ScalarizationOptions const &options = {});

/// Every composition of `resolution` into |Y| parts.
std::vector<std::vector<double>> simplex_grid(std::size_t ny, std::size_t resolution);

/// Exhaustive search over row-stochastic systems on the simplex grid.
/// Throws InvalidArgument if |X| (|Y| - 1) > 6.
FrontierResult brute_force_frontier(JointInstance const &inst, DistortionTable const &delta,
                                    FiniteDistribution const &r_y,
                                    FrontierDivergence const &divergence, std::size_t resolution);

/// Best accuracy among points with naturalness >= n; -inf if there are none.
double frontier_accuracy_at(std::span<const CurvePoint> points, double n);

struct PropertyReport
{
  bool monotone = true;
  bool concave  = true;
  double worst_increase = 0.0;  ///< max A[i+1] - A[i]
  double worst_concavity = 0.0; ///< max chord - middle
  std::size_t worst_increase_index  = 0;
  std::size_t worst_concavity_index = 0;

  bool passed() const { return monotone && concave; }
};

PropertyReport verify_an_properties(std::span<const CurvePoint> points, double tol);
PropertyReport verify_an_properties(FrontierResult const &fr, double tol);

struct NoTwoBirdsReport
{
  double conditional_entropy = 0.0;
  double tv_to_reference     = 0.0;  ///< D_TV(Q*_y, P_y)
  bool not_distribution_preserving = false;
  ConditionalSystem q_star;
  FiniteDistribution q_star_marginal;
};

NoTwoBirdsReport no_two_birds_demo(JointInstance const &inst, DistortionTable const &delta);

}  // namespace anplane
