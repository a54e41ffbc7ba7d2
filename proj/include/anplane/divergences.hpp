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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "anplane/critic_processes.hpp"
#include "anplane/data_model.hpp"

namespace anplane {

enum class DivergenceFamily
{
  kTV,
  kKL,
  kMMD2,
  kD1,
  kD2,
  kDP,
  kLppDist,
  kXent,
  kKlNorm,
  kZipNorm,
};

char const *family_name(DivergenceFamily family) noexcept;

/// A distance estimate. `value` is always >= 0; estimators that can go
/// negative in finite samples keep the raw number in `signed_value`. For the
/// D2 family `value` is the squared distance and `root` its square root.
struct DivergenceValue
{
  DivergenceFamily family = DivergenceFamily::kTV;
  double value            = 0.0;
  std::optional<double> root;
  std::optional<double> signed_value;
  std::optional<double> std_error;
  /// False for scores that mix in the entropy of the evaluated system.
  bool comparable_across_systems = true;
};

DivergenceValue total_variation(FiniteDistribution const &p, FiniteDistribution const &q);

/// D_KL(P || Q) in nats. Throws DataError naming the label where q = 0 < p.
DivergenceValue kl_divergence(FiniteDistribution const &p, FiniteDistribution const &q);

/// E_QQ[C] - 2 E_QP[C] + E_PP[C] on a shared finite support.
DivergenceValue d2_exact(FiniteDistribution const &p, FiniteDistribution const &q,
                         Eigen::MatrixXd const &c);

/// Unbiased U-statistic for D_2^2 from samples of Q and P (self-pairs excluded).
DivergenceValue d2_ustat(std::span<const double> samples_q, std::span<const double> samples_p,
                         Kernel const &kernel);

/// Biased (V-statistic) MMD_k^2 between the two empirical measures.
DivergenceValue mmd_squared(std::span<const double> samples_q, std::span<const double> samples_p,
                            Kernel const &kernel);

/// Evaluates one random critic on `points`, reproducibly for a given seed.
using CriticDrawFn = std::function<std::vector<double>(std::span<const double> points,
                                                       std::uint64_t seed)>;

/// A CriticDrawFn backed by a CriticSampler that is rebuilt only when the
/// point set changes.
CriticDrawFn gp_critic_draw(CriticProcess proc);

/// Mean over sampled critics of |mean_Q f - mean_P f|, with its standard error.
DivergenceValue d1_monte_carlo(CriticDrawFn const &draw, std::span<const double> samples_q,
                               std::span<const double> samples_p, std::size_t n_critics,
                               std::uint64_t seed);

DivergenceValue lpp_distance(CorpusLppStats const &stats_q, CorpusLppStats const &stats_r);

/// A system output scored by a reference LM (`ref_logprob` = log f(y)) and
/// optionally by the system's own model (`own_logprob` = log q(y)).
struct ScoredSample
{
  std::string text;
  double ref_logprob = 0.0;
  std::optional<double> own_logprob;
};

/// Mean of -log f(y). Equals KL + H[Q], so it is flagged as not comparable
/// across systems.
DivergenceValue cross_entropy_score(std::span<const ScoredSample> samples);

/// Mean of log q(y) - log f(y).
DivergenceValue kl_normalized_score(std::span<const ScoredSample> samples);

/// Length in bits of the raw DEFLATE stream (level 9) of `text`.
std::size_t zip_code_length_bits(std::string_view text);

/// -mean(log f(y) + ln2 * zip_bits(y)), in nats.
DivergenceValue zip_normalized_score(std::span<const ScoredSample> samples);

struct RiskReport
{
  double epsilon = 0.5;
  double risk    = 0.0;  ///< R^L with L_1(a) = -a/eps, L_-1(a) = a/(1-eps)
  double risk_se = 0.0;
  double d1      = 0.0;
  double d1_se   = 0.0;
  double d_inf   = 0.0;  ///< max over the sampled critics
  bool inf_le_d1 = true;  ///< -D_inf <= -D_1
  bool d1_le_risk = true; ///< -D_1 <= R^L within 3 combined standard errors
  bool chain_holds() const { return inf_le_d1 && d1_le_risk; }
};

/// samples_p plays the role of the Y = 1 class, samples_q the Y = -1 class.
RiskReport classification_risk_check(double epsilon, CriticDrawFn const &draw,
                                     std::span<const double> samples_p,
                                     std::span<const double> samples_q, std::size_t n_critics,
                                     std::uint64_t seed);

}  // namespace anplane
