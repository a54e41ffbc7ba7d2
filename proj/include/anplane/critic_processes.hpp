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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "anplane/data_model.hpp"
#include "anplane/kernels/kernels.hpp"

namespace anplane {

/// Covariance function over scalar points. Tabulated kernels index their
/// table by the integer value of the point.
class Kernel
{
public:
  enum class Kind
  {
    kIndicator,
    kRbf,
    kConstant,
    kTabulated,
  };

  static Kernel indicator() { return Kernel(Kind::kIndicator, 0.0); }
  static Kernel rbf(double gamma);
  static Kernel constant(double c) { return Kernel(Kind::kConstant, c); }
  static Kernel tabulated(Eigen::MatrixXd table);
  /// Accepts `indicator`, `rbf gamma=G`, `constant c=C`.
  static Kernel parse(std::string const &preset);

  Kind kind() const noexcept { return kind_; }
  double param() const noexcept { return param_; }
  double operator()(double x, double y) const;

  /// The SIMD pair-sum descriptor, when one exists for this kind.
  std::optional<kernels::PairKernelSpec> pair_spec() const;

  Eigen::MatrixXd gram(std::span<const double> points) const;

private:
  Kernel(Kind kind, double param)
    : kind_(kind)
    , param_(param)
  {}

  Kind kind_    = Kind::kIndicator;
  double param_ = 0.0;
  std::shared_ptr<const Eigen::MatrixXd> table_;
};

enum class Link
{
  kIdentity,  ///< f = g
  kLog,       ///< f = exp(g)
  kProbit,    ///< f = Φ(g)
};

Link parse_link(std::string const &name);

/// A distribution over critics f with link(f) ~ GP(mean, kernel).
struct CriticProcess
{
  std::function<double(double)> mean = [](double) { return 0.0; };
  Kernel kernel                      = Kernel::indicator();
  Link link                          = Link::kIdentity;
};

/// C(x, y) = E_f[f(x) f(y)] on `points`. Throws DataError if the Gram matrix of
/// the kernel has an eigenvalue below -1e-8 (scaled by its largest magnitude).
Eigen::MatrixXd effective_kernel(CriticProcess const &proc, std::span<const double> points);

/// Throws DataError unless `gram` is symmetric and PSD within tolerance.
void check_psd(Eigen::MatrixXd const &gram);

/// Draws critics evaluated on a fixed point set. The Gram matrix is factorised
/// once over the distinct points; each draw is seeded independently.
class CriticSampler
{
public:
  CriticSampler(CriticProcess proc, std::span<const double> points);

  std::vector<double> draw(std::uint64_t seed) const;
  std::size_t size() const noexcept { return index_.size(); }
  double jitter() const noexcept { return jitter_; }

private:
  CriticProcess proc_;
  std::vector<double> unique_;
  std::vector<std::size_t> index_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd chol_;
  bool degenerate_ = false;
  double jitter_   = 0.0;
};

std::vector<double> sample_critic(CriticProcess const &proc, std::span<const double> points,
                                  std::uint64_t seed);

/// D_p between two measures under a GP(m, k) critic (identity link), given
/// sigma = MMD_k and mu = P(m) - Q(m). Throws InvalidArgument for p < 1.
double dp_gaussian_closed_form(double mmd, double mean_diff, double p);

/// The p = 1 specialisation written via exp and erf.
double d1_gaussian_closed_form(double mmd, double mean_diff);

/// sqrt(e / (p + 1)) * D_p with m = 0, for each p.
std::vector<double> dp_limit_check(double mmd, std::span<const double> p_sequence);

/// D_2 under a log-GP critic with m(x) = per-token NLL and indicator
/// covariance, assuming no two samples coincide:
///   sqrt(e) * |E_Q[exp(nll)] - E_P[exp(nll)]|.
double lm_noise_d2(std::span<const LppSample> samples_q, std::span<const LppSample> samples_p);

struct TextSample
{
  std::string text;
  LppSample score;
};

/// Finite-support D_2 for the same process, identifying equal texts as one
/// atom (the diagonal exp(k(x, x)) = e terms included).
double lm_noise_d2_exact(std::span<const TextSample> samples_q,
                         std::span<const TextSample> samples_p);

/// splitmix64 finaliser; derives per-stream seeds from a root seed.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) noexcept;

}  // namespace anplane
