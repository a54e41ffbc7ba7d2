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

#include "anplane/critic_processes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "anplane/special_functions.hpp"

namespace anplane {

// ---------------------------------------------------------------------------
// Kernel

Kernel Kernel::rbf(double gamma)
{
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
  {
    throw InvalidArgument("rbf kernel: gamma must be finite and >= 0");
  }
  return Kernel(Kind::kRbf, gamma);
}

Kernel Kernel::tabulated(Eigen::MatrixXd table)
{
  if (table.rows() != table.cols())
  {
    throw InvalidArgument("tabulated kernel: table must be square");
  }
  Kernel k(Kind::kTabulated, 0.0);
  k.table_ = std::make_shared<const Eigen::MatrixXd>(std::move(table));
  return k;
}

Kernel Kernel::parse(std::string const &preset)
{
  std::istringstream in(preset);
  std::string name;
  in >> name;
  std::map<std::string, double> params;
  std::string kv;
  while (in >> kv)
  {
    auto const eq = kv.find('=');
    if (eq == std::string::npos)
    {
      throw InvalidArgument("kernel preset: expected key=value, got '" + kv + "'");
    }
    try
    {
      params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    catch (std::exception const &)
    {
      throw InvalidArgument("kernel preset: bad value in '" + kv + "'");
    }
  }
  auto get = [&](char const *key) {
    auto it = params.find(key);
    if (it == params.end())
    {
      throw InvalidArgument("kernel preset '" + name + "' needs " + key + "=...");
    }
    return it->second;
  };
  if (name == "indicator")
  {
    return indicator();
  }
  if (name == "rbf")
  {
    return rbf(get("gamma"));
  }
  if (name == "constant")
  {
    return constant(get("c"));
  }
  throw InvalidArgument("unknown kernel preset '" + name + "'");
}

double Kernel::operator()(double x, double y) const
{
  switch (kind_)
  {
  case Kind::kIndicator:
    return x == y ? 1.0 : 0.0;
  case Kind::kRbf:
  {
    double const d = x - y;
    return std::exp(-param_ * (d * d));
  }
  case Kind::kConstant:
    return param_;
  case Kind::kTabulated:
  {
    auto const i = static_cast<Eigen::Index>(x);
    auto const j = static_cast<Eigen::Index>(y);
    if (i < 0 || j < 0 || i >= table_->rows() || j >= table_->rows() ||
        static_cast<double>(i) != x || static_cast<double>(j) != y)
    {
      throw InvalidArgument("tabulated kernel: point is not a valid atom index");
    }
    return (*table_)(i, j);
  }
  }
  return 0.0;
}

std::optional<kernels::PairKernelSpec> Kernel::pair_spec() const
{
  switch (kind_)
  {
  case Kind::kIndicator:
    return kernels::PairKernelSpec{kernels::PairKernel::kIndicator, 0.0};
  case Kind::kRbf:
    return kernels::PairKernelSpec{kernels::PairKernel::kRbf, param_};
  case Kind::kConstant:
    return kernels::PairKernelSpec{kernels::PairKernel::kConstant, param_};
  case Kind::kTabulated:
    return std::nullopt;
  }
  return std::nullopt;
}

Eigen::MatrixXd Kernel::gram(std::span<const double> points) const
{
  auto const n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = 0; j < n; ++j)
    {
      g(i, j) = (*this)(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
    }
  }
  return g;
}

Link parse_link(std::string const &name)
{
  if (name == "identity")
  {
    return Link::kIdentity;
  }
  if (name == "log")
  {
    return Link::kLog;
  }
  if (name == "probit")
  {
    return Link::kProbit;
  }
  throw InvalidArgument("unknown link '" + name + "' (identity|log|probit)");
}

// ---------------------------------------------------------------------------
// Effective kernel

void check_psd(Eigen::MatrixXd const &gram)
{
  if (gram.rows() != gram.cols())
  {
    throw DataError("kernel table is not square");
  }
  double const scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
  {
    throw DataError("kernel table is not symmetric");
  }
  if (gram.rows() == 0)
  {
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  double const min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -1e-8 * scale)
  {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "kernel is not positive semidefinite (min eigenvalue %.3g)",
                  min_eig);
    throw DataError(buf);
  }
}

Eigen::MatrixXd effective_kernel(CriticProcess const &proc, std::span<const double> points)
{
  Eigen::MatrixXd const k = proc.kernel.gram(points);
  check_psd(k);
  auto const n = k.rows();
  Eigen::VectorXd m(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    m(i) = proc.mean(points[static_cast<std::size_t>(i)]);
  }

  Eigen::MatrixXd c(n, n);
  switch (proc.link)
  {
  case Link::kIdentity:
    c = k + m * m.transpose();
    break;
  case Link::kLog:
  {
    Eigen::VectorXd mu(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
      mu(i) = std::exp(m(i) + 0.5 * k(i, i));
    }
    for (Eigen::Index i = 0; i < n; ++i)
    {
      for (Eigen::Index j = 0; j < n; ++j)
      {
        c(i, j) = mu(i) * mu(j) * std::exp(k(i, j));
      }
    }
    break;
  }
  case Link::kProbit:
  {
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
      s(i) = std::sqrt(1.0 + k(i, i));
    }
    for (Eigen::Index i = 0; i < n; ++i)
    {
      for (Eigen::Index j = 0; j < n; ++j)
      {
        double const rho = std::clamp(k(i, j) / (s(i) * s(j)), -1.0, 1.0);
        c(i, j)          = special::bivariate_normal_cdf(m(i) / s(i), m(j) / s(j), rho);
      }
    }
    break;
  }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Sampling

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) noexcept
{
  std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z               = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z               = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CriticSampler::CriticSampler(CriticProcess proc, std::span<const double> points)
  : proc_(std::move(proc))
{
  if (points.empty())
  {
    throw InvalidArgument("sample_critic: no points");
  }
  unique_.assign(points.begin(), points.end());
  std::sort(unique_.begin(), unique_.end());
  unique_.erase(std::unique(unique_.begin(), unique_.end()), unique_.end());
  index_.reserve(points.size());
  for (double p : points)
  {
    index_.push_back(static_cast<std::size_t>(
        std::lower_bound(unique_.begin(), unique_.end(), p) - unique_.begin()));
  }

  auto const n = static_cast<Eigen::Index>(unique_.size());
  mean_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    mean_(i) = proc_.mean(unique_[static_cast<std::size_t>(i)]);
  }
  Eigen::MatrixXd const k = proc_.kernel.gram(unique_);
  double const trace      = k.trace();
  if (trace == 0.0 && k.cwiseAbs().maxCoeff() == 0.0)
  {
    degenerate_ = true;
    return;
  }
  check_psd(k);

  jitter_ = 1e-10 * trace / static_cast<double>(n);
  for (int attempt = 0; attempt <= 3; ++attempt)
  {
    Eigen::MatrixXd kj = k;
    kj.diagonal().array() += jitter_;
    Eigen::LLT<Eigen::MatrixXd> llt(kj);
    if (llt.info() == Eigen::Success)
    {
      chol_ = llt.matrixL();
      return;
    }
    if (attempt < 3)
    {
      jitter_ *= 10.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "critic sampling: Cholesky failed with jitter %.3g (eigenvalues in [%.3g, %.3g])",
                jitter_, es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff());
  throw DataError(buf);
}

std::vector<double> CriticSampler::draw(std::uint64_t seed) const
{
  Eigen::VectorXd g = mean_;
  if (!degenerate_)
  {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(mean_.size());
    for (Eigen::Index i = 0; i < z.size(); ++i)
    {
      z(i) = normal(rng);
    }
    g.noalias() += chol_.triangularView<Eigen::Lower>() * z;
  }
  std::vector<double> f(index_.size());
  for (std::size_t i = 0; i < index_.size(); ++i)
  {
    double const v = g(static_cast<Eigen::Index>(index_[i]));
    switch (proc_.link)
    {
    case Link::kIdentity:
      f[i] = v;
      break;
    case Link::kLog:
      f[i] = std::exp(v);
      break;
    case Link::kProbit:
      f[i] = special::normal_cdf(v);
      break;
    }
  }
  return f;
}

std::vector<double> sample_critic(CriticProcess const &proc, std::span<const double> points,
                                  std::uint64_t seed)
{
  return CriticSampler(proc, points).draw(seed);
}

// ---------------------------------------------------------------------------
// Closed forms

double dp_gaussian_closed_form(double mmd, double mean_diff, double p)
{
  if (!(p >= 1.0))
  {
    throw InvalidArgument("dp_gaussian_closed_form: p must be >= 1");
  }
  if (!(mmd >= 0.0))
  {
    throw InvalidArgument("dp_gaussian_closed_form: mmd must be >= 0");
  }
  double const abs_mu = std::abs(mean_diff);
  if (mmd == 0.0)
  {
    return abs_mu;
  }
  double const ratio = abs_mu / mmd;
  double const x     = 0.5 * ratio * ratio;
  if (!std::isfinite(x))
  {
    return abs_mu;
  }
  double const log_m = special::log_kummer_half(p, x);
  double const log_dp = p * std::log(mmd) + 0.5 * p * std::numbers::ln2 +
                        std::lgamma(0.5 * (1.0 + p)) - 0.5 * std::log(std::numbers::pi) + log_m;
  return std::exp(log_dp / p);
}

double d1_gaussian_closed_form(double mmd, double mean_diff)
{
  if (mmd == 0.0)
  {
    return std::abs(mean_diff);
  }
  double const t = mean_diff / mmd;
  return std::sqrt(2.0 / std::numbers::pi) * mmd * std::exp(-0.5 * t * t) +
         mean_diff * std::erf(t / std::numbers::sqrt2);
}

std::vector<double> dp_limit_check(double mmd, std::span<const double> p_sequence)
{
  std::vector<double> out;
  out.reserve(p_sequence.size());
  for (double p : p_sequence)
  {
    out.push_back(std::sqrt(std::numbers::e / (p + 1.0)) * dp_gaussian_closed_form(mmd, 0.0, p));
  }
  return out;
}

namespace {

double log_mean_exp_nll(std::span<const LppSample> samples)
{
  double hi = -std::numeric_limits<double>::infinity();
  for (auto const &s : samples)
  {
    hi = std::max(hi, -s.logprob / s.token_count);
  }
  double sum = 0.0;
  for (auto const &s : samples)
  {
    sum += std::exp(-s.logprob / s.token_count - hi);
  }
  return hi + std::log(sum / static_cast<double>(samples.size()));
}

}  // namespace

double lm_noise_d2(std::span<const LppSample> samples_q, std::span<const LppSample> samples_p)
{
  if (samples_q.empty() || samples_p.empty())
  {
    throw InvalidArgument("lm_noise_d2: empty sample set");
  }
  double const lq = log_mean_exp_nll(samples_q);
  double const lp = log_mean_exp_nll(samples_p);
  if (lq == lp)
  {
    return 0.0;
  }
  double const hi = std::max(lq, lp);
  double const gap = std::abs(lq - lp);
  return std::exp(0.5 + hi + std::log(-std::expm1(-gap)));
}

double lm_noise_d2_exact(std::span<const TextSample> samples_q, std::span<const TextSample> samples_p)
{
  if (samples_q.empty() || samples_p.empty())
  {
    throw InvalidArgument("lm_noise_d2_exact: empty sample set");
  }
  std::map<std::string, std::size_t> atom;
  std::vector<double> nll;
  auto intern = [&](TextSample const &s) {
    auto [it, inserted] = atom.emplace(s.text, nll.size());
    if (inserted)
    {
      nll.push_back(-s.score.logprob / s.score.token_count);
    }
    return it->second;
  };
  std::vector<std::size_t> iq, ip;
  for (auto const &s : samples_q)
  {
    iq.push_back(intern(s));
  }
  for (auto const &s : samples_p)
  {
    ip.push_back(intern(s));
  }
  auto const n = static_cast<Eigen::Index>(nll.size());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (auto i : iq)
  {
    w(static_cast<Eigen::Index>(i)) += 1.0 / static_cast<double>(iq.size());
  }
  for (auto i : ip)
  {
    w(static_cast<Eigen::Index>(i)) -= 1.0 / static_cast<double>(ip.size());
  }
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = 0; j < n; ++j)
    {
      double const mu_i = std::exp(nll[static_cast<std::size_t>(i)] + 0.5);
      double const mu_j = std::exp(nll[static_cast<std::size_t>(j)] + 0.5);
      c(i, j)           = mu_i * mu_j * std::exp(i == j ? 1.0 : 0.0);
    }
  }
  double const sq = w.dot(c * w);
  return std::sqrt(std::max(0.0, sq));
}

}  // namespace anplane
