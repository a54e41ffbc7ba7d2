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

#include "anplane/divergences.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace anplane {

char const *family_name(DivergenceFamily family) noexcept
{
  switch (family)
  {
  case DivergenceFamily::kTV:
    return "TV";
  case DivergenceFamily::kKL:
    return "KL";
  case DivergenceFamily::kMMD2:
    return "MMD2";
  case DivergenceFamily::kD1:
    return "D1";
  case DivergenceFamily::kD2:
    return "D2";
  case DivergenceFamily::kDP:
    return "DP";
  case DivergenceFamily::kLppDist:
    return "LPP_DIST";
  case DivergenceFamily::kXent:
    return "XENT";
  case DivergenceFamily::kKlNorm:
    return "KL_NORM";
  case DivergenceFamily::kZipNorm:
    return "ZIP_NORM";
  }
  return "?";
}

namespace {

void check_same_support(FiniteDistribution const &p, FiniteDistribution const &q)
{
  if (p.size() != q.size() ||
      !std::equal(p.labels().begin(), p.labels().end(), q.labels().begin(), q.labels().end()))
  {
    throw InvalidArgument("distributions have different supports");
  }
}

struct MeanSe
{
  double mean = 0.0;
  double se   = 0.0;
};

MeanSe mean_and_se(std::span<const double> v)
{
  MeanSe out;
  if (v.empty())
  {
    return out;
  }
  double sum = 0.0;
  for (double x : v)
  {
    sum += x;
  }
  out.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1)
  {
    double ss = 0.0;
    for (double x : v)
    {
      ss += (x - out.mean) * (x - out.mean);
    }
    out.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return out;
}

double kernel_pair_sum(Kernel const &k, std::span<const double> xs, std::span<const double> ys)
{
  if (auto spec = k.pair_spec())
  {
    return kernels::pair_sum(*spec, xs, ys);
  }
  double total = 0.0;
  for (double x : xs)
  {
    double row = 0.0;
    for (double y : ys)
    {
      row += k(x, y);
    }
    total += row;
  }
  return total;
}

double kernel_diag_sum(Kernel const &k, std::span<const double> xs)
{
  double total = 0.0;
  for (double x : xs)
  {
    total += k(x, x);
  }
  return total;
}

DivergenceValue make_d2(double signed_sq)
{
  DivergenceValue out;
  out.family       = DivergenceFamily::kD2;
  out.signed_value = signed_sq;
  out.value        = std::max(0.0, signed_sq);
  out.root         = std::sqrt(out.value);
  return out;
}

}  // namespace

DivergenceValue total_variation(FiniteDistribution const &p, FiniteDistribution const &q)
{
  check_same_support(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
  {
    sum += std::abs(p[i] - q[i]);
  }
  DivergenceValue out;
  out.family = DivergenceFamily::kTV;
  out.value  = std::clamp(0.5 * sum, 0.0, 1.0);
  return out;
}

DivergenceValue kl_divergence(FiniteDistribution const &p, FiniteDistribution const &q)
{
  check_same_support(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
  {
    if (p[i] == 0.0)
    {
      continue;
    }
    if (q[i] == 0.0)
    {
      throw DataError("kl_divergence: Q('" + p.labels()[i] + "') = 0 where P > 0");
    }
    sum += p[i] * std::log(p[i] / q[i]);
  }
  DivergenceValue out;
  out.family       = DivergenceFamily::kKL;
  out.signed_value = sum;
  out.value        = std::max(0.0, sum);
  return out;
}

DivergenceValue d2_exact(FiniteDistribution const &p, FiniteDistribution const &q,
                         Eigen::MatrixXd const &c)
{
  check_same_support(p, q);
  auto const n = static_cast<Eigen::Index>(p.size());
  if (c.rows() != n || c.cols() != n)
  {
    throw InvalidArgument("d2_exact: kernel table does not match the support size");
  }
  double const scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
  {
    throw InvalidArgument("d2_exact: kernel table is not symmetric");
  }
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    w(i) = q[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(i)];
  }
  return make_d2(w.dot(c * w));
}

DivergenceValue d2_ustat(std::span<const double> samples_q, std::span<const double> samples_p,
                         Kernel const &kernel)
{
  if (samples_q.size() < 2 || samples_p.size() < 2)
  {
    throw InvalidArgument("d2_ustat: need at least 2 samples from each distribution");
  }
  auto const n = static_cast<double>(samples_q.size());
  auto const m = static_cast<double>(samples_p.size());
  double const qq =
      (kernel_pair_sum(kernel, samples_q, samples_q) - kernel_diag_sum(kernel, samples_q)) /
      (n * (n - 1.0));
  double const pp =
      (kernel_pair_sum(kernel, samples_p, samples_p) - kernel_diag_sum(kernel, samples_p)) /
      (m * (m - 1.0));
  double const qp = kernel_pair_sum(kernel, samples_q, samples_p) / (n * m);
  return make_d2(qq + pp - 2.0 * qp);
}

DivergenceValue mmd_squared(std::span<const double> samples_q, std::span<const double> samples_p,
                            Kernel const &kernel)
{
  if (samples_q.empty() || samples_p.empty())
  {
    throw InvalidArgument("mmd_squared: empty sample set");
  }
  auto const n    = static_cast<double>(samples_q.size());
  auto const m    = static_cast<double>(samples_p.size());
  double const sq = kernel_pair_sum(kernel, samples_q, samples_q) / (n * n) +
                    kernel_pair_sum(kernel, samples_p, samples_p) / (m * m) -
                    2.0 * kernel_pair_sum(kernel, samples_q, samples_p) / (n * m);
  DivergenceValue out;
  out.family       = DivergenceFamily::kMMD2;
  out.signed_value = sq;
  out.value        = std::max(0.0, sq);
  out.root         = std::sqrt(out.value);
  return out;
}

CriticDrawFn gp_critic_draw(CriticProcess proc)
{
  struct Cache
  {
    CriticProcess proc;
    std::vector<double> points;
    std::unique_ptr<CriticSampler> sampler;
  };
  auto cache  = std::make_shared<Cache>();
  cache->proc = std::move(proc);
  return [cache](std::span<const double> points, std::uint64_t seed) {
    if (!cache->sampler || !std::equal(points.begin(), points.end(), cache->points.begin(),
                                       cache->points.end()))
    {
      cache->points.assign(points.begin(), points.end());
      cache->sampler = std::make_unique<CriticSampler>(cache->proc, points);
    }
    return cache->sampler->draw(seed);
  };
}

namespace {

// mean_Q f - mean_P f for one critic drawn on the concatenated sample points.
std::vector<double> critic_gaps(CriticDrawFn const &draw, std::span<const double> samples_q,
                                std::span<const double> samples_p, std::size_t n_critics,
                                std::uint64_t seed)
{
  if (n_critics < 1)
  {
    throw InvalidArgument("need at least one critic");
  }
  if (samples_q.empty() || samples_p.empty())
  {
    throw InvalidArgument("empty sample set");
  }
  std::vector<double> points(samples_q.begin(), samples_q.end());
  points.insert(points.end(), samples_p.begin(), samples_p.end());
  std::vector<double> gaps;
  gaps.reserve(n_critics);
  for (std::size_t c = 0; c < n_critics; ++c)
  {
    auto const f = draw(points, derive_seed(seed, c));
    if (f.size() != points.size())
    {
      throw DataError("critic sampler returned " + std::to_string(f.size()) + " values for " +
                      std::to_string(points.size()) + " points");
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < samples_q.size(); ++i)
    {
      sq += f[i];
    }
    double sp = 0.0;
    for (std::size_t i = samples_q.size(); i < f.size(); ++i)
    {
      sp += f[i];
    }
    gaps.push_back(sq / static_cast<double>(samples_q.size()) -
                   sp / static_cast<double>(samples_p.size()));
  }
  return gaps;
}

}  // namespace

DivergenceValue d1_monte_carlo(CriticDrawFn const &draw, std::span<const double> samples_q,
                               std::span<const double> samples_p, std::size_t n_critics,
                               std::uint64_t seed)
{
  auto gaps = critic_gaps(draw, samples_q, samples_p, n_critics, seed);
  for (auto &g : gaps)
  {
    g = std::abs(g);
  }
  auto const ms = mean_and_se(gaps);
  DivergenceValue out;
  out.family    = DivergenceFamily::kD1;
  out.value     = ms.mean;
  out.std_error = ms.se;
  return out;
}

DivergenceValue lpp_distance(CorpusLppStats const &stats_q, CorpusLppStats const &stats_r)
{
  if (stats_q.n_texts < 1 || stats_r.n_texts < 1 || !std::isfinite(stats_q.mean_lpp) ||
      !std::isfinite(stats_r.mean_lpp))
  {
    throw InvalidArgument("lpp_distance: invalid corpus statistics");
  }
  DivergenceValue out;
  out.family       = DivergenceFamily::kLppDist;
  out.signed_value = stats_q.mean_lpp - stats_r.mean_lpp;
  out.value        = std::abs(*out.signed_value);
  return out;
}

DivergenceValue cross_entropy_score(std::span<const ScoredSample> samples)
{
  if (samples.empty())
  {
    throw InvalidArgument("cross_entropy_score: no samples");
  }
  std::vector<double> v;
  v.reserve(samples.size());
  for (auto const &s : samples)
  {
    v.push_back(-s.ref_logprob);
  }
  auto const ms = mean_and_se(v);
  DivergenceValue out;
  out.family                    = DivergenceFamily::kXent;
  out.signed_value              = ms.mean;
  out.value                     = std::max(0.0, ms.mean);
  out.std_error                 = ms.se;
  out.comparable_across_systems = false;
  return out;
}

DivergenceValue kl_normalized_score(std::span<const ScoredSample> samples)
{
  if (samples.empty())
  {
    throw InvalidArgument("kl_normalized_score: no samples");
  }
  std::vector<double> v;
  v.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
  {
    if (!samples[i].own_logprob)
    {
      throw DataError("kl_normalized_score: sample " + std::to_string(i) +
                      " is missing its own-model log-probability");
    }
    v.push_back(*samples[i].own_logprob - samples[i].ref_logprob);
  }
  auto const ms = mean_and_se(v);
  DivergenceValue out;
  out.family       = DivergenceFamily::kKlNorm;
  out.signed_value = ms.mean;
  out.value        = std::max(0.0, ms.mean);
  out.std_error    = ms.se;
  return out;
}

std::size_t zip_code_length_bits(std::string_view text)
{
  z_stream zs{};
  // Raw DEFLATE: no zlib header or checksum in the measured length.
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -15, 9, Z_DEFAULT_STRATEGY) != Z_OK)
  {
    throw DataError("zip: deflateInit2 failed");
  }
  std::vector<unsigned char> out(deflateBound(&zs, static_cast<uLong>(text.size())) + 16);
  zs.next_in   = reinterpret_cast<Bytef *>(const_cast<char *>(text.data()));
  zs.avail_in  = static_cast<uInt>(text.size());
  zs.next_out  = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  int const rc = deflate(&zs, Z_FINISH);
  std::size_t const bytes = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END)
  {
    throw DataError("zip: deflate failed");
  }
  return bytes * 8;
}

DivergenceValue zip_normalized_score(std::span<const ScoredSample> samples)
{
  if (samples.empty())
  {
    throw InvalidArgument("zip_normalized_score: no samples");
  }
  std::vector<double> v;
  v.reserve(samples.size());
  for (auto const &s : samples)
  {
    double const bits = static_cast<double>(zip_code_length_bits(s.text));
    v.push_back(-(s.ref_logprob + bits * std::numbers::ln2));
  }
  auto const ms = mean_and_se(v);
  DivergenceValue out;
  out.family       = DivergenceFamily::kZipNorm;
  out.signed_value = ms.mean;
  out.value        = std::max(0.0, ms.mean);
  out.std_error    = ms.se;
  return out;
}

RiskReport classification_risk_check(double epsilon, CriticDrawFn const &draw,
                                     std::span<const double> samples_p,
                                     std::span<const double> samples_q, std::size_t n_critics,
                                     std::uint64_t seed)
{
  if (!(epsilon > 0.0 && epsilon < 1.0))
  {
    throw InvalidArgument("classification_risk_check: epsilon must lie in (0, 1)");
  }
  std::vector<double> points(samples_p.begin(), samples_p.end());
  points.insert(points.end(), samples_q.begin(), samples_q.end());
  if (samples_p.empty() || samples_q.empty() || n_critics < 1)
  {
    throw InvalidArgument("classification_risk_check: empty samples or no critics");
  }

  std::vector<double> risks;
  std::vector<double> abs_gaps;
  risks.reserve(n_critics);
  abs_gaps.reserve(n_critics);
  for (std::size_t c = 0; c < n_critics; ++c)
  {
    auto const f = draw(points, derive_seed(seed, c));
    if (f.size() != points.size())
    {
      throw DataError("critic sampler returned the wrong number of values");
    }
    double loss_pos = 0.0;  // E_P[L_1(f)]
    for (std::size_t i = 0; i < samples_p.size(); ++i)
    {
      loss_pos += -f[i] / epsilon;
    }
    loss_pos /= static_cast<double>(samples_p.size());
    double loss_neg = 0.0;  // E_Q[L_-1(f)]
    double mean_q   = 0.0;
    for (std::size_t i = samples_p.size(); i < f.size(); ++i)
    {
      loss_neg += f[i] / (1.0 - epsilon);
      mean_q += f[i];
    }
    loss_neg /= static_cast<double>(samples_q.size());
    mean_q /= static_cast<double>(samples_q.size());
    double mean_p = 0.0;
    for (std::size_t i = 0; i < samples_p.size(); ++i)
    {
      mean_p += f[i];
    }
    mean_p /= static_cast<double>(samples_p.size());

    risks.push_back(epsilon * loss_pos + (1.0 - epsilon) * loss_neg);
    abs_gaps.push_back(std::abs(mean_q - mean_p));
  }

  auto const r  = mean_and_se(risks);
  auto const d1 = mean_and_se(abs_gaps);
  RiskReport rep;
  rep.epsilon    = epsilon;
  rep.risk       = r.mean;
  rep.risk_se    = r.se;
  rep.d1         = d1.mean;
  rep.d1_se      = d1.se;
  rep.d_inf      = *std::max_element(abs_gaps.begin(), abs_gaps.end());
  // the mean can round one ulp past the max when all gaps are equal
  rep.inf_le_d1  = rep.d1 <= rep.d_inf * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
  double const combined = 3.0 * std::hypot(rep.risk_se, rep.d1_se);
  rep.d1_le_risk        = -rep.d1 <= rep.risk + combined;
  return rep;
}

}  // namespace anplane
