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

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "anplane/kernels/kernels.hpp"

namespace anplane::kernels::avx2 {

namespace {

inline double hsum(__m256d v)
{
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo         = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline __m256d abs_pd(__m256d v)
{
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// exp(x) for x <= 0. Range reduction to |r| <= ln2/2, degree-13 Taylor
// polynomial, then scaling by 2^n through the exponent field. Inputs below
// -708 flush to zero.
inline __m256d exp_nonpositive(__m256d x)
{
  __m256d const lo_bound = _mm256_set1_pd(-708.0);
  __m256d const underflow = _mm256_cmp_pd(x, lo_bound, _CMP_LT_OQ);
  x                       = _mm256_max_pd(x, lo_bound);

  __m256d const log2e  = _mm256_set1_pd(1.4426950408889634);
  __m256d const ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  __m256d const ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(n, ln2_hi));
  r         = _mm256_sub_pd(r, _mm256_mul_pd(n, ln2_lo));

  static constexpr double inv_fact[14] = {
      1.0,
      1.0,
      1.0 / 2.0,
      1.0 / 6.0,
      1.0 / 24.0,
      1.0 / 120.0,
      1.0 / 720.0,
      1.0 / 5040.0,
      1.0 / 40320.0,
      1.0 / 362880.0,
      1.0 / 3628800.0,
      1.0 / 39916800.0,
      1.0 / 479001600.0,
      1.0 / 6227020800.0,
  };
  __m256d p = _mm256_set1_pd(inv_fact[13]);
  for (int i = 12; i >= 0; --i)
  {
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(inv_fact[i]));
  }

  __m256d const magic = _mm256_set1_pd(6755399441055744.0);  // 1.5 * 2^52
  __m256i ni = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)),
                                _mm256_castpd_si256(magic));
  __m256i bits  = _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
  __m256d scale = _mm256_castsi256_pd(bits);
  __m256d result = _mm256_mul_pd(p, scale);
  return _mm256_andnot_pd(underflow, result);
}

}  // namespace

void exp_batch(std::span<const double> in, std::span<double> out)
{
  std::size_t i = 0;
  for (; i + 4 <= in.size(); i += 4)
  {
    _mm256_storeu_pd(out.data() + i, exp_nonpositive(_mm256_loadu_pd(in.data() + i)));
  }
  if (i < in.size())
  {
    alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t k = i; k < in.size(); ++k)
    {
      buf[k - i] = in[k];
    }
    __m256d v = exp_nonpositive(_mm256_load_pd(buf));
    _mm256_store_pd(buf, v);
    for (std::size_t k = i; k < in.size(); ++k)
    {
      out[k] = buf[k - i];
    }
  }
}

double pair_sum(PairKernelSpec k, std::span<const double> xs, std::span<const double> ys)
{
  if (k.kind == PairKernel::kConstant)
  {
    return k.param * static_cast<double>(xs.size()) * static_cast<double>(ys.size());
  }
  std::size_t const m   = ys.size();
  std::size_t const m4  = m & ~std::size_t{3};
  __m256d const one     = _mm256_set1_pd(1.0);
  __m256d const neg_gam = _mm256_set1_pd(-k.param);
  double total          = 0.0;
  for (double x : xs)
  {
    __m256d const xv = _mm256_set1_pd(x);
    __m256d acc      = _mm256_setzero_pd();
    if (k.kind == PairKernel::kIndicator)
    {
      for (std::size_t j = 0; j < m4; j += 4)
      {
        __m256d const eq = _mm256_cmp_pd(xv, _mm256_loadu_pd(ys.data() + j), _CMP_EQ_OQ);
        acc              = _mm256_add_pd(acc, _mm256_and_pd(eq, one));
      }
    }
    else
    {
      for (std::size_t j = 0; j < m4; j += 4)
      {
        __m256d const d = _mm256_sub_pd(xv, _mm256_loadu_pd(ys.data() + j));
        acc = _mm256_add_pd(acc, exp_nonpositive(_mm256_mul_pd(neg_gam, _mm256_mul_pd(d, d))));
      }
    }
    double row = hsum(acc);
    for (std::size_t j = m4; j < m; ++j)
    {
      double const d = x - ys[j];
      row += k.kind == PairKernel::kIndicator ? (d == 0.0 ? 1.0 : 0.0)
                                              : std::exp(-k.param * (d * d));
    }
    total += row;
  }
  return total;
}

std::size_t argmax_dual(std::span<const double> acc, std::span<const double> rate, double beta)
{
  std::size_t const n  = acc.size();
  std::size_t const n4 = n & ~std::size_t{3};
  std::size_t best_idx = 0;
  double best          = -std::numeric_limits<double>::infinity();
  if (n4 > 0)
  {
    __m256d const bv  = _mm256_set1_pd(beta);
    __m256d best_val  = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    __m256d best_ix   = _mm256_setzero_pd();
    __m256d ix        = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    __m256d const inc = _mm256_set1_pd(4.0);
    for (std::size_t i = 0; i < n4; i += 4)
    {
      __m256d const prod  = _mm256_mul_pd(bv, _mm256_loadu_pd(rate.data() + i));
      __m256d const score = _mm256_add_pd(_mm256_loadu_pd(acc.data() + i), prod);
      __m256d const gt    = _mm256_cmp_pd(score, best_val, _CMP_GT_OQ);
      best_val            = _mm256_blendv_pd(best_val, score, gt);
      best_ix             = _mm256_blendv_pd(best_ix, ix, gt);
      ix                  = _mm256_add_pd(ix, inc);
    }
    alignas(32) double vals[4];
    alignas(32) double idxs[4];
    _mm256_store_pd(vals, best_val);
    _mm256_store_pd(idxs, best_ix);
    best     = vals[0];
    best_idx = static_cast<std::size_t>(idxs[0]);
    for (int l = 1; l < 4; ++l)
    {
      auto const li = static_cast<std::size_t>(idxs[l]);
      if (vals[l] > best || (vals[l] == best && li < best_idx))
      {
        best     = vals[l];
        best_idx = li;
      }
    }
  }
  for (std::size_t i = n4; i < n; ++i)
  {
    double const prod  = beta * rate[i];
    double const score = acc[i] + prod;
    if (score > best)
    {
      best     = score;
      best_idx = i;
    }
  }
  return best_idx;
}

void tv_batch(std::span<const double> offset, std::span<const std::span<const double>> columns,
              std::span<double> out)
{
  std::size_t const n  = out.size();
  std::size_t const n4 = n & ~std::size_t{3};
  __m256d const half   = _mm256_set1_pd(0.5);
  for (std::size_t g = 0; g < n4; g += 4)
  {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t y = 0; y < offset.size(); ++y)
    {
      __m256d const t =
          _mm256_add_pd(_mm256_set1_pd(offset[y]), _mm256_loadu_pd(columns[y].data() + g));
      acc = _mm256_add_pd(acc, abs_pd(t));
    }
    _mm256_storeu_pd(out.data() + g, _mm256_mul_pd(half, acc));
  }
  for (std::size_t g = n4; g < n; ++g)
  {
    double acc = 0.0;
    for (std::size_t y = 0; y < offset.size(); ++y)
    {
      acc += std::fabs(offset[y] + columns[y][g]);
    }
    out[g] = 0.5 * acc;
  }
}

}  // namespace anplane::kernels::avx2
