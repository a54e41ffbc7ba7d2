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
#include <limits>

#include "anplane/kernels/kernels.hpp"

namespace anplane::kernels::scalar {

namespace {

inline double eval(PairKernelSpec k, double x, double y)
{
  switch (k.kind)
  {
  case PairKernel::kIndicator:
    return x == y ? 1.0 : 0.0;
  case PairKernel::kRbf:
  {
    double const d = x - y;
    return std::exp(-k.param * (d * d));
  }
  case PairKernel::kConstant:
    return k.param;
  }
  return 0.0;
}

}  // namespace

double pair_sum(PairKernelSpec k, std::span<const double> xs, std::span<const double> ys)
{
  double total = 0.0;
  for (double x : xs)
  {
    double row = 0.0;
    for (double y : ys)
    {
      row += eval(k, x, y);
    }
    total += row;
  }
  return total;
}

std::size_t argmax_dual(std::span<const double> acc, std::span<const double> rate, double beta)
{
  std::size_t best_idx = 0;
  double best          = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < acc.size(); ++i)
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
  for (std::size_t g = 0; g < out.size(); ++g)
  {
    double acc = 0.0;
    for (std::size_t y = 0; y < offset.size(); ++y)
    {
      acc += std::fabs(offset[y] + columns[y][g]);
    }
    out[g] = 0.5 * acc;
  }
}

}  // namespace anplane::kernels::scalar
