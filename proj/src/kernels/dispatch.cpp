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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "anplane/kernels/kernels.hpp"

namespace anplane::kernels {

namespace {

Isa initial_isa() noexcept
{
  Isa isa = detected_isa();
  if (char const *env = std::getenv("AN_SIMD"))
  {
    std::string_view const v(env);
    if (v == "scalar")
    {
      isa = Isa::kScalar;
    }
    else if (v == "avx2" && isa_supported(Isa::kAvx2))
    {
      isa = Isa::kAvx2;
    }
  }
  return isa;
}

std::atomic<Isa> &active()
{
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

char const *isa_name(Isa isa) noexcept
{
  switch (isa)
  {
  case Isa::kScalar:
    return "scalar";
  case Isa::kAvx2:
    return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) noexcept
{
  switch (isa)
  {
  case Isa::kScalar:
    return true;
  case Isa::kAvx2:
#if defined(ANPLANE_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
  }
  return false;
}

Isa detected_isa() noexcept
{
  return isa_supported(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

Isa active_isa() noexcept
{
  return active().load(std::memory_order_relaxed);
}

void set_isa(Isa isa)
{
  if (!isa_supported(isa))
  {
    throw std::invalid_argument(std::string("instruction set not supported: ") + isa_name(isa));
  }
  active().store(isa, std::memory_order_relaxed);
}

double pair_sum(PairKernelSpec k, std::span<const double> xs, std::span<const double> ys)
{
#if defined(ANPLANE_HAVE_AVX2)
  if (active_isa() == Isa::kAvx2)
  {
    return avx2::pair_sum(k, xs, ys);
  }
#endif
  return scalar::pair_sum(k, xs, ys);
}

std::size_t argmax_dual(std::span<const double> acc, std::span<const double> rate, double beta)
{
#if defined(ANPLANE_HAVE_AVX2)
  if (active_isa() == Isa::kAvx2)
  {
    return avx2::argmax_dual(acc, rate, beta);
  }
#endif
  return scalar::argmax_dual(acc, rate, beta);
}

void tv_batch(std::span<const double> offset, std::span<const std::span<const double>> columns,
              std::span<double> out)
{
#if defined(ANPLANE_HAVE_AVX2)
  if (active_isa() == Isa::kAvx2)
  {
    avx2::tv_batch(offset, columns, out);
    return;
  }
#endif
  scalar::tv_batch(offset, columns, out);
}

}  // namespace anplane::kernels
