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
#include <span>

/// Data-parallel inner loops shared by the estimators and solvers.
///
/// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
/// variant. The public entry points dispatch on the active instruction set,
/// which is detected once at startup and can be pinned with the AN_SIMD
/// environment variable (`scalar` or `avx2`) or set_isa().
///
/// argmax_dual and tv_batch are bit-identical across variants. pair_sum is
/// exact for the indicator kernel and agrees to ~1e-14 relative otherwise
/// (different summation order and exp implementation).
namespace anplane::kernels {

enum class Isa
{
  kScalar,
  kAvx2,
};

char const *isa_name(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;
Isa detected_isa() noexcept;
Isa active_isa() noexcept;
/// Throws std::invalid_argument if the CPU lacks the requested extension.
void set_isa(Isa isa);

enum class PairKernel
{
  kIndicator,  ///< 1[x == y]
  kRbf,        ///< exp(-gamma (x - y)^2)
  kConstant,   ///< c
};

struct PairKernelSpec
{
  PairKernel kind = PairKernel::kIndicator;
  double param    = 0.0;  ///< gamma for RBF, c for constant
};

/// Σ_i Σ_j k(xs[i], ys[j]), diagonal included.
double pair_sum(PairKernelSpec k, std::span<const double> xs, std::span<const double> ys);

/// Index of the largest acc[k] + beta * rate[k]; lowest index wins ties.
/// Requires acc.size() == rate.size() >= 1.
std::size_t argmax_dual(std::span<const double> acc, std::span<const double> rate, double beta);

/// out[g] = 0.5 * Σ_y |offset[y] + columns[y][g]| for every g.
/// `columns` holds offset.size() spans of length out.size().
void tv_batch(std::span<const double> offset, std::span<const std::span<const double>> columns,
              std::span<double> out);

namespace scalar {
double pair_sum(PairKernelSpec k, std::span<const double> xs, std::span<const double> ys);
std::size_t argmax_dual(std::span<const double> acc, std::span<const double> rate, double beta);
void tv_batch(std::span<const double> offset, std::span<const std::span<const double>> columns,
              std::span<double> out);
}  // namespace scalar

#if defined(ANPLANE_HAVE_AVX2)
namespace avx2 {
double pair_sum(PairKernelSpec k, std::span<const double> xs, std::span<const double> ys);
std::size_t argmax_dual(std::span<const double> acc, std::span<const double> rate, double beta);
void tv_batch(std::span<const double> offset, std::span<const std::span<const double>> columns,
              std::span<double> out);
/// Vectorised exp used by the RBF path; exposed for equivalence tests.
void exp_batch(std::span<const double> in, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace anplane::kernels
