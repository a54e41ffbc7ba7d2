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

/// Special functions needed by the Gaussian-process critic closed forms.
namespace anplane::special {

/// log Γ(z) for z > 0.
double log_gamma(double z);

/// Standard normal CDF Φ(t).
double normal_cdf(double t);

/// Kummer's confluent hypergeometric function M(a, b, z).
///
/// Only the branches needed here are supported: a a non-positive integer
/// (terminating series), or b > 0 with either z >= 0 and a > 0 (positive
/// series), or z < 0 (Kummer's transformation M(a,b,z) = e^z M(b-a,b,-z)).
/// Throws InvalidArgument outside that domain.
double kummer_m(double a, double b, double z);

/// log M(-p/2, 1/2, -x) for p >= 1 and x >= 0, the factor appearing in the
/// absolute moments of a shifted normal. Stable for large x and large p.
double log_kummer_half(double p, double x);

/// P[X <= a, Y <= b] for a standard bivariate normal with correlation rho.
/// Throws InvalidArgument for |rho| > 1.
double bivariate_normal_cdf(double a, double b, double rho);

}  // namespace anplane::special
