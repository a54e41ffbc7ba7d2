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

#include "anplane/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <limits>
#include <numbers>

#include "anplane/error.hpp"

namespace anplane::special {

double log_gamma(double z)
{
  if (!(z > 0.0))
  {
    throw InvalidArgument("log_gamma: argument must be positive");
  }
  return std::lgamma(z);
}

double normal_cdf(double t)
{
  return 0.5 * std::erfc(-t / std::numbers::sqrt2);
}

namespace {

bool is_nonpositive_integer(double a)
{
  return a <= 0.0 && std::floor(a) == a;
}

// Running sum of exp(log_terms) kept relative to the largest term seen.
class LogSum
{
public:
  void add(double log_term)
  {
    if (log_term == -std::numeric_limits<double>::infinity())
    {
      return;
    }
    if (log_term > ref_)
    {
      sum_ = sum_ * std::exp(ref_ - log_term) + 1.0;
      ref_ = log_term;
    }
    else
    {
      sum_ += std::exp(log_term - ref_);
    }
  }
  double log_value() const { return ref_ + std::log(sum_); }
  double ref() const { return ref_; }

private:
  double ref_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

// log M(a, b, x) for a > 0, b > 0, x >= 0: every series term is positive.
double log_positive_series(double a, double b, double x)
{
  if (x == 0.0)
  {
    return 0.0;
  }
  LogSum sum;
  double log_term = 0.0;
  double const lx = std::log(x);
  sum.add(0.0);
  for (long k = 0;; ++k)
  {
    double const kk = static_cast<double>(k);
    log_term += std::log(a + kk) - std::log(b + kk) + lx - std::log(kk + 1.0);
    sum.add(log_term);
    // Past the peak the ratio is < 1 and decreasing; stop once negligible.
    double const ratio = (a + kk + 1.0) * x / ((b + kk + 1.0) * (kk + 2.0));
    if (ratio < 1.0 && log_term - sum.ref() < -40.0)
    {
      break;
    }
    if (k > 100000000)
    {
      throw InvalidArgument("kummer_m: series did not converge");
    }
  }
  return sum.log_value();
}

}  // namespace

double kummer_m(double a, double b, double z)
{
  if (!(b > 0.0))
  {
    throw InvalidArgument("kummer_m: b must be positive");
  }
  if (is_nonpositive_integer(a))
  {
    auto const n = static_cast<long>(-a);
    double term  = 1.0;
    double sum   = 1.0;
    for (long k = 0; k < n; ++k)
    {
      double const kk = static_cast<double>(k);
      term *= (a + kk) / (b + kk) * z / (kk + 1.0);
      sum += term;
    }
    return sum;
  }
  if (z >= 0.0)
  {
    if (!(a > 0.0))
    {
      throw InvalidArgument("kummer_m: unsupported domain (a < 0, z > 0)");
    }
    return std::exp(log_positive_series(a, b, z));
  }
  // Kummer's transformation; b - a > 0 is required for the positive series.
  if (!(b - a > 0.0))
  {
    throw InvalidArgument("kummer_m: unsupported domain (z < 0, a >= b)");
  }
  return std::exp(z + log_positive_series(b - a, b, -z));
}

double log_kummer_half(double p, double x)
{
  if (!(p >= 1.0) || !(x >= 0.0))
  {
    throw InvalidArgument("log_kummer_half: requires p >= 1 and x >= 0");
  }
  if (x == 0.0)
  {
    return 0.0;
  }
  double const a = -0.5 * p;
  double const b = 0.5;
  if (is_nonpositive_integer(a))
  {
    // Terminating, and with z = -x every term is positive.
    auto const n = static_cast<long>(-a);
    LogSum sum;
    sum.add(0.0);
    double log_term = 0.0;
    double const lx = std::log(x);
    for (long k = 0; k < n; ++k)
    {
      double const kk = static_cast<double>(k);
      log_term += std::log(-a - kk) - std::log(b + kk) + lx - std::log(kk + 1.0);
      sum.add(log_term);
    }
    return sum.log_value();
  }

  // Large x: algebraic asymptotic expansion of e^{-x} M(b - a, b, x); the
  // neglected part is O(e^{-x}) relative.
  if (x > 40.0)
  {
    double const c1 = 0.5 * (1.0 - p);  // (1 - (b - a))
    double term     = 1.0;
    double sum      = 1.0;
    bool converged  = false;
    for (int s = 0; s < 200; ++s)
    {
      double const next = term * (c1 + s) * (a + s) / ((s + 1.0) * x);
      if (std::abs(next) >= std::abs(term) && s > 0)
      {
        break;  // asymptotic series started diverging
      }
      term = next;
      sum += term;
      if (term == 0.0 || std::abs(term) < 1e-17 * std::abs(sum))
      {
        converged = true;
        break;
      }
    }
    if (converged)
    {
      return std::lgamma(0.5) - std::lgamma(b - a) + (-a) * std::log(x) + std::log(sum);
    }
  }
  return -x + log_positive_series(b - a, b, x);
}

namespace {

// Gauss-Legendre abscissae (positive half) and weights for 6, 12 and 20 points.
constexpr std::array<double, 3> kX6 = {0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
constexpr std::array<double, 3> kW6 = {0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
constexpr std::array<double, 6> kX12 = {0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                                        0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
constexpr std::array<double, 6> kW12 = {0.04717533638651177, 0.1069393259953183,
                                        0.1600783285433464,  0.2031674267230659,
                                        0.2334925365383547,  0.2491470458134029};
constexpr std::array<double, 10> kX20 = {
    0.9931285991850949, 0.9639719272779138, 0.9122344282513259, 0.8391169718222188,
    0.7463319064601508, 0.6360536807265150, 0.5108670019508271, 0.3737060887154196,
    0.2277858511416451, 0.07652652113349733};
constexpr std::array<double, 10> kW20 = {
    0.01761400713915212, 0.04060142980038694, 0.06267204833410906, 0.08327674157670475,
    0.1019301198172404,  0.1181945319615184,  0.1316886384491766,  0.1420961093183821,
    0.1491729864726037,  0.1527533871307259};

// Upper orthant P[X > h, Y > k]; Drezner-Wesolowsky reduction with Genz's
// refinement for |rho| >= 0.925.
double bvn_upper(double h, double k, double rho)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::span<const double> xs;
  std::span<const double> ws;
  double const ar = std::abs(rho);
  if (ar < 0.3)
  {
    xs = kX6;
    ws = kW6;
  }
  else if (ar < 0.75)
  {
    xs = kX12;
    ws = kW12;
  }
  else
  {
    xs = kX20;
    ws = kW20;
  }

  double hk  = h * k;
  double bvn = 0.0;
  if (ar < 0.925)
  {
    double const hs  = 0.5 * (h * h + k * k);
    double const asr = 0.5 * std::asin(rho);
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
      for (double node : {1.0 - xs[i], 1.0 + xs[i]})
      {
        double const sn = std::sin(asr * node);
        bvn += ws[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    return bvn * asr / two_pi + normal_cdf(-h) * normal_cdf(-k);
  }

  if (rho < 0.0)
  {
    k  = -k;
    hk = -hk;
  }
  if (ar < 1.0)
  {
    double const as = (1.0 - rho) * (1.0 + rho);
    double a        = std::sqrt(as);
    double const bs = (h - k) * (h - k);
    double const c  = (4.0 - hk) / 8.0;
    double const d  = (12.0 - hk) / 80.0;
    double asr      = -0.5 * (bs / as + hk);
    if (asr > -100.0)
    {
      bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
    }
    if (hk > -100.0)
    {
      double const b  = std::sqrt(bs);
      double const sp = std::sqrt(two_pi) * normal_cdf(-b / a);
      bvn -= std::exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
    }
    a *= 0.5;
    double quad = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
      for (double node : {1.0 - xs[i], 1.0 + xs[i]})
      {
        double const xsq = (a * node) * (a * node);
        double const e   = -0.5 * (bs / xsq + hk);
        if (e > -100.0)
        {
          double const rs = std::sqrt(1.0 - xsq);
          double const sp = 1.0 + c * xsq * (1.0 + 5.0 * d * xsq);
          double const ep = std::exp(-0.5 * hk * xsq / ((1.0 + rs) * (1.0 + rs))) / rs;
          quad += ws[i] * std::exp(e) * (ep - sp);
        }
      }
    }
    bvn = -(a * quad + bvn) / two_pi;
  }
  if (rho > 0.0)
  {
    bvn += normal_cdf(-std::max(h, k));
  }
  else if (h >= k)
  {
    bvn = -bvn;
  }
  else
  {
    double const l = h < 0.0 ? normal_cdf(k) - normal_cdf(h) : normal_cdf(-h) - normal_cdf(-k);
    bvn = l - bvn;
  }
  return bvn;
}

}  // namespace

double bivariate_normal_cdf(double a, double b, double rho)
{
  if (!(std::abs(rho) <= 1.0))
  {
    throw InvalidArgument("bivariate_normal_cdf: |rho| must not exceed 1");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (a == -inf || b == -inf)
  {
    return 0.0;
  }
  if (a == inf)
  {
    return normal_cdf(b);
  }
  if (b == inf)
  {
    return normal_cdf(a);
  }
  if (rho == 0.0)
  {
    return normal_cdf(a) * normal_cdf(b);
  }
  return std::clamp(bvn_upper(-a, -b, rho), 0.0, 1.0);
}

}  // namespace anplane::special
