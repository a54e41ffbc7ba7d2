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

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "anplane/data_model.hpp"

// Minimal property-testing helpers: seeded generators plus a driver that
// reports the failing case index and seed.
namespace anplane::testing {

using Rng = std::mt19937_64;

template <typename Gen, typename Prop>
void for_all(std::uint64_t seed, int cases, Gen gen, Prop prop)
{
  Rng rng(seed);
  for (int i = 0; i < cases; ++i)
  {
    auto value = gen(rng);
    ::testing::AssertionResult r = prop(value);
    if (!r)
    {
      ADD_FAILURE() << "property failed at case " << i << " (seed " << seed << "): " << r.message();
      return;
    }
  }
}

inline double uniform(Rng &rng, double lo, double hi)
{
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng &rng, int lo, int hi)
{
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::vector<std::string> labels(char prefix, std::size_t n)
{
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i)
  {
    out.push_back(std::string(1, prefix) + std::to_string(i));
  }
  return out;
}

/// Dirichlet(1) draw; with `sparse`, each entry is zeroed with probability 1/4
/// (at least one entry stays positive).
inline std::vector<double> simplex_point(Rng &rng, std::size_t n, bool sparse = false)
{
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> v(n);
  double total = 0.0;
  for (auto &x : v)
  {
    x = g(rng) + 1e-12;
    if (sparse && uniform(rng, 0.0, 1.0) < 0.25)
    {
      x = 0.0;
    }
    total += x;
  }
  if (total == 0.0)
  {
    v[0]  = 1.0;
    total = 1.0;
  }
  for (auto &x : v)
  {
    x /= total;
  }
  return v;
}

inline FiniteDistribution random_distribution(Rng &rng, std::size_t n, bool sparse = false)
{
  return FiniteDistribution(labels('y', n), simplex_point(rng, n, sparse));
}

inline JointInstance random_joint(Rng &rng, std::size_t nx, std::size_t ny)
{
  auto flat = simplex_point(rng, nx * ny);
  std::vector<std::vector<double>> rows(nx);
  for (std::size_t x = 0; x < nx; ++x)
  {
    rows[x].assign(flat.begin() + static_cast<std::ptrdiff_t>(x * ny),
                   flat.begin() + static_cast<std::ptrdiff_t>((x + 1) * ny));
  }
  return JointInstance(labels('x', nx), labels('y', ny), rows);
}

inline DistortionTable random_delta(Rng &rng, std::size_t nx, std::size_t ny, double hi = 1.0)
{
  std::vector<double> v(nx * ny * ny);
  for (auto &x : v)
  {
    x = uniform(rng, 0.0, hi);
  }
  return DistortionTable(nx, ny, v);
}

/// A joint where y is a function of x.
inline JointInstance deterministic_joint(Rng &rng, std::size_t nx, std::size_t ny)
{
  auto px = simplex_point(rng, nx);
  std::vector<std::vector<double>> rows(nx, std::vector<double>(ny, 0.0));
  for (std::size_t x = 0; x < nx; ++x)
  {
    rows[x][static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(ny) - 1))] = px[x];
  }
  return JointInstance(labels('x', nx), labels('y', ny), rows);
}

/// Segments with `ncand` candidates each; system ids "s0".."s{ncand-1}" by
/// column so every column is a complete system.
inline std::vector<SegmentRecord> random_pool(Rng &rng, std::size_t nseg, std::size_t ncand)
{
  std::vector<SegmentRecord> segs;
  for (std::size_t s = 0; s < nseg; ++s)
  {
    SegmentRecord seg;
    seg.segment_id = "seg" + std::to_string(s);
    for (std::size_t k = 0; k < ncand; ++k)
    {
      CandidateRecord c;
      c.text        = "t" + std::to_string(s) + "_" + std::to_string(k);
      c.system_id   = "s" + std::to_string(k);
      c.accuracy    = uniform(rng, 0.0, 1.0);
      c.token_count = uniform_int(rng, 1, 30);
      c.logprob     = -uniform(rng, 0.2, 5.0) * c.token_count;
      seg.candidates.push_back(std::move(c));
    }
    segs.push_back(std::move(seg));
  }
  return segs;
}

template <typename T>
std::string show(std::vector<T> const &v)
{
  std::ostringstream o;
  o << "[";
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    o << (i ? ", " : "") << v[i];
  }
  o << "]";
  return o.str();
}

}  // namespace anplane::testing
