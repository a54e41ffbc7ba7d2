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

#include "anplane/curve_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "anplane/kernels/kernels.hpp"

namespace anplane {

namespace {

double parse_number(std::string const &s, std::string const &what)
{
  std::size_t used = 0;
  double v         = 0.0;
  try
  {
    v = std::stod(s, &used);
  }
  catch (std::exception const &)
  {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v))
  {
    throw InvalidArgument("beta grid: bad " + what + " '" + s + "'");
  }
  return v;
}

struct SegmentArrays
{
  std::vector<double> acc;
  std::vector<double> rate;  // logprob / token_count
};

SegmentArrays arrays_of(SegmentRecord const &seg)
{
  if (seg.candidates.empty())
  {
    throw DataError("segment '" + seg.segment_id + "' has no candidates");
  }
  SegmentArrays a;
  a.acc.reserve(seg.candidates.size());
  a.rate.reserve(seg.candidates.size());
  for (auto const &c : seg.candidates)
  {
    a.acc.push_back(c.accuracy);
    a.rate.push_back(c.logprob / c.token_count);
  }
  return a;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, std::size_t n)
{
  if (!(lo > 0.0) || !(hi >= lo) || n == 0)
  {
    throw InvalidArgument("log grid needs 0 < lo <= hi and n >= 1");
  }
  std::vector<double> out(n);
  if (n == 1)
  {
    out[0] = lo;
    return out;
  }
  double const a = std::log10(lo);
  double const b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i)
  {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back()  = hi;
  return out;
}

std::vector<double> default_beta_grid()
{
  return log_grid(1e-4, 1e4, 50);
}

std::vector<double> parse_beta_grid(std::string const &spec)
{
  if (spec.find(':') != std::string::npos)
  {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':'))
    {
      parts.push_back(tok);
    }
    if (parts.size() != 3)
    {
      throw InvalidArgument("beta grid: expected LO:HI:logN, got '" + spec + "'");
    }
    double const lo        = parse_number(parts[0], "lower bound");
    double const hi        = parse_number(parts[1], "upper bound");
    std::string const mode = parts[2].substr(0, 3);
    if ((mode != "log" && mode != "lin") || parts[2].size() <= 3)
    {
      throw InvalidArgument("beta grid: spacing must be logN or linN, got '" + parts[2] + "'");
    }
    double const nd = parse_number(parts[2].substr(3), "point count");
    if (nd < 1.0 || nd != std::floor(nd) || nd > 1e7)
    {
      throw InvalidArgument("beta grid: point count must be a positive integer");
    }
    auto const n = static_cast<std::size_t>(nd);
    if (mode == "log")
    {
      return log_grid(lo, hi, n);
    }
    if (lo < 0.0 || hi < lo)
    {
      throw InvalidArgument("beta grid needs 0 <= lo <= hi");
    }
    std::vector<double> out(n, lo);
    for (std::size_t i = 1; i < n; ++i)
    {
      out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
  }
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ','))
  {
    double const v = parse_number(tok, "value");
    if (v < 0.0)
    {
      throw InvalidArgument("beta grid: values must be >= 0");
    }
    out.push_back(v);
  }
  if (out.empty())
  {
    throw InvalidArgument("beta grid: empty");
  }
  return out;
}

double pairwise_sum(std::span<const double> v)
{
  if (v.size() <= 8)
  {
    double s = 0.0;
    for (double x : v)
    {
      s += x;
    }
    return s;
  }
  std::size_t const h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

std::size_t oracle_select_index(SegmentRecord const &seg, double beta)
{
  if (!(beta >= 0.0))
  {
    throw InvalidArgument("beta must be >= 0");
  }
  auto const a = arrays_of(seg);
  return kernels::argmax_dual(a.acc, a.rate, beta);
}

CandidateRecord const &oracle_select(SegmentRecord const &seg, double beta)
{
  return seg.candidates[oracle_select_index(seg, beta)];
}

SweepResult sweep_curve(std::span<const SegmentRecord> segments, std::span<const double> betas)
{
  if (segments.empty())
  {
    throw DataError("sweep_curve: empty dataset");
  }
  for (double b : betas)
  {
    if (!(b >= 0.0) || !std::isfinite(b))
    {
      throw InvalidArgument("betas must be finite and >= 0");
    }
  }
  std::vector<SegmentArrays> arrays;
  arrays.reserve(segments.size());
  for (auto const &s : segments)
  {
    arrays.push_back(arrays_of(s));
  }
  SweepResult res;
  res.n_segments = segments.size();
  res.points.reserve(betas.size());
  res.selected.reserve(betas.size());
  std::vector<double> acc(segments.size());
  std::vector<double> nll(segments.size());
  for (double beta : betas)
  {
    std::vector<std::uint32_t> sel(segments.size());
    for (std::size_t s = 0; s < segments.size(); ++s)
    {
      auto const k = kernels::argmax_dual(arrays[s].acc, arrays[s].rate, beta);
      sel[s]       = static_cast<std::uint32_t>(k);
      acc[s]       = arrays[s].acc[k];
      nll[s]       = segments[s].candidates[k].nll_per_token();
    }
    double const n = static_cast<double>(segments.size());
    res.points.push_back({beta, pairwise_sum(acc) / n, pairwise_sum(nll) / n});
    res.selected.push_back(std::move(sel));
  }
  return res;
}

std::vector<SystemPoint> system_points(std::span<const SegmentRecord> segments,
                                       CorpusLppStats const &ref_stats,
                                       std::optional<std::vector<std::string>> const &only)
{
  if (ref_stats.n_texts < 1 || !std::isfinite(ref_stats.mean_lpp))
  {
    throw InvalidArgument("system_points: invalid reference statistics");
  }
  struct Acc
  {
    std::vector<double> acc;
    std::vector<double> nll;
    std::size_t segs = 0;
  };
  std::map<std::string, Acc> by_system;
  for (auto const &seg : segments)
  {
    std::set<std::string> seen;
    for (auto const &c : seg.candidates)
    {
      if (c.system_id.empty())
      {
        continue;
      }
      auto &a = by_system[c.system_id];
      a.acc.push_back(c.accuracy);
      a.nll.push_back(c.nll_per_token());
      if (seen.insert(c.system_id).second)
      {
        ++a.segs;
      }
    }
  }
  if (only)
  {
    for (auto const &id : *only)
    {
      if (!by_system.contains(id))
      {
        throw DataError("unknown system '" + id + "'");
      }
    }
  }
  std::vector<SystemPoint> out;
  for (auto const &[id, a] : by_system)
  {
    if (only && std::find(only->begin(), only->end(), id) == only->end())
    {
      continue;
    }
    SystemPoint p;
    p.system_id     = id;
    double const n  = static_cast<double>(a.acc.size());
    p.mean_accuracy = pairwise_sum(a.acc) / n;
    p.mean_lpp      = pairwise_sum(a.nll) / n;
    p.lpp_distance_to_ref = std::abs(p.mean_lpp - ref_stats.mean_lpp);
    p.n_segments   = a.segs;
    p.n_excluded   = segments.size() - a.segs;
    p.n_candidates = a.acc.size();
    out.push_back(std::move(p));
  }
  return out;
}

DominanceReport dominance_check(SweepResult const &sweep, std::span<const SystemPoint> systems,
                                double tol)
{
  DominanceReport rep;
  if (systems.empty())
  {
    return rep;
  }
  std::vector<OraclePoint> by_nll(sweep.points.begin(), sweep.points.end());
  std::sort(by_nll.begin(), by_nll.end(),
            [](OraclePoint const &a, OraclePoint const &b) { return a.mean_nll < b.mean_nll; });
  for (auto const &sys : systems)
  {
    DominanceEntry e;
    e.system_id          = sys.system_id;
    e.certificate_margin = -std::numeric_limits<double>::infinity();
    for (auto const &pt : sweep.points)
    {
      double const sys_dual   = sys.mean_accuracy - pt.beta * sys.mean_lpp;
      double const curve_dual = pt.accuracy - pt.beta * pt.mean_nll;
      double const m          = sys_dual - curve_dual;
      if (m > e.certificate_margin)
      {
        e.certificate_margin = m;
        e.worst_beta         = pt.beta;
      }
    }
    double const scale = std::max({1.0, std::abs(sys.mean_accuracy), std::abs(sys.mean_lpp)});
    e.violation        = e.certificate_margin > tol * scale;
    if (!by_nll.empty() && sys.mean_lpp >= by_nll.front().mean_nll &&
        sys.mean_lpp <= by_nll.back().mean_nll)
    {
      for (std::size_t i = 0; i + 1 < by_nll.size() || i == 0; ++i)
      {
        auto const &lo = by_nll[i];
        auto const &hi = i + 1 < by_nll.size() ? by_nll[i + 1] : by_nll[i];
        if (sys.mean_lpp <= hi.mean_nll)
        {
          double const w = hi.mean_nll > lo.mean_nll
                               ? (sys.mean_lpp - lo.mean_nll) / (hi.mean_nll - lo.mean_nll)
                               : 0.0;
          double const a = hi.mean_nll > lo.mean_nll ? lo.accuracy + w * (hi.accuracy - lo.accuracy)
                                                     : std::max(lo.accuracy, hi.accuracy);
          e.chord_margin = sys.mean_accuracy - a;
          break;
        }
        if (i + 1 >= by_nll.size())
        {
          break;
        }
      }
    }
    rep.violations += e.violation ? 1 : 0;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace anplane
