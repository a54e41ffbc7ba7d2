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

#include "anplane/selfcheck.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "anplane/critic_processes.hpp"
#include "anplane/curve_sweep.hpp"
#include "anplane/divergences.hpp"
#include "anplane/frontier.hpp"
#include "anplane/kernels/kernels.hpp"
#include "anplane/mqm.hpp"
#include "anplane/report.hpp"
#include "anplane/special_functions.hpp"

namespace anplane {

namespace {

std::string num(double v)
{
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

CheckResult check(std::string name, std::function<std::pair<bool, std::string>()> const &fn)
{
  CheckResult r;
  r.name = std::move(name);
  try
  {
    auto [ok, detail] = fn();
    r.passed          = ok;
    r.detail          = std::move(detail);
  }
  catch (std::exception const &e)
  {
    r.passed = false;
    r.detail = std::string("threw: ") + e.what();
  }
  return r;
}

JointInstance random_joint(std::mt19937_64 &rng, std::size_t nx, std::size_t ny)
{
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<std::vector<double>> rows(nx, std::vector<double>(ny));
  double total = 0.0;
  for (auto &row : rows)
  {
    for (double &v : row)
    {
      v = g(rng) + 1e-3;
      total += v;
    }
  }
  std::vector<std::string> xs, ys;
  for (std::size_t i = 0; i < nx; ++i)
  {
    xs.push_back("x" + std::to_string(i));
    for (double &v : rows[i])
    {
      v /= total;
    }
  }
  for (std::size_t j = 0; j < ny; ++j)
  {
    ys.push_back("y" + std::to_string(j));
  }
  return JointInstance(xs, ys, rows, 1e-9);
}

SegmentRecord fixture_segment(std::string id)
{
  SegmentRecord s;
  s.segment_id = std::move(id);
  s.candidates.push_back({"a", "sysA", 0.8, -3.0, 1});
  s.candidates.push_back({"b", "sysB", 0.6, -1.0, 1});
  return s;
}

}  // namespace

std::vector<CheckResult> run_selfcheck(std::uint64_t seed)
{
  std::vector<CheckResult> out;
  std::mt19937_64 rng(derive_seed(seed, 1));

  out.push_back(check("oracle-select-dual", [] {
    auto const s = fixture_segment("s0");
    bool const ok = oracle_select_index(s, 0.05) == 0 && oracle_select_index(s, 0.2) == 1 &&
                    oracle_select_index(s, 0.0) == 0;
    return std::pair{ok, std::string()};
  }));

  out.push_back(check("sweep-monotone", [&] {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<SegmentRecord> segs;
    for (int i = 0; i < 20; ++i)
    {
      SegmentRecord s;
      s.segment_id = "s" + std::to_string(i);
      for (int k = 0; k < 6; ++k)
      {
        s.candidates.push_back({"", "", u(rng), -20.0 * u(rng), 1 + static_cast<int>(10 * u(rng))});
      }
      segs.push_back(std::move(s));
    }
    auto const res = sweep_curve(segs, default_beta_grid());
    bool ok        = true;
    for (std::size_t i = 1; i < res.points.size(); ++i)
    {
      ok = ok && res.points[i].mean_nll <= res.points[i - 1].mean_nll + 1e-12 &&
           res.points[i].accuracy <= res.points[i - 1].accuracy + 1e-12;
    }
    return std::pair{ok, std::string()};
  }));

  out.push_back(check("tv-frontier-shape", [&] {
    auto const inst  = random_joint(rng, 2, 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> d(2 * 3 * 3);
    for (double &v : d)
    {
      v = u(rng);
    }
    DistortionTable const delta(2, 3, d);
    auto const r  = FiniteDistribution::from_probs({0.2, 0.3, 0.5});
    auto const fr = scalarization_frontier(inst, delta, r, FrontierDivergence::tv(),
                                           log_grid(1e-3, 1e3, 40));
    auto const rep = verify_an_properties(fr, 1e-6);
    return std::pair{rep.passed(), "worst concavity " + num(rep.worst_concavity)};
  }));

  out.push_back(check("frontier-vs-grid", [&] {
    auto const inst = random_joint(rng, 1, 3);
    DistortionTable const delta = DistortionTable::exact_match(1, 3);
    auto const r   = FiniteDistribution::from_probs({0.5, 0.3, 0.2});
    auto const fr  = scalarization_frontier(inst, delta, r, FrontierDivergence::tv(),
                                            log_grid(1e-3, 1e3, 30));
    std::size_t const res = 60;
    auto const bf  = brute_force_frontier(inst, delta, r, FrontierDivergence::tv(), res);
    double const slack = 2.0 / res + 1e-6;
    double worst       = 0.0;
    for (auto const &p : fr.points)
    {
      worst = std::max(worst, frontier_accuracy_at(bf.points, p.naturalness) - p.accuracy);
      worst = std::max(worst, p.accuracy - frontier_accuracy_at(bf.points, p.naturalness - slack));
    }
    return std::pair{worst <= slack, "worst gap " + num(worst)};
  }));

  out.push_back(check("dp-closed-form", [] {
    double const s = 0.7, m = 0.4;
    double const d2 = dp_gaussian_closed_form(s, m, 2.0);
    double const d1 = dp_gaussian_closed_form(s, m, 1.0);
    bool const ok   = std::abs(d2 - std::sqrt(s * s + m * m)) < 1e-10 &&
                    std::abs(d1 - d1_gaussian_closed_form(s, m)) < 1e-10;
    return std::pair{ok, std::string()};
  }));

  out.push_back(check("bvn-orthant", [] {
    double worst = 0.0;
    for (double rho : {-0.9, -0.3, 0.0, 0.5, 0.95})
    {
      double const want = 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
      worst = std::max(worst, std::abs(special::bivariate_normal_cdf(0.0, 0.0, rho) - want));
    }
    return std::pair{worst < 1e-12, "worst " + num(worst)};
  }));

  out.push_back(check("simd-equivalence", [&] {
    if (!kernels::isa_supported(kernels::Isa::kAvx2))
    {
      return std::pair{true, std::string("avx2 unavailable, skipped")};
    }
#if defined(ANPLANE_HAVE_AVX2)
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> acc(37), rate(37);
    for (std::size_t i = 0; i < acc.size(); ++i)
    {
      acc[i]  = u(rng);
      rate[i] = u(rng);
    }
    bool ok = true;
    for (double beta : {0.0, 0.3, 7.0})
    {
      ok = ok && kernels::scalar::argmax_dual(acc, rate, beta) ==
                     kernels::avx2::argmax_dual(acc, rate, beta);
    }
    kernels::PairKernelSpec const k{kernels::PairKernel::kRbf, 0.5};
    double const a = kernels::scalar::pair_sum(k, acc, rate);
    double const b = kernels::avx2::pair_sum(k, acc, rate);
    ok = ok && std::abs(a - b) <= 1e-12 * std::abs(a);
    return std::pair{ok, std::string()};
#else
    return std::pair{true, std::string()};
#endif
  }));

  out.push_back(check("mqm-split", [] {
    std::vector<mqm::Annotation> anns = {
        {"sys", "d", "1", "r1", "Accuracy/Omission", mqm::Severity::kMajor},
        {"sys", "d", "1", "r1", "Fluency/Grammar", mqm::Severity::kMinor},
    };
    auto w = mqm::SeverityWeights();
    w.set(mqm::Severity::kMajor, 5.0);
    w.set(mqm::Severity::kMinor, 1.0);
    auto const tax = mqm::ErrorTaxonomy::ende_jazh();
    auto const a   = mqm::score_dimension(anns, tax, w, mqm::Dimension::kAccuracy);
    auto const f   = mqm::score_dimension(anns, tax, w, mqm::Dimension::kFluency);
    bool const ok  = a.systems.size() == 1 && a.systems[0].score == -5.0 &&
                    f.systems[0].score == -1.0;
    return std::pair{ok, std::string()};
  }));

  out.push_back(check("risk-chain", [&] {
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> p(40), q(40);
    for (auto &v : p)
    {
      v = n(rng);
    }
    for (auto &v : q)
    {
      v = n(rng) + 0.5;
    }
    CriticProcess proc;
    proc.kernel    = Kernel::rbf(1.0);
    auto const rep = classification_risk_check(0.3, gp_critic_draw(proc), p, q, 200, 7);
    return std::pair{rep.chain_holds(), std::string()};
  }));

  out.push_back(check("no-two-birds", [] {
    JointInstance const inst({"x"}, {"y1", "y2"}, {{0.75, 0.25}});
    auto const rep = no_two_birds_demo(inst, DistortionTable::exact_match(1, 2));
    bool const ok  = std::abs(rep.tv_to_reference - 0.25) < 1e-12 && rep.not_distribution_preserving;
    return std::pair{ok, std::string()};
  }));

  out.push_back(check("csv-determinism", [] {
    std::vector<SegmentRecord> segs = {fixture_segment("a"), fixture_segment("b")};
    auto const r1 = report::curve_csv(sweep_curve(segs, default_beta_grid()));
    auto const r2 = report::curve_csv(sweep_curve(segs, default_beta_grid()));
    return std::pair{r1 == r2, std::string()};
  }));

  return out;
}

}  // namespace anplane
