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

#include "anplane/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>

#include "anplane/critic_processes.hpp"
#include "anplane/kernels/kernels.hpp"
#include "anplane/lp.hpp"

namespace anplane {

namespace {


std::vector<std::string> to_vec(std::span<const std::string> s)
{
  return {s.begin(), s.end()};
}

void check_shapes(JointInstance const &inst, DistortionTable const &delta,
                  FiniteDistribution const &r_y)
{
  if (delta.nx() != inst.nx() || delta.ny() != inst.ny())
  {
    throw InvalidArgument("distortion table shape does not match the instance");
  }
  if (r_y.size() != inst.ny())
  {
    throw InvalidArgument("reference marginal size does not match |Y|");
  }
}

// w[x][y] = -Σ_yr P(x, yr) Δ(x, yr, y), so that A(Q) = Σ Q(y|x) w[x][y].
std::vector<double> accuracy_weights(JointInstance const &inst, DistortionTable const &delta)
{
  std::size_t const nx = inst.nx();
  std::size_t const ny = inst.ny();
  std::vector<double> w(nx * ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
  {
    for (std::size_t yc = 0; yc < ny; ++yc)
    {
      double s = 0.0;
      for (std::size_t yr = 0; yr < ny; ++yr)
      {
        s += inst(x, yr) * delta(x, yr, yc);
      }
      w[x * ny + yc] = -s;
    }
  }
  return w;
}

std::vector<double> marginal_of(std::span<const double> rows, std::span<const double> px,
                                std::size_t ny)
{
  std::vector<double> m(ny, 0.0);
  for (std::size_t x = 0; x < px.size(); ++x)
  {
    for (std::size_t y = 0; y < ny; ++y)
    {
      m[y] += px[x] * rows[x * ny + y];
    }
  }
  return m;
}

double dot(std::span<const double> a, std::span<const double> b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    s += a[i] * b[i];
  }
  return s;
}

ConditionalSystem make_system(JointInstance const &inst, std::vector<double> const &flat)
{
  std::size_t const ny = inst.ny();
  std::vector<std::vector<double>> rows(inst.nx());
  for (std::size_t x = 0; x < inst.nx(); ++x)
  {
    rows[x].assign(flat.begin() + static_cast<std::ptrdiff_t>(x * ny),
                   flat.begin() + static_cast<std::ptrdiff_t>((x + 1) * ny));
    // renormalise away rounding so the constructor's check is never tripped
    double s = 0.0;
    for (double v : rows[x])
    {
      s += v;
    }
    for (double &v : rows[x])
    {
      v = std::max(0.0, v / s);
    }
  }
  return ConditionalSystem(to_vec(inst.x_labels()), to_vec(inst.y_labels()), std::move(rows),
                           1e-6);
}

void dedupe_sorted(std::vector<CurvePoint> &pts)
{
  std::sort(pts.begin(), pts.end(), [](CurvePoint const &a, CurvePoint const &b) {
    if (a.naturalness != b.naturalness)
    {
      return a.naturalness < b.naturalness;
    }
    return a.accuracy > b.accuracy;
  });
  std::vector<CurvePoint> out;
  for (auto const &p : pts)
  {
    if (!out.empty() && std::abs(p.naturalness - out.back().naturalness) <= 1e-12)
    {
      if (p.accuracy > out.back().accuracy)
      {
        out.back() = p;
      }
      continue;
    }
    out.push_back(p);
  }
  pts = std::move(out);
}

// TV scalarisation as an LP over Q(y|x) for rows with P_x > 0 and slack pairs
// s+_y, s-_y with Σ_x P_x Q(y|x) - s+_y + s-_y = r_y.
SweepPoint solve_tv(JointInstance const &inst, std::vector<double> const &w,
                    std::span<const double> px, std::span<const double> r, double beta)
{
  std::size_t const nx = inst.nx();
  std::size_t const ny = inst.ny();
  std::vector<std::size_t> active;
  for (std::size_t x = 0; x < nx; ++x)
  {
    if (px[x] > 0.0)
    {
      active.push_back(x);
    }
  }
  auto const na    = active.size();
  auto const nq    = na * ny;
  auto const nvars = static_cast<Eigen::Index>(nq + 2 * ny);
  auto const ncons = static_cast<Eigen::Index>(na + ny);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ncons, nvars);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(ncons);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nvars);
  for (std::size_t i = 0; i < na; ++i)
  {
    for (std::size_t y = 0; y < ny; ++y)
    {
      auto const col = static_cast<Eigen::Index>(i * ny + y);
      a(static_cast<Eigen::Index>(i), col) = 1.0;
      a(static_cast<Eigen::Index>(na + y), col) = px[active[i]];
      c(col) = w[active[i] * ny + y];
    }
    b(static_cast<Eigen::Index>(i)) = 1.0;
  }
  for (std::size_t y = 0; y < ny; ++y)
  {
    auto const row = static_cast<Eigen::Index>(na + y);
    auto const sp  = static_cast<Eigen::Index>(nq + y);
    auto const sm  = static_cast<Eigen::Index>(nq + ny + y);
    a(row, sp) = -1.0;
    a(row, sm) = 1.0;
    b(row)     = r[y];
    c(sp)      = -0.5 * beta;
    c(sm)      = -0.5 * beta;
  }

  auto res = lp::maximize(a, b, c);
  if (res.status != lp::Status::kOptimal)
  {
    throw InvalidArgument("TV scalarisation LP did not reach an optimum");
  }
  std::size_t pivots = res.pivots;
  if (beta == 0.0)
  {
    // keep accuracy at its optimum and minimise TV among those systems
    double const best = res.objective;
    Eigen::MatrixXd a2(ncons + 1, nvars + 1);
    a2.setZero();
    a2.topLeftCorner(ncons, nvars) = a;
    a2.row(ncons).head(nvars)      = c.transpose();
    a2(ncons, nvars)               = -1.0;  // surplus
    Eigen::VectorXd b2(ncons + 1);
    b2.head(ncons) = b;
    b2(ncons)      = best - 1e-12 * std::max(1.0, std::abs(best));
    Eigen::VectorXd c2 = Eigen::VectorXd::Zero(nvars + 1);
    for (std::size_t y = 0; y < 2 * ny; ++y)
    {
      c2(static_cast<Eigen::Index>(nq + y)) = -0.5;
    }
    auto res2 = lp::maximize(a2, b2, c2);
    if (res2.status == lp::Status::kOptimal)
    {
      res.x = res2.x.head(nvars);
      pivots += res2.pivots;
    }
  }

  std::vector<double> flat(nx * ny, 1.0 / static_cast<double>(ny));
  for (std::size_t i = 0; i < na; ++i)
  {
    for (std::size_t y = 0; y < ny; ++y)
    {
      flat[active[i] * ny + y] = res.x(static_cast<Eigen::Index>(i * ny + y));
    }
  }
  ConditionalSystem sys = make_system(inst, flat);
  std::vector<double> clean(nx * ny);
  for (std::size_t x = 0; x < nx; ++x)
  {
    std::copy(sys.row(x).begin(), sys.row(x).end(), clean.begin() + static_cast<std::ptrdiff_t>(x * ny));
  }
  auto const m = marginal_of(clean, px, ny);
  double tv    = 0.0;
  for (std::size_t y = 0; y < ny; ++y)
  {
    tv += std::abs(m[y] - r[y]);
  }
  tv *= 0.5;
  SweepPoint sp;
  sp.point.accuracy    = dot(clean, w);
  sp.point.naturalness = -tv;
  sp.point.beta        = beta;
  sp.objective         = sp.point.accuracy - beta * tv;
  sp.iterations        = pivots;
  sp.converged         = true;
  sp.system            = std::move(sys);
  return sp;
}

// Smooth surrogate minimised by exponentiated gradient: KL itself, or D2^2.
struct SmoothDivergence
{
  DivergenceFamily family;
  Eigen::MatrixXd const *kernel;
  std::span<const double> r;

  double value(std::span<const double> q) const
  {
    if (family == DivergenceFamily::kKL)
    {
      double s = 0.0;
      for (std::size_t y = 0; y < q.size(); ++y)
      {
        if (q[y] > 0.0)
        {
          s += q[y] * std::log(q[y] / r[y]);
        }
      }
      return std::max(0.0, s);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
    {
      for (std::size_t j = 0; j < q.size(); ++j)
      {
        s += (q[i] - r[i]) * (*kernel)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
             (q[j] - r[j]);
      }
    }
    return std::max(0.0, s);
  }

  void gradient(std::span<const double> q, std::vector<double> &g) const
  {
    std::size_t const n = q.size();
    g.assign(n, 0.0);
    if (family == DivergenceFamily::kKL)
    {
      for (std::size_t y = 0; y < n; ++y)
      {
        g[y] = std::log(std::max(q[y], 1e-300) / r[y]) + 1.0;
      }
      return;
    }
    for (std::size_t i = 0; i < n; ++i)
    {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j)
      {
        s += (*kernel)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * (q[j] - r[j]);
      }
      g[i] = 2.0 * s;
    }
  }

  // naturalness is reported on the distance scale
  double reported(double v) const { return family == DivergenceFamily::kKL ? v : std::sqrt(v); }
};

// Best accuracy among systems with the given marginal, as an LP over the rows
// with P_x > 0. The last marginal row is implied by the row sums and is dropped.
std::optional<std::vector<double>> best_with_marginal(std::vector<double> const &w,
                                                      std::span<const double> px,
                                                      std::span<const double> m,
                                                      std::size_t nx, std::size_t ny)
{
  std::vector<std::size_t> active;
  for (std::size_t x = 0; x < nx; ++x)
  {
    if (px[x] > 0.0)
    {
      active.push_back(x);
    }
  }
  if (ny < 2 || active.empty())
  {
    return std::nullopt;
  }
  auto const na    = active.size();
  auto const ncons = static_cast<Eigen::Index>(na + ny - 1);
  auto const nvars = static_cast<Eigen::Index>(na * ny);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ncons, nvars);
  Eigen::VectorXd b(ncons);
  Eigen::VectorXd c(nvars);
  for (std::size_t i = 0; i < na; ++i)
  {
    for (std::size_t y = 0; y < ny; ++y)
    {
      auto const col = static_cast<Eigen::Index>(i * ny + y);
      a(static_cast<Eigen::Index>(i), col) = 1.0;
      if (y + 1 < ny)
      {
        a(static_cast<Eigen::Index>(na + y), col) = px[active[i]];
      }
      c(col) = w[active[i] * ny + y];
    }
    b(static_cast<Eigen::Index>(i)) = 1.0;
  }
  for (std::size_t y = 0; y + 1 < ny; ++y)
  {
    b(static_cast<Eigen::Index>(na + y)) = m[y];
  }
  auto res = lp::maximize(a, b, c);
  if (res.status != lp::Status::kOptimal)
  {
    return std::nullopt;
  }
  std::vector<double> q(nx * ny, 1.0 / static_cast<double>(ny));
  for (std::size_t i = 0; i < na; ++i)
  {
    double s = 0.0;
    for (std::size_t y = 0; y < ny; ++y)
    {
      s += std::max(0.0, res.x(static_cast<Eigen::Index>(i * ny + y)));
    }
    for (std::size_t y = 0; y < ny; ++y)
    {
      q[active[i] * ny + y] = std::max(0.0, res.x(static_cast<Eigen::Index>(i * ny + y))) / s;
    }
  }
  return q;
}

struct EgState
{
  std::vector<double> logits;
  std::vector<double> q;
  std::vector<double> marginal;
  double objective = 0.0;
};

// mask, when non-empty, pins the excluded entries at zero probability
void softmax_rows(EgState &s, std::size_t nx, std::size_t ny, std::vector<char> const &mask)
{
  for (std::size_t x = 0; x < nx; ++x)
  {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < ny; ++y)
    {
      if (mask.empty() || mask[x * ny + y])
      {
        mx = std::max(mx, s.logits[x * ny + y]);
      }
    }
    double z = 0.0;
    for (std::size_t y = 0; y < ny; ++y)
    {
      bool const on  = mask.empty() || mask[x * ny + y];
      double const e = on ? std::exp(s.logits[x * ny + y] - mx) : 0.0;
      s.q[x * ny + y] = e;
      z += e;
    }
    for (std::size_t y = 0; y < ny; ++y)
    {
      s.q[x * ny + y] /= z;
      // keep logits bounded relative to the row maximum
      s.logits[x * ny + y] = std::max(s.logits[x * ny + y] - mx, -745.0);
    }
  }
}

SweepPoint solve_eg(JointInstance const &inst, std::vector<double> const &w,
                    std::span<const double> px, SmoothDivergence const &div, double beta,
                    std::size_t beta_index, ScalarizationOptions const &opt)
{
  std::size_t const nx = inst.nx();
  std::size_t const ny = inst.ny();
  double const weight  = beta == 0.0 ? 1.0 : beta;

  // beta = 0: restrict each row to its accuracy maximisers, then minimise the
  // divergence on that face
  std::vector<char> mask;
  if (beta == 0.0)
  {
    mask.assign(nx * ny, 1);
    for (std::size_t x = 0; x < nx; ++x)
    {
      if (px[x] <= 0.0)
      {
        continue;
      }
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t y = 0; y < ny; ++y)
      {
        mx = std::max(mx, w[x * ny + y] / px[x]);
      }
      double const cut = mx - 1e-12 * std::max(1.0, std::abs(mx));
      for (std::size_t y = 0; y < ny; ++y)
      {
        mask[x * ny + y] = w[x * ny + y] / px[x] >= cut ? 1 : 0;
      }
    }
  }

  auto evaluate = [&](EgState &s) {
    softmax_rows(s, nx, ny, mask);
    s.marginal  = marginal_of(s.q, px, ny);
    s.objective = dot(s.q, w) - weight * div.value(s.marginal);
  };

  SweepPoint best;
  best.objective = -std::numeric_limits<double>::infinity();
  std::vector<double> grad;
  std::size_t const restarts = std::max<std::size_t>(1, opt.restarts);
  for (std::size_t r = 0; r < restarts; ++r)
  {
    EgState s;
    s.logits.assign(nx * ny, 0.0);
    s.q.assign(nx * ny, 0.0);
    if (r > 0)
    {
      std::mt19937_64 rng(derive_seed(opt.seed, beta_index * 1000003ULL + r));
      std::normal_distribution<double> normal(0.0, 1.0);
      for (double &l : s.logits)
      {
        l = normal(rng);
      }
    }
    evaluate(s);

    double step = 0.1 / (1.0 + beta);
    std::vector<double> history{s.objective};
    std::size_t it  = 0;
    bool converged  = false;
    EgState trial   = s;
    while (it < opt.max_iterations)
    {
      ++it;
      div.gradient(s.marginal, grad);
      for (std::size_t x = 0; x < nx; ++x)
      {
        if (px[x] <= 0.0)
        {
          continue;
        }
        for (std::size_t y = 0; y < ny; ++y)
        {
          double const g = w[x * ny + y] / px[x] - weight * grad[y];
          trial.logits[x * ny + y] = s.logits[x * ny + y] + step * g;
        }
      }
      evaluate(trial);
      if (trial.objective >= s.objective)
      {
        std::swap(s, trial);
        step *= 1.1;
      }
      else
      {
        step *= 0.5;
        trial.logits = s.logits;
      }
      history.push_back(s.objective);
      if (history.size() > opt.window &&
          history.back() - history[history.size() - 1 - opt.window] < opt.tolerance)
      {
        converged = true;
        break;
      }
      if (step < 1e-300)
      {
        converged = true;
        break;
      }
    }
    // EG is slow along systems that share a marginal; finish that part exactly
    if (auto q = best_with_marginal(w, px, s.marginal, nx, ny))
    {
      auto m          = marginal_of(*q, px, ny);
      double const ob = dot(*q, w) - weight * div.value(m);
      if (ob >= s.objective)
      {
        s.q         = std::move(*q);
        s.marginal  = std::move(m);
        s.objective = ob;
      }
    }
    if (s.objective > best.objective)
    {
      best.objective  = s.objective;
      best.iterations = it;
      best.converged  = converged;
      best.system     = make_system(inst, s.q);
      best.point.accuracy    = dot(s.q, w);
      best.point.naturalness = -div.reported(div.value(s.marginal));
      best.point.beta        = beta;
    }
  }
  if (beta == 0.0)
  {
    best.objective = best.point.accuracy;
  }
  return best;
}

}  // namespace

FrontierDivergence FrontierDivergence::d2(Eigen::MatrixXd kernel)
{
  check_psd(kernel);
  return {DivergenceFamily::kD2, std::move(kernel)};
}

FrontierDivergence divergence_for(std::string const &kind, InstanceBundle const &bundle)
{
  if (kind == "tv")
  {
    return FrontierDivergence::tv();
  }
  if (kind == "kl")
  {
    return FrontierDivergence::kl();
  }
  if (kind != "d2")
  {
    throw InvalidArgument("divergence must be tv, kl or d2, got '" + kind + "'");
  }
  auto const ny = static_cast<Eigen::Index>(bundle.joint.ny());
  if (bundle.kernel_table)
  {
    auto const &t = *bundle.kernel_table;
    if (static_cast<Eigen::Index>(t.size()) != ny)
    {
      throw DataError("kernel table must be |Y| x |Y|");
    }
    Eigen::MatrixXd c(ny, ny);
    for (Eigen::Index i = 0; i < ny; ++i)
    {
      if (static_cast<Eigen::Index>(t[static_cast<std::size_t>(i)].size()) != ny)
      {
        throw DataError("kernel table must be |Y| x |Y|");
      }
      for (Eigen::Index j = 0; j < ny; ++j)
      {
        c(i, j) = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    }
    return FrontierDivergence::d2(std::move(c));
  }
  if (!bundle.kernel_preset)
  {
    throw DataError("d2 divergence needs a 'kernel' entry in the instance file");
  }
  std::vector<double> pts;
  if (bundle.points)
  {
    pts = *bundle.points;
    if (static_cast<Eigen::Index>(pts.size()) != ny)
    {
      throw DataError("'points' must have one entry per y label");
    }
  }
  else
  {
    for (Eigen::Index i = 0; i < ny; ++i)
    {
      pts.push_back(static_cast<double>(i));
    }
  }
  return FrontierDivergence::d2(Kernel::parse(*bundle.kernel_preset).gram(pts));
}

double FrontierDivergence::operator()(std::span<const double> q, std::span<const double> r) const
{
  if (q.size() != r.size())
  {
    throw InvalidArgument("divergence: size mismatch");
  }
  switch (family)
  {
  case DivergenceFamily::kTV:
  {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
    {
      s += std::abs(q[i] - r[i]);
    }
    return 0.5 * s;
  }
  case DivergenceFamily::kKL:
  {
    SmoothDivergence d{family, nullptr, r};
    for (std::size_t i = 0; i < q.size(); ++i)
    {
      if (q[i] > 0.0 && r[i] <= 0.0)
      {
        return std::numeric_limits<double>::infinity();
      }
    }
    return d.value(q);
  }
  case DivergenceFamily::kD2:
  {
    SmoothDivergence d{family, &kernel, r};
    return std::sqrt(d.value(q));
  }
  default:
    throw InvalidArgument("frontier divergence must be tv, kl or d2");
  }
}

double system_accuracy(ConditionalSystem const &q, JointInstance const &inst,
                       DistortionTable const &delta)
{
  q.check_matches(inst);
  if (delta.nx() != inst.nx() || delta.ny() != inst.ny())
  {
    throw InvalidArgument("distortion table shape does not match the instance");
  }
  double total = 0.0;
  for (std::size_t x = 0; x < inst.nx(); ++x)
  {
    for (std::size_t yr = 0; yr < inst.ny(); ++yr)
    {
      double const pxy = inst(x, yr);
      if (pxy == 0.0)
      {
        continue;
      }
      double row = 0.0;
      for (std::size_t yc = 0; yc < inst.ny(); ++yc)
      {
        row += q(x, yc) * delta(x, yr, yc);
      }
      total += pxy * row;
    }
  }
  return -total;
}

FiniteDistribution system_marginal(ConditionalSystem const &q, FiniteDistribution const &p_x)
{
  if (p_x.size() != q.nx())
  {
    throw InvalidArgument("source marginal size does not match the system");
  }
  std::vector<double> m(q.ny(), 0.0);
  for (std::size_t x = 0; x < q.nx(); ++x)
  {
    for (std::size_t y = 0; y < q.ny(); ++y)
    {
      m[y] += p_x[x] * q(x, y);
    }
  }
  return FiniteDistribution(to_vec(q.y_labels()), std::move(m), 1e-6);
}

double conditional_entropy(JointInstance const &inst)
{
  auto const px = inst.marginal_x();
  double h      = 0.0;
  for (std::size_t x = 0; x < inst.nx(); ++x)
  {
    for (std::size_t y = 0; y < inst.ny(); ++y)
    {
      double const pxy = inst(x, y);
      if (pxy > 0.0)
      {
        h -= pxy * std::log(pxy / px[x]);
      }
    }
  }
  return std::max(0.0, h);
}

FrontierResult scalarization_frontier(JointInstance const &inst, DistortionTable const &delta,
                                      FiniteDistribution const &r_y,
                                      FrontierDivergence const &divergence,
                                      std::span<const double> betas,
                                      ScalarizationOptions const &options)
{
  check_shapes(inst, delta, r_y);
  for (double b : betas)
  {
    if (!(b >= 0.0) || !std::isfinite(b))
    {
      throw InvalidArgument("betas must be finite and >= 0");
    }
  }
  if (divergence.family == DivergenceFamily::kKL)
  {
    for (double v : r_y.probs())
    {
      if (v <= 0.0)
      {
        throw InvalidArgument("KL frontier requires a strictly positive reference marginal");
      }
    }
  }
  if (divergence.family == DivergenceFamily::kD2 &&
      (divergence.kernel.rows() != static_cast<Eigen::Index>(inst.ny()) ||
       divergence.kernel.cols() != static_cast<Eigen::Index>(inst.ny())))
  {
    throw InvalidArgument("D2 kernel must be |Y| x |Y|");
  }

  auto const w  = accuracy_weights(inst, delta);
  auto const pm = inst.marginal_x();
  auto const px = pm.probs();
  auto const r  = r_y.probs();

  FrontierResult fr;
  fr.solver = FrontierSolver::kScalarization;
  fr.family = divergence.family;
  fr.sweep.reserve(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i)
  {
    switch (divergence.family)
    {
    case DivergenceFamily::kTV:
      fr.sweep.push_back(solve_tv(inst, w, px, r, betas[i]));
      break;
    case DivergenceFamily::kKL:
    case DivergenceFamily::kD2:
    {
      SmoothDivergence d{divergence.family, &divergence.kernel, r};
      fr.sweep.push_back(solve_eg(inst, w, px, d, betas[i], i, options));
      break;
    }
    default:
      throw InvalidArgument("frontier divergence must be tv, kl or d2");
    }
  }
  for (auto const &s : fr.sweep)
  {
    fr.points.push_back(s.point);
  }
  dedupe_sorted(fr.points);
  return fr;
}

namespace {

// Advances a composition of `total` into counts.size() parts in the order
// simplex_grid enumerates them; false when `counts` was the last one.
bool next_composition(std::vector<std::size_t> &counts, std::size_t total)
{
  std::size_t const last = counts.size() - 1;
  std::size_t j          = last;
  while (j > 0 && counts[j] == 0)
  {
    --j;
  }
  if (j == 0)
  {
    return false;
  }
  std::size_t const p = j - 1;
  ++counts[p];
  std::size_t used = 0;
  for (std::size_t k = 0; k <= p; ++k)
  {
    used += counts[k];
  }
  for (std::size_t k = p + 1; k < last; ++k)
  {
    counts[k] = 0;
  }
  counts[last] = total - used;
  return true;
}

std::size_t grid_size(std::size_t ny, std::size_t resolution)
{
  // C(resolution + ny - 1, ny - 1), saturating
  double v = 1.0;
  for (std::size_t k = 1; k < ny; ++k)
  {
    v = v * static_cast<double>(resolution + k) / static_cast<double>(k);
  }
  return v > 1e18 ? static_cast<std::size_t>(1e18) : static_cast<std::size_t>(std::llround(v));
}

}  // namespace

std::vector<std::vector<double>> simplex_grid(std::size_t ny, std::size_t resolution)
{
  if (ny == 0 || resolution == 0)
  {
    throw InvalidArgument("simplex grid needs |Y| >= 1 and resolution >= 1");
  }
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> counts(ny, 0);
  double const inv = 1.0 / static_cast<double>(resolution);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
    if (pos + 1 == ny)
    {
      counts[pos] = left;
      std::vector<double> row(ny);
      for (std::size_t y = 0; y < ny; ++y)
      {
        row[y] = static_cast<double>(counts[y]) * inv;
      }
      out.push_back(std::move(row));
      return;
    }
    for (std::size_t k = 0; k <= left; ++k)
    {
      counts[pos] = k;
      rec(pos + 1, left - k);
    }
  };
  rec(0, resolution);
  return out;
}

FrontierResult brute_force_frontier(JointInstance const &inst, DistortionTable const &delta,
                                    FiniteDistribution const &r_y,
                                    FrontierDivergence const &divergence, std::size_t resolution)
{
  check_shapes(inst, delta, r_y);
  std::size_t const nx = inst.nx();
  std::size_t const ny = inst.ny();
  if (nx * (ny - 1) > 6)
  {
    throw InvalidArgument("instance too large for the grid: |X|(|Y|-1) = " +
                          std::to_string(nx * (ny - 1)) + " > 6");
  }
  if (divergence.family != DivergenceFamily::kTV && divergence.family != DivergenceFamily::kKL &&
      divergence.family != DivergenceFamily::kD2)
  {
    throw InvalidArgument("frontier divergence must be tv, kl or d2");
  }
  if (resolution == 0)
  {
    throw InvalidArgument("grid resolution must be >= 1");
  }
  auto const w  = accuracy_weights(inst, delta);
  auto const pm = inst.marginal_x();
  auto const r  = r_y.probs();

  std::vector<std::size_t> active;
  for (std::size_t x = 0; x < nx; ++x)
  {
    if (pm[x] > 0.0)
    {
      active.push_back(x);
    }
  }
  std::size_t const na = active.size();

  double n_lo = -1.0;
  if (divergence.family == DivergenceFamily::kKL)
  {
    double rmin = 1.0;
    for (double v : r)
    {
      rmin = std::min(rmin, v);
    }
    n_lo = rmin > 0.0 ? std::log(rmin) : -1e300;
  }
  else if (divergence.family == DivergenceFamily::kD2)
  {
    n_lo = -2.0 * std::sqrt(std::max(divergence.kernel.cwiseAbs().maxCoeff(), 0.0));
  }
  std::size_t const buckets =
      std::max<std::size_t>(1024, static_cast<std::size_t>(std::ceil(std::min(std::abs(n_lo), 1e3) * 16.0 *
                                                                      static_cast<double>(resolution))));
  double const width = n_lo < 0.0 && n_lo > -1e299 ? -n_lo / static_cast<double>(buckets) : 0.0;
  std::vector<CurvePoint> best(buckets + 1,
                               CurvePoint{0.0, -std::numeric_limits<double>::infinity(), {}});
  // points beyond the finite range (KL with a zero reference entry) share one bucket
  CurvePoint overflow{-std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity(), {}};

  auto record = [&](double n, double a) {
    if (!std::isfinite(n))
    {
      if (a > overflow.accuracy)
      {
        overflow = {n, a, {}};
      }
      return;
    }
    std::size_t b = 0;
    if (width > 0.0)
    {
      double const pos = (n - n_lo) / width;
      b = pos <= 0.0 ? 0 : std::min(buckets, static_cast<std::size_t>(pos));
    }
    if (a > best[b].accuracy || (a == best[b].accuracy && n > best[b].naturalness))
    {
      best[b] = {n, a, {}};
    }
  };

  // Grid rows are streamed in chunks so large |Y| never materialises the
  // whole simplex grid.
  std::size_t const chunk = 4096;
  double const inv        = 1.0 / static_cast<double>(resolution);
  struct Chunk
  {
    std::vector<double> acc;               ///< accuracy contribution per row
    std::vector<std::vector<double>> col;  ///< P_x(x) q(y) per y, per row
    std::size_t size = 0;
  };
  // Fills `out` with up to `chunk` compositions starting at `counts`;
  // returns false once the enumeration is exhausted.
  auto fill = [&](std::size_t x, std::vector<std::size_t> &counts, bool &more, Chunk &out) {
    out.size = 0;
    out.acc.resize(chunk);
    out.col.assign(ny, std::vector<double>(chunk));
    while (more && out.size < chunk)
    {
      double a = 0.0;
      for (std::size_t y = 0; y < ny; ++y)
      {
        double const q = static_cast<double>(counts[y]) * inv;
        a += q * w[x * ny + y];
        out.col[y][out.size] = pm[x] * q;
      }
      out.acc[out.size++] = a;
      more = next_composition(counts, resolution);
    }
    for (auto &c : out.col)
    {
      c.resize(out.size);
    }
    out.acc.resize(out.size);
  };
  auto first = [&]() {
    std::vector<std::size_t> c(ny, 0);
    c[ny - 1] = resolution;
    return c;
  };
  auto for_each_chunk = [&](std::size_t x, auto &&fn) {
    auto counts = first();
    bool more   = true;
    Chunk ch;
    while (more)
    {
      fill(x, counts, more, ch);
      fn(ch);
    }
  };

  // the last row is revisited for every prefix; keep it when it fits
  std::size_t const ng = grid_size(ny, resolution);
  std::vector<Chunk> last_cache;
  if (na > 0 && ng <= (std::size_t{1} << 21))
  {
    for_each_chunk(active[na - 1], [&](Chunk const &c) { last_cache.push_back(c); });
  }

  std::vector<double> base(ny, 0.0);
  std::vector<double> offset(ny);
  std::vector<double> dvals;
  std::vector<double> q(ny);
  std::vector<std::span<const double>> last_cols(ny);
  std::size_t evaluated = 0;

  auto evaluate_last = [&](Chunk const &c, double a_base) {
    dvals.resize(c.size);
    if (divergence.family == DivergenceFamily::kTV)
    {
      for (std::size_t y = 0; y < ny; ++y)
      {
        offset[y]    = base[y] - r[y];
        last_cols[y] = c.col[y];
      }
      kernels::tv_batch(offset, last_cols, dvals);
    }
    else
    {
      for (std::size_t g = 0; g < c.size; ++g)
      {
        for (std::size_t y = 0; y < ny; ++y)
        {
          q[y] = base[y] + c.col[y][g];
        }
        dvals[g] = divergence(q, r);
      }
    }
    for (std::size_t g = 0; g < c.size; ++g)
    {
      record(-dvals[g], a_base + c.acc[g]);
    }
    evaluated += c.size;
  };

  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double a_base) {
    if (i + 1 < na)
    {
      for_each_chunk(active[i], [&](Chunk const &c) {
        for (std::size_t g = 0; g < c.size; ++g)
        {
          for (std::size_t y = 0; y < ny; ++y)
          {
            base[y] += c.col[y][g];
          }
          rec(i + 1, a_base + c.acc[g]);
          for (std::size_t y = 0; y < ny; ++y)
          {
            base[y] -= c.col[y][g];
          }
        }
      });
      return;
    }
    if (!last_cache.empty())
    {
      for (auto const &c : last_cache)
      {
        evaluate_last(c, a_base);
      }
    }
    else
    {
      for_each_chunk(active[na - 1], [&](Chunk const &c) { evaluate_last(c, a_base); });
    }
  };
  if (na > 0)
  {
    rec(0, 0.0);
  }

  std::vector<CurvePoint> cand;
  for (auto const &p : best)
  {
    if (std::isfinite(p.accuracy))
    {
      cand.push_back(p);
    }
  }
  std::sort(cand.begin(), cand.end(),
            [](CurvePoint const &a, CurvePoint const &b) { return a.naturalness > b.naturalness; });
  FrontierResult fr;
  fr.solver    = FrontierSolver::kBruteForce;
  fr.family    = divergence.family;
  fr.evaluated = evaluated;
  double running = -std::numeric_limits<double>::infinity();
  for (auto const &p : cand)
  {
    if (p.accuracy > running)
    {
      fr.points.push_back(p);
      running = p.accuracy;
    }
  }
  std::reverse(fr.points.begin(), fr.points.end());
  return fr;
}

double frontier_accuracy_at(std::span<const CurvePoint> points, double n)
{
  double best = -std::numeric_limits<double>::infinity();
  for (auto const &p : points)
  {
    if (p.naturalness >= n)
    {
      best = std::max(best, p.accuracy);
    }
  }
  return best;
}

PropertyReport verify_an_properties(std::span<const CurvePoint> points, double tol)
{
  PropertyReport rep;
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
  {
    double const inc = points[i + 1].accuracy - points[i].accuracy;
    if (inc > rep.worst_increase)
    {
      rep.worst_increase       = inc;
      rep.worst_increase_index = i;
    }
  }
  for (std::size_t i = 0; i + 2 < points.size(); ++i)
  {
    auto const &l = points[i];
    auto const &m = points[i + 1];
    auto const &h = points[i + 2];
    double const span = h.naturalness - l.naturalness;
    if (span <= 0.0)
    {
      continue;
    }
    double const t     = (m.naturalness - l.naturalness) / span;
    double const chord = l.accuracy + t * (h.accuracy - l.accuracy);
    double const gap   = chord - m.accuracy;
    if (gap > rep.worst_concavity)
    {
      rep.worst_concavity       = gap;
      rep.worst_concavity_index = i + 1;
    }
  }
  rep.monotone = rep.worst_increase <= tol;
  rep.concave  = rep.worst_concavity <= tol;
  return rep;
}

PropertyReport verify_an_properties(FrontierResult const &fr, double tol)
{
  return verify_an_properties(fr.points, tol);
}

NoTwoBirdsReport no_two_birds_demo(JointInstance const &inst, DistortionTable const &delta)
{
  if (delta.nx() != inst.nx() || delta.ny() != inst.ny())
  {
    throw InvalidArgument("distortion table shape does not match the instance");
  }
  std::size_t const nx = inst.nx();
  std::size_t const ny = inst.ny();
  auto const px        = inst.marginal_x();
  std::vector<std::vector<double>> rows(nx, std::vector<double>(ny, 0.0));
  for (std::size_t x = 0; x < nx; ++x)
  {
    std::vector<double> e(ny, 0.0);
    for (std::size_t yc = 0; yc < ny; ++yc)
    {
      for (std::size_t yr = 0; yr < ny; ++yr)
      {
        // an unobserved source gets the unweighted row as its criterion
        double const wgt = px[x] > 0.0 ? inst(x, yr) / px[x] : 1.0;
        e[yc] += wgt * delta(x, yr, yc);
      }
    }
    double const lo  = *std::min_element(e.begin(), e.end());
    double const tol = 1e-12 * std::max(1.0, std::abs(lo));
    std::size_t ties = 0;
    for (double v : e)
    {
      ties += v <= lo + tol ? 1 : 0;
    }
    for (std::size_t y = 0; y < ny; ++y)
    {
      rows[x][y] = e[y] <= lo + tol ? 1.0 / static_cast<double>(ties) : 0.0;
    }
  }
  NoTwoBirdsReport rep;
  rep.q_star = ConditionalSystem(to_vec(inst.x_labels()), to_vec(inst.y_labels()), rows);
  rep.q_star_marginal     = system_marginal(rep.q_star, px);
  rep.conditional_entropy = conditional_entropy(inst);
  auto const py           = inst.marginal_y();
  double tv               = 0.0;
  for (std::size_t y = 0; y < ny; ++y)
  {
    tv += std::abs(rep.q_star_marginal[y] - py[y]);
  }
  rep.tv_to_reference = 0.5 * tv;
  rep.not_distribution_preserving = rep.conditional_entropy > 1e-12 && rep.tv_to_reference > 1e-12;
  return rep;
}

}  // namespace anplane
