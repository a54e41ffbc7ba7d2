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

#include "anplane/lp.hpp"

#include <cmath>
#include <limits>

#include "anplane/error.hpp"

namespace anplane::lp {

namespace {

constexpr double kEps = 1e-11;

class Tableau
{
public:
  Tableau(Eigen::MatrixXd const &a, Eigen::VectorXd const &b)
    : m_(a.rows())
    , n_(a.cols())
    , t_(Eigen::MatrixXd::Zero(a.rows() + 1, a.cols() + a.rows() + 1))
    , basis_(static_cast<std::size_t>(a.rows()))
  {
    for (Eigen::Index i = 0; i < m_; ++i)
    {
      double const sign = b(i) < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = sign * a.row(i);
      t_(i, n_ + i)      = 1.0;
      t_(i, rhs())       = sign * b(i);
      basis_[static_cast<std::size_t>(i)] = n_ + i;
    }
  }

  Eigen::Index rhs() const { return n_ + m_; }
  Eigen::Index obj() const { return m_; }

  // Reduced-cost row for maximising `cost` (length n_ + m_) over the current basis.
  void set_objective(Eigen::VectorXd const &cost)
  {
    t_.row(obj()).setZero();
    t_.row(obj()).head(n_ + m_) = -cost.transpose();
    for (Eigen::Index i = 0; i < m_; ++i)
    {
      double const cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0)
      {
        t_.row(obj()) += cb * t_.row(i);
      }
    }
  }

  // Returns false when unbounded. Columns >= `allowed` never enter.
  bool run(Eigen::Index allowed, std::size_t &pivots)
  {
    for (;;)
    {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j)
      {
        if (t_(obj(), j) < -kEps)
        {
          enter = j;
          break;
        }
      }
      if (enter < 0)
      {
        return true;
      }
      Eigen::Index leave = -1;
      double best_ratio  = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i)
      {
        double const coef = t_(i, enter);
        if (coef > kEps)
        {
          double const ratio = t_(i, rhs()) / coef;
          if (ratio < best_ratio - kEps ||
              (std::abs(ratio - best_ratio) <= kEps &&
               basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]))
          {
            best_ratio = ratio;
            leave      = i;
          }
        }
      }
      if (leave < 0)
      {
        return false;
      }
      pivot(leave, enter);
      ++pivots;
      if (pivots > 100000)
      {
        throw InvalidArgument("lp: pivot limit exceeded");
      }
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col)
  {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i <= m_; ++i)
    {
      if (i != row && t_(i, col) != 0.0)
      {
        t_.row(i) -= t_(i, col) * t_.row(row);
      }
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // Pivots remaining zero-level artificials out of the basis where possible.
  void evict_artificials()
  {
    for (Eigen::Index i = 0; i < m_; ++i)
    {
      if (basis_[static_cast<std::size_t>(i)] < n_)
      {
        continue;
      }
      for (Eigen::Index j = 0; j < n_; ++j)
      {
        if (std::abs(t_(i, j)) > 1e-9)
        {
          pivot(i, j);
          break;
        }
      }
    }
  }

  double objective_value() const { return t_(obj(), rhs()); }

  Eigen::VectorXd solution() const
  {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i)
    {
      auto const v = basis_[static_cast<std::size_t>(i)];
      if (v < n_)
      {
        x(v) = std::max(0.0, t_(i, rhs()));
      }
    }
    return x;
  }

  Eigen::Index n() const { return n_; }
  Eigen::Index m() const { return m_; }

private:
  Eigen::Index m_;
  Eigen::Index n_;
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

Result maximize(Eigen::MatrixXd const &a, Eigen::VectorXd const &b, Eigen::VectorXd const &c)
{
  if (a.rows() != b.size() || a.cols() != c.size())
  {
    throw InvalidArgument("lp: dimension mismatch");
  }
  Result res;
  Tableau tab(a, b);
  auto const n = tab.n();
  auto const m = tab.m();

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setConstant(-1.0);
  tab.set_objective(phase1);
  tab.run(n + m, res.pivots);
  double const scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (tab.objective_value() < -1e-9 * scale)
  {
    res.status = Status::kInfeasible;
    return res;
  }
  tab.evict_artificials();

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n)         = c;
  tab.set_objective(phase2);
  if (!tab.run(n, res.pivots))
  {
    res.status = Status::kUnbounded;
    return res;
  }
  res.status    = Status::kOptimal;
  res.x         = tab.solution();
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace anplane::lp
