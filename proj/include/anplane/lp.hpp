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
#include <vector>

#include <Eigen/Dense>

namespace anplane::lp {

enum class Status
{
  kOptimal,
  kInfeasible,
  kUnbounded,
};

struct Result
{
  Status status = Status::kInfeasible;
  Eigen::VectorXd x;
  double objective  = 0.0;
  std::size_t pivots = 0;
};

/// maximize c'x subject to A x = b, x >= 0.
///
/// Dense two-phase tableau simplex with Bland's rule; meant for the handful of
/// variables in the synthetic frontier problems, not for general use.
Result maximize(Eigen::MatrixXd const &a, Eigen::VectorXd const &b, Eigen::VectorXd const &c);

}  // namespace anplane::lp
