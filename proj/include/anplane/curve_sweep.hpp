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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anplane/data_model.hpp"

namespace anplane {

/// `n` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);
/// 50 log-spaced values over [1e-4, 1e4].
std::vector<double> default_beta_grid();
/// Accepts `LO:HI:logN`, `LO:HI:linN` or a comma-separated list.
std::vector<double> parse_beta_grid(std::string const &spec);

/// Pairwise (cascade) summation; the result does not depend on thread count.
double pairwise_sum(std::span<const double> values);

/// Index of the candidate maximising accuracy + beta * logprob / token_count.
std::size_t oracle_select_index(SegmentRecord const &seg, double beta);
CandidateRecord const &oracle_select(SegmentRecord const &seg, double beta);

struct OraclePoint
{
  double beta     = 0.0;
  double accuracy = 0.0;  ///< mean oriented accuracy of the selections
  double mean_nll = 0.0;  ///< mean per-token NLL of the selections (raw naturalness)
};

struct SweepResult
{
  std::vector<OraclePoint> points;  ///< one per β, grid order
  std::size_t n_segments = 0;
  /// selected[b][s]: candidate index chosen for segment s at β index b.
  std::vector<std::vector<std::uint32_t>> selected;
};

SweepResult sweep_curve(std::span<const SegmentRecord> segments, std::span<const double> betas);

struct SystemPoint
{
  std::string system_id;
  double mean_accuracy = 0.0;
  double mean_lpp      = 0.0;  ///< mean per-token NLL over the system's candidates
  double lpp_distance_to_ref = 0.0;
  std::size_t n_segments   = 0;
  std::size_t n_excluded   = 0;  ///< segments with no candidate from this system
  std::size_t n_candidates = 0;
};

/// One point per system id, sorted by id. Candidates with an empty system id
/// belong to the pool only. If `only` is given, every listed id must occur.
std::vector<SystemPoint> system_points(std::span<const SegmentRecord> segments,
                                       CorpusLppStats const &ref_stats,
                                       std::optional<std::vector<std::string>> const &only = {});

struct DominanceEntry
{
  std::string system_id;
  /// max over the β grid of (sys_acc - β sys_nll) - (curve_acc - β curve_nll);
  /// positive means the curve point for that β fails to dominate the system.
  double certificate_margin = 0.0;
  double worst_beta         = 0.0;
  bool violation            = false;
  /// system accuracy minus the curve interpolated at the system's NLL, when
  /// the NLL lies inside the curve's range.
  std::optional<double> chord_margin;
};

struct DominanceReport
{
  std::vector<DominanceEntry> entries;
  std::size_t violations = 0;
};

DominanceReport dominance_check(SweepResult const &sweep, std::span<const SystemPoint> systems,
                                double tol = 1e-9);

}  // namespace anplane
