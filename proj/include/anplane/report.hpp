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

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anplane/curve_sweep.hpp"
#include "anplane/frontier.hpp"

namespace anplane::report {

/// %.9g, with "-0" normalised to "0".
std::string format_number(double v);

std::string curve_csv(SweepResult const &result);
std::string systems_csv(std::span<const SystemPoint> systems);
std::string frontier_csv(FrontierResult const &result);

/// Writes `content` to `path`; throws DataError if the file cannot be written.
void write_file(std::filesystem::path const &path, std::string const &content);

void emit_curve_csv(SweepResult const &result, std::filesystem::path const &path);
void emit_systems_csv(std::span<const SystemPoint> systems, std::filesystem::path const &path);
void emit_frontier_csv(FrontierResult const &result, std::filesystem::path const &path);

enum class MarkerClass
{
  kLlm,
  kMt,
  kOnline,
  kHuman,
  kOther,
};

MarkerClass parse_marker_class(std::string const &name);

/// A curve in plot coordinates: x is the raw naturalness axis (mean NLL per
/// token, or D for frontier files), y is accuracy.
struct PlotCurve
{
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct PlotSystem
{
  std::string system_id;
  double x = 0.0;
  double y = 0.0;
  MarkerClass marker = MarkerClass::kOther;
};

/// Parses a curve CSV (sweep or frontier layout). Throws DataError when malformed.
PlotCurve read_curve_csv(std::string const &text, std::string name = "curve");
/// Parses a systems CSV; an optional `category` column selects the marker.
std::vector<PlotSystem> read_systems_csv(std::string const &text);

struct PlotSpec
{
  std::vector<std::filesystem::path> curves;
  std::vector<std::filesystem::path> systems;
  /// Overrides the marker class per system id.
  std::map<std::string, MarkerClass> categories;
  std::string accuracy_label    = "accuracy";
  std::string naturalness_label = "mean NLL per token";
  bool accuracy_up              = true;   ///< better accuracy toward the top
  bool naturalness_left         = true;   ///< lower NLL (more natural) toward the left
  std::filesystem::path output;
};

/// Renders curves and systems already in memory.
std::string render_plane_svg(std::span<const PlotCurve> curves, std::span<const PlotSystem> systems,
                             PlotSpec const &spec);

/// Reads the inputs named in `spec` and writes the SVG to spec.output.
void emit_plane_svg(PlotSpec const &spec);

}  // namespace anplane::report
