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

#include "anplane/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "anplane/data_model.hpp"

namespace anplane::report {

namespace {

std::vector<std::string> split_csv_line(std::string line)
{
  if (!line.empty() && line.back() == '\r')
  {
    line.pop_back();
  }
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i)
  {
    char const c = line[i];
    if (quoted)
    {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
      {
        cur += '"';
        ++i;
      }
      else if (c == '"')
      {
        quoted = false;
      }
      else
      {
        cur += c;
      }
    }
    else if (c == '"')
    {
      quoted = true;
    }
    else if (c == ',')
    {
      out.push_back(cur);
      cur.clear();
    }
    else
    {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string csv_field(std::string const &s)
{
  if (s.find_first_of(",\"\n\r") == std::string::npos)
  {
    return s;
  }
  std::string out = "\"";
  for (char c : s)
  {
    if (c == '"')
    {
      out += '"';
    }
    out += c;
  }
  return out + "\"";
}

struct Table
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_of;

  std::optional<std::size_t> column(std::string const &name) const
  {
    for (std::size_t i = 0; i < header.size(); ++i)
    {
      if (header[i] == name)
      {
        return i;
      }
    }
    return std::nullopt;
  }
};

Table read_table(std::string const &text)
{
  Table t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
    {
      continue;
    }
    auto fields = split_csv_line(line);
    if (t.header.empty())
    {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size())
    {
      throw DataError("csv: line " + std::to_string(lineno) + ": expected " +
                      std::to_string(t.header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
    t.line_of.push_back(lineno);
  }
  if (t.header.empty())
  {
    throw DataError("csv: empty file");
  }
  return t;
}

double number_at(Table const &t, std::size_t row, std::size_t col)
{
  std::string const &s = t.rows[row][col];
  std::size_t used     = 0;
  double v             = 0.0;
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
    throw DataError("csv: line " + std::to_string(t.line_of[row]) + ": column '" + t.header[col] +
                    "' is not a finite number: '" + s + "'");
  }
  return v;
}

std::string xml_escape(std::string const &s)
{
  std::string out;
  for (char c : s)
  {
    switch (c)
    {
    case '&':
      out += "&amp;";
      break;
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '"':
      out += "&quot;";
      break;
    default:
      out += c;
    }
  }
  return out;
}

std::string fmt2(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  return s == "-0.00" ? "0.00" : s;
}

std::string tick_label(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  std::string s = buf;
  return s == "-0" ? "0" : s;
}

// Interpolated curve accuracy at x, or nullopt outside the curve's x range.
std::optional<double> curve_at(std::vector<std::pair<double, double>> pts, double x)
{
  if (pts.empty())
  {
    return std::nullopt;
  }
  std::sort(pts.begin(), pts.end());
  if (x < pts.front().first || x > pts.back().first)
  {
    return std::nullopt;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
  {
    auto const &[x0, y0] = pts[i];
    auto const &[x1, y1] = pts[i + 1];
    if (x >= x0 && x <= x1)
    {
      double const y = x1 > x0 ? y0 + (x - x0) / (x1 - x0) * (y1 - y0) : std::max(y0, y1);
      best           = std::max(best, y);
    }
  }
  if (pts.size() == 1)
  {
    best = pts.front().second;
  }
  return best;
}

}  // namespace

std::string format_number(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  std::string s = buf;
  return s == "-0" ? "0" : s;
}

std::string curve_csv(SweepResult const &result)
{
  if (result.points.empty())
  {
    throw InvalidArgument("curve csv: empty result");
  }
  std::string out = "beta,accuracy,mean_nll_per_token,n_segments\n";
  for (auto const &p : result.points)
  {
    out += format_number(p.beta) + "," + format_number(p.accuracy) + "," +
           format_number(p.mean_nll) + "," + std::to_string(result.n_segments) + "\n";
  }
  return out;
}

std::string systems_csv(std::span<const SystemPoint> systems)
{
  if (systems.empty())
  {
    throw InvalidArgument("systems csv: no systems");
  }
  std::string out = "system,mean_accuracy,mean_lpp,lpp_distance,n_segments\n";
  for (auto const &s : systems)
  {
    out += csv_field(s.system_id) + "," + format_number(s.mean_accuracy) + "," +
           format_number(s.mean_lpp) + "," + format_number(s.lpp_distance_to_ref) + "," +
           std::to_string(s.n_segments) + "\n";
  }
  return out;
}

std::string frontier_csv(FrontierResult const &result)
{
  if (result.points.empty())
  {
    throw InvalidArgument("frontier csv: empty result");
  }
  std::string out = "beta,naturalness,accuracy\n";
  for (auto const &p : result.points)
  {
    out += (p.beta ? format_number(*p.beta) : std::string()) + "," +
           format_number(p.naturalness) + "," + format_number(p.accuracy) + "\n";
  }
  return out;
}

void write_file(std::filesystem::path const &path, std::string const &content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw DataError("cannot write '" + path.string() + "'");
  }
  out << content;
  out.flush();
  if (!out)
  {
    throw DataError("cannot write '" + path.string() + "'");
  }
}

void emit_curve_csv(SweepResult const &result, std::filesystem::path const &path)
{
  write_file(path, curve_csv(result));
}

void emit_systems_csv(std::span<const SystemPoint> systems, std::filesystem::path const &path)
{
  write_file(path, systems_csv(systems));
}

void emit_frontier_csv(FrontierResult const &result, std::filesystem::path const &path)
{
  write_file(path, frontier_csv(result));
}

MarkerClass parse_marker_class(std::string const &name)
{
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "llm")
  {
    return MarkerClass::kLlm;
  }
  if (s == "mt" || s == "mt-trained")
  {
    return MarkerClass::kMt;
  }
  if (s == "online")
  {
    return MarkerClass::kOnline;
  }
  if (s == "human")
  {
    return MarkerClass::kHuman;
  }
  if (s == "other" || s.empty())
  {
    return MarkerClass::kOther;
  }
  throw InvalidArgument("unknown marker class '" + name + "' (llm, mt, online, human, other)");
}

PlotCurve read_curve_csv(std::string const &text, std::string name)
{
  auto const t = read_table(text);
  PlotCurve c;
  c.name      = std::move(name);
  auto const acc = t.column("accuracy");
  auto const nll = t.column("mean_nll_per_token");
  auto const nat = t.column("naturalness");
  if (!acc || (!nll && !nat))
  {
    throw DataError("curve csv: needs 'accuracy' and 'mean_nll_per_token' or 'naturalness' columns");
  }
  for (std::size_t r = 0; r < t.rows.size(); ++r)
  {
    double const x = nll ? number_at(t, r, *nll) : -number_at(t, r, *nat);
    c.points.emplace_back(x, number_at(t, r, *acc));
  }
  if (c.points.empty())
  {
    throw DataError("curve csv: no rows");
  }
  return c;
}

std::vector<PlotSystem> read_systems_csv(std::string const &text)
{
  auto const t  = read_table(text);
  auto const id = t.column("system");
  auto const a  = t.column("mean_accuracy");
  auto const x  = t.column("mean_lpp");
  if (!id || !a || !x)
  {
    throw DataError("systems csv: needs 'system', 'mean_accuracy' and 'mean_lpp' columns");
  }
  auto const cat = t.column("category");
  std::vector<PlotSystem> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
  {
    PlotSystem s;
    s.system_id = t.rows[r][*id];
    s.x         = number_at(t, r, *x);
    s.y         = number_at(t, r, *a);
    s.marker    = cat ? parse_marker_class(t.rows[r][*cat]) : MarkerClass::kOther;
    out.push_back(std::move(s));
  }
  return out;
}

std::string render_plane_svg(std::span<const PlotCurve> curves, std::span<const PlotSystem> systems,
                             PlotSpec const &spec)
{
  if (curves.empty() && systems.empty())
  {
    throw InvalidArgument("plot: at least one curve or system is required");
  }
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  auto grow   = [&](double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  for (auto const &c : curves)
  {
    for (auto const &[x, y] : c.points)
    {
      grow(x, y);
    }
  }
  for (auto const &s : systems)
  {
    grow(s.x, s.y);
  }
  auto pad = [](double &lo, double &hi) {
    double const span = hi - lo;
    double const p    = span > 0.0 ? 0.05 * span : std::max(0.5, 0.05 * std::abs(lo));
    lo -= p;
    hi += p;
  };
  pad(xmin, xmax);
  pad(ymin, ymax);

  constexpr double kLeft = 90.0, kRight = 770.0, kTop = 40.0, kBottom = 520.0;
  auto px = [&](double x) {
    double const t = (x - xmin) / (xmax - xmin);
    return spec.naturalness_left ? kLeft + t * (kRight - kLeft) : kRight - t * (kRight - kLeft);
  };
  auto py = [&](double y) {
    double const t = (y - ymin) / (ymax - ymin);
    return spec.accuracy_up ? kBottom - t * (kBottom - kTop) : kTop + t * (kBottom - kTop);
  };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
       "viewBox=\"0 0 800 600\" font-family=\"sans-serif\" font-size=\"12pt\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

  // axes and ticks
  o << "<line class=\"axis\" x1=\"" << fmt2(kLeft) << "\" y1=\"" << fmt2(kBottom) << "\" x2=\""
    << fmt2(kRight) << "\" y2=\"" << fmt2(kBottom) << "\" stroke=\"black\"/>\n";
  o << "<line class=\"axis\" x1=\"" << fmt2(kLeft) << "\" y1=\"" << fmt2(kTop) << "\" x2=\""
    << fmt2(kLeft) << "\" y2=\"" << fmt2(kBottom) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i)
  {
    double const xv = xmin + (xmax - xmin) * i / 4.0;
    double const yv = ymin + (ymax - ymin) * i / 4.0;
    o << "<text x=\"" << fmt2(px(xv)) << "\" y=\"" << fmt2(kBottom + 20) << "\" text-anchor=\"middle\">"
      << tick_label(xv) << "</text>\n";
    o << "<text x=\"" << fmt2(kLeft - 8) << "\" y=\"" << fmt2(py(yv) + 4) << "\" text-anchor=\"end\">"
      << tick_label(yv) << "</text>\n";
  }
  o << "<text class=\"axis-title\" x=\"" << fmt2((kLeft + kRight) / 2) << "\" y=\"560\" "
       "text-anchor=\"middle\">"
    << xml_escape(spec.naturalness_label) << "</text>\n";
  o << "<text class=\"axis-title\" x=\"24\" y=\"" << fmt2((kTop + kBottom) / 2)
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 24 " << fmt2((kTop + kBottom) / 2)
    << ")\">" << xml_escape(spec.accuracy_label) << "</text>\n";
  o << "<text class=\"legend\" x=\"" << fmt2(kRight) << "\" y=\"24\" text-anchor=\"end\">"
    << "better: " << (spec.accuracy_up ? "up" : "down") << " (higher " << xml_escape(spec.accuracy_label)
    << "), " << (spec.naturalness_left ? "left" : "right") << " (lower "
    << xml_escape(spec.naturalness_label) << ")</text>\n";

  for (auto const &c : curves)
  {
    auto pts = c.points;
    std::sort(pts.begin(), pts.end());
    o << "<polyline class=\"curve\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
      o << (i ? " " : "") << fmt2(px(pts[i].first)) << "," << fmt2(py(pts[i].second));
    }
    o << "\"><title>" << xml_escape(c.name) << "</title></polyline>\n";
  }

  for (auto const &s : systems)
  {
    MarkerClass m = s.marker;
    if (auto it = spec.categories.find(s.system_id); it != spec.categories.end())
    {
      m = it->second;
    }
    double const x = px(s.x);
    double const y = py(s.y);
    std::string const X = fmt2(x), Y = fmt2(y);
    switch (m)
    {
    case MarkerClass::kLlm:
      o << "<circle class=\"marker llm\" cx=\"" << X << "\" cy=\"" << Y << "\" r=\"6\" fill=\"#d62728\"/>\n";
      break;
    case MarkerClass::kMt:
      o << "<rect class=\"marker mt\" x=\"" << fmt2(x - 5.5) << "\" y=\"" << fmt2(y - 5.5)
        << "\" width=\"11\" height=\"11\" fill=\"#2ca02c\"/>\n";
      break;
    case MarkerClass::kOnline:
      o << "<polygon class=\"marker online\" points=\"" << X << "," << fmt2(y - 7) << " "
        << fmt2(x - 6.5) << "," << fmt2(y + 5) << " " << fmt2(x + 6.5) << "," << fmt2(y + 5)
        << "\" fill=\"#ff7f0e\"/>\n";
      break;
    case MarkerClass::kHuman:
      o << "<polygon class=\"marker human\" points=\"" << X << "," << fmt2(y - 7) << " "
        << fmt2(x + 7) << "," << Y << " " << X << "," << fmt2(y + 7) << " " << fmt2(x - 7) << ","
        << Y << "\" fill=\"#9467bd\"/>\n";
      break;
    case MarkerClass::kOther:
      o << "<path class=\"marker other\" d=\"M" << fmt2(x - 5) << "," << fmt2(y - 5) << "L"
        << fmt2(x + 5) << "," << fmt2(y + 5) << "M" << fmt2(x - 5) << "," << fmt2(y + 5) << "L"
        << fmt2(x + 5) << "," << fmt2(y - 5) << "\" stroke=\"#444444\" stroke-width=\"2\"/>\n";
      break;
    }
    o << "<text class=\"label\" x=\"" << fmt2(x + 9) << "\" y=\"" << fmt2(y - 6) << "\">"
      << xml_escape(s.system_id) << "</text>\n";
    bool above = false;
    for (auto const &c : curves)
    {
      auto const ca = curve_at(c.points, s.x);
      if (ca && s.y > *ca + 1e-12 * std::max(1.0, std::abs(*ca)))
      {
        above = true;
      }
    }
    if (above)
    {
      o << "<text class=\"warning\" x=\"" << fmt2(x + 9) << "\" y=\"" << fmt2(y + 14)
        << "\" fill=\"#b00000\">dominates-curve</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

void emit_plane_svg(PlotSpec const &spec)
{
  if (spec.curves.empty() && spec.systems.empty())
  {
    throw InvalidArgument("plot: at least one input is required");
  }
  std::vector<PlotCurve> curves;
  for (auto const &p : spec.curves)
  {
    curves.push_back(read_curve_csv(read_text_file(p), p.filename().string()));
  }
  std::vector<PlotSystem> systems;
  for (auto const &p : spec.systems)
  {
    auto s = read_systems_csv(read_text_file(p));
    systems.insert(systems.end(), s.begin(), s.end());
  }
  write_file(spec.output, render_plane_svg(curves, systems, spec));
}

}  // namespace anplane::report
