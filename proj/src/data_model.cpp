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

#include "anplane/data_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace anplane {

namespace {

using nlohmann::json;

std::string fmt_g(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void check_unique(std::span<const std::string> labels, char const *what)
{
  std::set<std::string> seen;
  for (auto const &l : labels)
  {
    if (!seen.insert(l).second)
    {
      throw DataError(std::string(what) + ": duplicate label '" + l + "'");
    }
  }
}

void check_mass(std::span<const double> probs, double tolerance, char const *what)
{
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i)
  {
    if (!std::isfinite(probs[i]))
    {
      throw DataError(std::string(what) + ": non-finite probability at index " +
                      std::to_string(i));
    }
    if (probs[i] < 0.0)
    {
      throw DataError(std::string(what) + ": negative probability " + fmt_g(probs[i]) +
                      " at index " + std::to_string(i));
    }
    total += probs[i];
  }
  double const dev = total - 1.0;
  if (std::abs(dev) > tolerance)
  {
    throw DataError(std::string(what) + ": probabilities sum to " + fmt_g(total) + " (" +
                    (dev < 0 ? "deficit " : "excess ") + fmt_g(std::abs(dev)) + ")");
  }
}

std::vector<std::string> default_labels(std::size_t n)
{
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    out.push_back(std::to_string(i));
  }
  return out;
}

// JSON has no literal for NaN/Inf; accept them spelled as strings so that the
// finiteness checks can report them.
double as_real(json const &j, std::string const &where)
{
  if (j.is_number())
  {
    return j.get<double>();
  }
  if (j.is_string())
  {
    auto s = j.get<std::string>();
    for (auto &c : s)
    {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (s == "nan")
    {
      return std::nan("");
    }
    if (s == "inf" || s == "infinity" || s == "+inf" || s == "+infinity")
    {
      return INFINITY;
    }
    if (s == "-inf" || s == "-infinity")
    {
      return -INFINITY;
    }
  }
  if (j.is_null())
  {
    return std::nan("");
  }
  throw DataError(where + ": expected a number");
}

std::vector<double> as_real_vector(json const &j, std::string const &where)
{
  if (!j.is_array())
  {
    throw DataError(where + ": expected an array");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
  {
    out.push_back(as_real(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::vector<double>> as_real_matrix(json const &j, std::string const &where)
{
  if (!j.is_array())
  {
    throw DataError(where + ": expected an array of arrays");
  }
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i)
  {
    out.push_back(as_real_vector(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::string> as_labels(json const &j, std::string const &where)
{
  if (!j.is_array())
  {
    throw DataError(where + ": expected an array of labels");
  }
  std::vector<std::string> out;
  for (auto const &e : j)
  {
    if (e.is_string())
    {
      out.push_back(e.get<std::string>());
    }
    else if (e.is_number_integer())
    {
      out.push_back(std::to_string(e.get<long long>()));
    }
    else
    {
      throw DataError(where + ": labels must be strings");
    }
  }
  return out;
}

json const &require(json const &obj, char const *key, std::string const &where)
{
  auto it = obj.find(key);
  if (it == obj.end())
  {
    throw DataError(where + ": missing field '" + key + "'");
  }
  return *it;
}

}  // namespace

// ---------------------------------------------------------------------------
// FiniteDistribution

FiniteDistribution::FiniteDistribution(std::vector<std::string> labels, std::vector<double> probs,
                                       double tolerance)
  : labels_(std::move(labels))
  , probs_(std::move(probs))
{
  if (labels_.size() != probs_.size())
  {
    throw DataError("distribution: " + std::to_string(labels_.size()) + " labels but " +
                    std::to_string(probs_.size()) + " probabilities");
  }
  if (probs_.empty())
  {
    throw DataError("distribution: empty support");
  }
  check_unique(labels_, "distribution");
  check_mass(probs_, tolerance, "distribution");
}

FiniteDistribution FiniteDistribution::from_probs(std::vector<double> probs, double tolerance)
{
  auto labels = default_labels(probs.size());
  return FiniteDistribution(std::move(labels), std::move(probs), tolerance);
}

std::optional<std::size_t> FiniteDistribution::index_of(std::string const &label) const
{
  for (std::size_t i = 0; i < labels_.size(); ++i)
  {
    if (labels_[i] == label)
    {
      return i;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// JointInstance

JointInstance::JointInstance(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
                             std::vector<std::vector<double>> joint, double tolerance)
  : x_labels_(std::move(x_labels))
  , y_labels_(std::move(y_labels))
{
  if (x_labels_.empty() || y_labels_.empty())
  {
    throw DataError("joint: empty label set");
  }
  check_unique(x_labels_, "joint x_labels");
  check_unique(y_labels_, "joint y_labels");
  if (joint.size() != x_labels_.size())
  {
    throw DataError("joint: " + std::to_string(joint.size()) + " rows for " +
                    std::to_string(x_labels_.size()) + " x labels");
  }
  joint_.reserve(nx() * ny());
  for (std::size_t x = 0; x < joint.size(); ++x)
  {
    if (joint[x].size() != ny())
    {
      throw DataError("joint: row " + std::to_string(x) + " has " +
                      std::to_string(joint[x].size()) + " entries, expected " +
                      std::to_string(ny()));
    }
    joint_.insert(joint_.end(), joint[x].begin(), joint[x].end());
  }
  check_mass(joint_, tolerance, "joint");
}

FiniteDistribution JointInstance::marginal_x() const
{
  std::vector<double> px(nx(), 0.0);
  for (std::size_t x = 0; x < nx(); ++x)
  {
    for (std::size_t y = 0; y < ny(); ++y)
    {
      px[x] += (*this)(x, y);
    }
  }
  return FiniteDistribution(x_labels_, std::move(px), kIngestTolerance);
}

FiniteDistribution JointInstance::marginal_y() const
{
  std::vector<double> py(ny(), 0.0);
  for (std::size_t x = 0; x < nx(); ++x)
  {
    for (std::size_t y = 0; y < ny(); ++y)
    {
      py[y] += (*this)(x, y);
    }
  }
  return FiniteDistribution(y_labels_, std::move(py), kIngestTolerance);
}

FiniteDistribution JointInstance::conditional(std::size_t x) const
{
  double px = 0.0;
  for (std::size_t y = 0; y < ny(); ++y)
  {
    px += (*this)(x, y);
  }
  if (!(px > 0.0))
  {
    throw InvalidArgument("conditional: P_x(" + x_labels_.at(x) + ") = 0");
  }
  std::vector<double> row(ny());
  for (std::size_t y = 0; y < ny(); ++y)
  {
    row[y] = (*this)(x, y) / px;
  }
  return FiniteDistribution(y_labels_, std::move(row));
}

// ---------------------------------------------------------------------------
// ConditionalSystem

ConditionalSystem::ConditionalSystem(std::vector<std::string> x_labels,
                                     std::vector<std::string> y_labels,
                                     std::vector<std::vector<double>> rows, double tolerance)
  : x_labels_(std::move(x_labels))
  , y_labels_(std::move(y_labels))
{
  if (rows.size() != x_labels_.size())
  {
    throw DataError("system: " + std::to_string(rows.size()) + " rows for " +
                    std::to_string(x_labels_.size()) + " x labels");
  }
  for (std::size_t x = 0; x < rows.size(); ++x)
  {
    if (rows[x].size() != y_labels_.size())
    {
      throw DataError("system: row " + std::to_string(x) + " has wrong length");
    }
    check_mass(rows[x], tolerance, ("system row " + std::to_string(x)).c_str());
    rows_.insert(rows_.end(), rows[x].begin(), rows[x].end());
  }
}

ConditionalSystem ConditionalSystem::constant_rows(JointInstance const &inst,
                                                   std::span<const double> row)
{
  std::vector<std::vector<double>> rows(inst.nx(), std::vector<double>(row.begin(), row.end()));
  return ConditionalSystem({inst.x_labels().begin(), inst.x_labels().end()},
                           {inst.y_labels().begin(), inst.y_labels().end()}, std::move(rows));
}

void ConditionalSystem::check_matches(JointInstance const &inst) const
{
  if (!std::equal(x_labels_.begin(), x_labels_.end(), inst.x_labels().begin(),
                  inst.x_labels().end()) ||
      !std::equal(y_labels_.begin(), y_labels_.end(), inst.y_labels().begin(),
                  inst.y_labels().end()))
  {
    throw InvalidArgument("system labels do not match the joint instance");
  }
}

// ---------------------------------------------------------------------------
// DistortionTable

DistortionTable::DistortionTable(std::size_t nx, std::size_t ny, std::vector<double> values)
  : nx_(nx)
  , ny_(ny)
  , values_(std::move(values))
{
  if (values_.size() != nx_ * ny_ * ny_)
  {
    throw DataError("delta: expected " + std::to_string(nx_ * ny_ * ny_) + " entries, got " +
                    std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i)
  {
    if (!std::isfinite(values_[i]))
    {
      std::size_t const x  = i / (ny_ * ny_);
      std::size_t const yr = (i / ny_) % ny_;
      std::size_t const yc = i % ny_;
      throw DataError("delta: non-finite entry at [" + std::to_string(x) + "][" +
                      std::to_string(yr) + "][" + std::to_string(yc) + "]");
    }
  }
}

DistortionTable DistortionTable::exact_match(std::size_t nx, std::size_t ny)
{
  std::vector<double> v(nx * ny * ny, 1.0);
  for (std::size_t x = 0; x < nx; ++x)
  {
    for (std::size_t y = 0; y < ny; ++y)
    {
      v[(x * ny + y) * ny + y] = 0.0;
    }
  }
  return DistortionTable(nx, ny, std::move(v));
}

DistortionTable DistortionTable::zeros(std::size_t nx, std::size_t ny)
{
  return DistortionTable(nx, ny, std::vector<double>(nx * ny * ny, 0.0));
}

DistortionTable DistortionTable::scaled(double factor) const
{
  auto v = values_;
  for (auto &e : v)
  {
    e *= factor;
  }
  return DistortionTable(nx_, ny_, std::move(v));
}

// ---------------------------------------------------------------------------
// Segment files

namespace {

CandidateRecord parse_candidate(json const &c, std::string const &where)
{
  if (!c.is_object())
  {
    throw DataError(where + ": candidate must be an object");
  }
  CandidateRecord rec;
  auto const &text = require(c, "text", where);
  if (!text.is_string())
  {
    throw DataError(where + ": field 'text' must be a string");
  }
  rec.text = text.get<std::string>();
  auto const &sys = require(c, "system", where);
  if (!sys.is_string())
  {
    throw DataError(where + ": field 'system' must be a string");
  }
  rec.system_id = sys.get<std::string>();

  rec.accuracy = as_real(require(c, "accuracy", where), where + ": field 'accuracy'");
  if (!std::isfinite(rec.accuracy))
  {
    throw DataError(where + ": field 'accuracy' is not finite");
  }
  rec.logprob = as_real(require(c, "logprob", where), where + ": field 'logprob'");
  if (!std::isfinite(rec.logprob) || rec.logprob > 0.0)
  {
    throw DataError(where + ": field 'logprob' must be finite and <= 0");
  }
  auto const &tc = require(c, "token_count", where);
  if (!tc.is_number_integer())
  {
    throw DataError(where + ": field 'token_count' must be an integer");
  }
  auto const n = tc.get<long long>();
  if (n < 1 || n > std::numeric_limits<int>::max())
  {
    throw DataError(where + ": field 'token_count' must be >= 1, got " + std::to_string(n));
  }
  rec.token_count = static_cast<int>(n);
  return rec;
}

}  // namespace

SegmentFile parse_segments(std::string const &text)
{
  SegmentFile out;
  std::set<std::string> ids;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno    = 0;
  bool seen_first    = false;
  double sign        = 1.0;
  while (std::getline(in, line))
  {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
    {
      continue;
    }
    std::string const where = "line " + std::to_string(lineno);
    json j;
    try
    {
      j = json::parse(line);
    }
    catch (json::parse_error const &e)
    {
      throw DataError(where + ": malformed JSON (" + e.what() + ")");
    }
    if (!j.is_object())
    {
      throw DataError(where + ": expected a JSON object");
    }
    if (!seen_first)
    {
      seen_first = true;
      if (auto it = j.find("accuracy_orientation"); it != j.end())
      {
        auto const o = it->is_string() ? it->get<std::string>() : std::string();
        if (o == "higher")
        {
          out.orientation = Orientation::kHigherIsBetter;
        }
        else if (o == "lower")
        {
          out.orientation = Orientation::kLowerIsBetter;
          sign            = -1.0;
        }
        else
        {
          throw DataError(where + ": field 'accuracy_orientation' must be \"higher\" or \"lower\"");
        }
        continue;
      }
    }

    SegmentRecord seg;
    auto const &id = require(j, "segment_id", where);
    if (id.is_string())
    {
      seg.segment_id = id.get<std::string>();
    }
    else if (id.is_number_integer())
    {
      seg.segment_id = std::to_string(id.get<long long>());
    }
    else
    {
      throw DataError(where + ": field 'segment_id' must be a string");
    }
    if (auto it = j.find("source"); it != j.end() && it->is_string())
    {
      seg.source = it->get<std::string>();
    }
    if (auto it = j.find("reference"); it != j.end() && it->is_string())
    {
      seg.reference = it->get<std::string>();
    }
    auto const &cands = require(j, "candidates", where);
    if (!cands.is_array())
    {
      throw DataError(where + ": field 'candidates' must be an array");
    }
    if (cands.empty())
    {
      throw DataError(where + ": field 'candidates' is empty for segment '" + seg.segment_id +
                      "'");
    }
    for (std::size_t k = 0; k < cands.size(); ++k)
    {
      auto rec = parse_candidate(cands[k], where + ", candidate " + std::to_string(k));
      rec.accuracy *= sign;
      seg.candidates.push_back(std::move(rec));
    }
    if (!ids.insert(seg.segment_id).second)
    {
      throw DataError(where + ": duplicate segment_id '" + seg.segment_id + "'");
    }
    out.segments.push_back(std::move(seg));
  }
  return out;
}

std::string serialize_segments(SegmentFile const &file)
{
  double const sign = file.orientation == Orientation::kLowerIsBetter ? -1.0 : 1.0;
  std::string out;
  json header = {{"accuracy_orientation",
                  file.orientation == Orientation::kLowerIsBetter ? "lower" : "higher"}};
  out += header.dump() + "\n";
  for (auto const &seg : file.segments)
  {
    json j;
    j["segment_id"] = seg.segment_id;
    j["source"]     = seg.source;
    j["reference"]  = seg.reference;
    json cands      = json::array();
    for (auto const &c : seg.candidates)
    {
      cands.push_back({{"text", c.text},
                       {"system", c.system_id},
                       {"accuracy", sign * c.accuracy},
                       {"logprob", c.logprob},
                       {"token_count", c.token_count}});
    }
    j["candidates"] = std::move(cands);
    out += j.dump() + "\n";
  }
  return out;
}

std::string read_text_file(std::filesystem::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw DataError("cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SegmentFile load_segment_file(std::filesystem::path const &path)
{
  try
  {
    return parse_segments(read_text_file(path));
  }
  catch (DataError const &e)
  {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<SegmentRecord> load_segments(std::filesystem::path const &path)
{
  return load_segment_file(path).segments;
}

// ---------------------------------------------------------------------------
// Instance files

InstanceBundle parse_joint_instance(std::string const &text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (json::parse_error const &e)
  {
    throw DataError(std::string("instance: malformed JSON (") + e.what() + ")");
  }
  if (!j.is_object())
  {
    throw DataError("instance: expected a JSON object");
  }
  std::string const where = "instance";
  auto x_labels           = as_labels(require(j, "x_labels", where), "x_labels");
  auto y_labels           = as_labels(require(j, "y_labels", where), "y_labels");
  auto joint              = as_real_matrix(require(j, "joint", where), "joint");

  InstanceBundle b;
  b.joint = JointInstance(x_labels, y_labels, std::move(joint), kIngestTolerance);

  auto const &dj = require(j, "delta", where);
  if (!dj.is_array() || dj.size() != b.joint.nx())
  {
    throw DataError("delta: expected " + std::to_string(b.joint.nx()) + " x-slices");
  }
  std::vector<double> flat;
  for (std::size_t x = 0; x < dj.size(); ++x)
  {
    auto slice = as_real_matrix(dj[x], "delta[" + std::to_string(x) + "]");
    if (slice.size() != b.joint.ny())
    {
      throw DataError("delta[" + std::to_string(x) + "]: expected " +
                      std::to_string(b.joint.ny()) + " reference rows");
    }
    for (std::size_t yr = 0; yr < slice.size(); ++yr)
    {
      if (slice[yr].size() != b.joint.ny())
      {
        throw DataError("delta[" + std::to_string(x) + "][" + std::to_string(yr) +
                        "]: expected " + std::to_string(b.joint.ny()) + " candidate entries");
      }
      flat.insert(flat.end(), slice[yr].begin(), slice[yr].end());
    }
  }
  b.delta = DistortionTable(b.joint.nx(), b.joint.ny(), std::move(flat));

  auto r = as_real_vector(require(j, "r_y", where), "r_y");
  if (r.size() != b.joint.ny())
  {
    throw DataError("r_y: expected " + std::to_string(b.joint.ny()) + " entries");
  }
  b.r_y = FiniteDistribution(y_labels, std::move(r), kIngestTolerance);

  if (auto it = j.find("kernel"); it != j.end())
  {
    if (it->is_string())
    {
      b.kernel_preset = it->get<std::string>();
    }
    else
    {
      auto table = as_real_matrix(*it, "kernel");
      if (table.size() != b.joint.ny())
      {
        throw DataError("kernel: expected a " + std::to_string(b.joint.ny()) + "x" +
                        std::to_string(b.joint.ny()) + " table");
      }
      for (auto const &row : table)
      {
        if (row.size() != b.joint.ny())
        {
          throw DataError("kernel: ragged table");
        }
        for (double v : row)
        {
          if (!std::isfinite(v))
          {
            throw DataError("kernel: non-finite entry");
          }
        }
      }
      b.kernel_table = std::move(table);
    }
  }
  if (auto it = j.find("points"); it != j.end())
  {
    auto pts = as_real_vector(*it, "points");
    if (pts.size() != b.joint.ny())
    {
      throw DataError("points: expected one coordinate per y label");
    }
    b.points = std::move(pts);
  }
  return b;
}

InstanceBundle load_joint_instance(std::filesystem::path const &path)
{
  try
  {
    return parse_joint_instance(read_text_file(path));
  }
  catch (DataError const &e)
  {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string serialize_joint_instance(InstanceBundle const &b)
{
  json j;
  j["x_labels"] = std::vector<std::string>(b.joint.x_labels().begin(), b.joint.x_labels().end());
  j["y_labels"] = std::vector<std::string>(b.joint.y_labels().begin(), b.joint.y_labels().end());
  json joint    = json::array();
  for (std::size_t x = 0; x < b.joint.nx(); ++x)
  {
    json row = json::array();
    for (std::size_t y = 0; y < b.joint.ny(); ++y)
    {
      row.push_back(b.joint(x, y));
    }
    joint.push_back(std::move(row));
  }
  j["joint"]  = std::move(joint);
  json delta  = json::array();
  for (std::size_t x = 0; x < b.delta.nx(); ++x)
  {
    json slice = json::array();
    for (std::size_t yr = 0; yr < b.delta.ny(); ++yr)
    {
      json row = json::array();
      for (std::size_t yc = 0; yc < b.delta.ny(); ++yc)
      {
        row.push_back(b.delta(x, yr, yc));
      }
      slice.push_back(std::move(row));
    }
    delta.push_back(std::move(slice));
  }
  j["delta"] = std::move(delta);
  j["r_y"]   = std::vector<double>(b.r_y.probs().begin(), b.r_y.probs().end());
  if (b.kernel_table)
  {
    j["kernel"] = *b.kernel_table;
  }
  else if (b.kernel_preset)
  {
    j["kernel"] = *b.kernel_preset;
  }
  if (b.points)
  {
    j["points"] = *b.points;
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// LPP statistics

CorpusLppStats corpus_lpp(std::span<const LppSample> samples)
{
  if (samples.empty())
  {
    throw InvalidArgument("corpus_lpp: no texts");
  }
  double total = 0.0;
  for (auto const &s : samples)
  {
    if (s.token_count < 1)
    {
      throw InvalidArgument("corpus_lpp: token_count must be >= 1");
    }
    total += -s.logprob / s.token_count;
  }
  CorpusLppStats out;
  out.n_texts  = static_cast<std::int64_t>(samples.size());
  out.mean_lpp = total / static_cast<double>(samples.size());
  return out;
}

CorpusLppStats parse_lpp_stats(std::string const &text)
{
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<LppSample> samples;
  std::optional<CorpusLppStats> summary;
  while (std::getline(in, line))
  {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
    {
      continue;
    }
    std::string const where = "line " + std::to_string(lineno);
    json j;
    try
    {
      j = json::parse(line);
    }
    catch (json::parse_error const &e)
    {
      throw DataError(where + ": malformed JSON (" + e.what() + ")");
    }
    if (!j.is_object())
    {
      throw DataError(where + ": expected a JSON object");
    }
    if (j.contains("mean_lpp"))
    {
      if (summary || !samples.empty())
      {
        throw DataError(where + ": a summary line must be the only record");
      }
      CorpusLppStats s;
      s.mean_lpp = as_real(j["mean_lpp"], where + ": field 'mean_lpp'");
      auto const &n = require(j, "n_texts", where);
      if (!n.is_number_integer() || n.get<long long>() < 1)
      {
        throw DataError(where + ": field 'n_texts' must be an integer >= 1");
      }
      s.n_texts = n.get<std::int64_t>();
      if (!std::isfinite(s.mean_lpp))
      {
        throw DataError(where + ": field 'mean_lpp' is not finite");
      }
      summary = s;
      continue;
    }
    if (summary)
    {
      throw DataError(where + ": a summary line must be the only record");
    }
    LppSample s;
    s.logprob = as_real(require(j, "logprob", where), where + ": field 'logprob'");
    if (!std::isfinite(s.logprob) || s.logprob > 0.0)
    {
      throw DataError(where + ": field 'logprob' must be finite and <= 0");
    }
    auto const &tc = require(j, "token_count", where);
    if (!tc.is_number_integer() || tc.get<long long>() < 1)
    {
      throw DataError(where + ": field 'token_count' must be an integer >= 1");
    }
    s.token_count = tc.get<int>();
    samples.push_back(s);
  }
  if (summary)
  {
    return *summary;
  }
  if (samples.empty())
  {
    throw DataError("lpp stats: no records");
  }
  return corpus_lpp(samples);
}

CorpusLppStats load_lpp_stats(std::filesystem::path const &path)
{
  try
  {
    return parse_lpp_stats(read_text_file(path));
  }
  catch (DataError const &e)
  {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace anplane
