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

#include "anplane/mqm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "anplane/data_model.hpp"
#include "json.hpp"

namespace anplane::mqm {

namespace {

using json = nlohmann::json;

std::string normalize(std::string const &s)
{
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
  {
    return {};
  }
  auto e = s.find_last_not_of(" \t\r\n");
  std::string out = s.substr(b, e - b + 1);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string> string_list(json const &j, char const *key)
{
  std::vector<std::string> out;
  if (!j.contains(key))
  {
    return out;
  }
  if (!j[key].is_array())
  {
    throw DataError(std::string("taxonomy: '") + key + "' must be an array of strings");
  }
  for (auto const &v : j[key])
  {
    if (!v.is_string())
    {
      throw DataError(std::string("taxonomy: '") + key + "' must be an array of strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

json parse_json(std::string const &text, char const *what)
{
  try
  {
    return json::parse(text);
  }
  catch (json::parse_error const &e)
  {
    throw DataError(std::string(what) + ": " + e.what());
  }
}

Severity severity_or_throw(std::string const &text)
{
  auto s = parse_severity(text);
  if (!s)
  {
    throw DataError("unknown severity '" + text + "'");
  }
  return *s;
}

std::vector<std::string> split_tabs(std::string const &line)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;)
  {
    auto const pos = line.find('\t', start);
    if (pos == std::string::npos)
    {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r')
  {
    out.back().pop_back();
  }
  return out;
}

}  // namespace

char const *severity_name(Severity s) noexcept
{
  switch (s)
  {
  case Severity::kMajor:
    return "MAJOR";
  case Severity::kMinor:
    return "MINOR";
  case Severity::kNeutral:
    return "NEUTRAL";
  case Severity::kNonTranslation:
    return "NON_TRANSLATION";
  }
  return "?";
}

char const *dimension_name(Dimension d) noexcept
{
  switch (d)
  {
  case Dimension::kAccuracy:
    return "accuracy";
  case Dimension::kFluency:
    return "fluency";
  case Dimension::kOther:
    return "other";
  }
  return "?";
}

std::optional<Severity> parse_severity(std::string const &text)
{
  std::string s = normalize(text);
  std::replace(s.begin(), s.end(), '_', '-');
  std::replace(s.begin(), s.end(), ' ', '-');
  if (s == "major")
  {
    return Severity::kMajor;
  }
  if (s == "minor")
  {
    return Severity::kMinor;
  }
  if (s == "neutral" || s == "no-error")
  {
    return Severity::kNeutral;
  }
  if (s == "non-translation" || s == "non-translation!")
  {
    return Severity::kNonTranslation;
  }
  return std::nullopt;
}

ErrorTaxonomy::ErrorTaxonomy(std::string schema_id, std::vector<std::string> accuracy,
                             std::vector<std::string> fluency, std::vector<std::string> other)
  : schema_id_(std::move(schema_id))
{
  auto add = [this](std::vector<std::string> const &cats, Dimension d) {
    for (auto const &c : cats)
    {
      auto const key = normalize(c);
      if (key.empty())
      {
        throw DataError("taxonomy: empty category name");
      }
      auto [it, inserted] = table_.emplace(key, d);
      if (!inserted && it->second != d)
      {
        throw DataError("taxonomy: category '" + c + "' listed under two dimensions");
      }
    }
  };
  add(accuracy, Dimension::kAccuracy);
  add(fluency, Dimension::kFluency);
  add(other, Dimension::kOther);
}

ErrorTaxonomy ErrorTaxonomy::ende_jazh()
{
  return ErrorTaxonomy("ende_jazh",
                       {"Accuracy/Addition", "Accuracy/Creative Reinterpretation",
                        "Accuracy/Gender Mismatch", "Accuracy/Mistranslation", "Accuracy/Omission",
                        "Accuracy/Source language fragment", "Non-translation!"},
                       {"Fluency/Grammar", "Fluency/Inconsistency", "Fluency/Punctuation",
                        "Fluency/Register", "Fluency/Spelling", "Fluency/Text-Breaking",
                        "Locale convention/Address format", "Locale convention/Currency format",
                        "Locale convention/Time format", "Style/Archaic or obscure word choice",
                        "Style/Bad sentence structure", "Style/Unnatural or awkward",
                        "Terminology/Inappropriate for context", "Terminology/Inconsistent"},
                       {"Other", "Source issue", "No-error"});
}

ErrorTaxonomy ErrorTaxonomy::enes()
{
  return ErrorTaxonomy("enes",
                       {"Addition", "Agreement", "Do not translate", "Mistranslation",
                        "MT hallucination", "Omission", "Untranslated", "Wrong named entity",
                        "Wrong term"},
                       {"Capitalization", "Date-time format", "Inconsistency", "Lacks creativity",
                        "Grammar", "Measurement format", "Number format", "Punctuation",
                        "Register", "Spelling", "Unnatural flow", "Whitespace", "Word order",
                        "Wrong language variety"},
                       {"Other", "Source issue", "No-error"});
}

ErrorTaxonomy ErrorTaxonomy::parse(std::string const &json_text, std::string schema_id)
{
  auto const j = parse_json(json_text, "taxonomy");
  if (!j.is_object())
  {
    throw DataError("taxonomy: expected a JSON object");
  }
  if (j.contains("schema_id") && j["schema_id"].is_string())
  {
    schema_id = j["schema_id"].get<std::string>();
  }
  return ErrorTaxonomy(std::move(schema_id), string_list(j, "accuracy"), string_list(j, "fluency"),
                       string_list(j, "other"));
}

ErrorTaxonomy ErrorTaxonomy::load(std::filesystem::path const &path)
{
  return parse(read_text_file(path));
}

ErrorTaxonomy ErrorTaxonomy::from_spec(std::string const &spec)
{
  if (spec == "ende" || spec == "jazh" || spec == "ende_jazh")
  {
    return ende_jazh();
  }
  if (spec == "enes")
  {
    return enes();
  }
  if (spec.rfind("custom:", 0) == 0)
  {
    return load(spec.substr(7));
  }
  throw InvalidArgument("unknown schema '" + spec + "' (expected ende, enes or custom:FILE)");
}

std::optional<Dimension> ErrorTaxonomy::find(std::string const &category) const
{
  auto it = table_.find(normalize(category));
  if (it == table_.end())
  {
    return std::nullopt;
  }
  return it->second;
}

Dimension classify_error(std::string const &category, ErrorTaxonomy const &taxonomy,
                         UnknownCategories *unknown)
{
  if (auto d = taxonomy.find(category))
  {
    return *d;
  }
  if (unknown != nullptr)
  {
    ++(*unknown)[category];
  }
  return Dimension::kOther;
}

SeverityWeights SeverityWeights::defaults()
{
  SeverityWeights w;
  w.set(Severity::kMajor, 5.0);
  w.set(Severity::kMinor, 1.0);
  w.set(Severity::kNonTranslation, 25.0);
  w.set(Severity::kNeutral, 0.0);
  w.add_override({Severity::kMinor, "Fluency/Punctuation", 0.1});
  return w;
}

SeverityWeights SeverityWeights::parse(std::string const &json_text)
{
  auto const j = parse_json(json_text, "weights");
  if (!j.is_object())
  {
    throw DataError("weights: expected a JSON object");
  }
  SeverityWeights w;
  for (auto const &[key, value] : j.items())
  {
    if (key == "overrides")
    {
      if (!value.is_array())
      {
        throw DataError("weights: 'overrides' must be an array");
      }
      for (auto const &o : value)
      {
        if (!o.is_object() || !o.contains("severity") || !o.contains("category") ||
            !o.contains("weight") || !o["weight"].is_number() || !o["severity"].is_string() ||
            !o["category"].is_string())
        {
          throw DataError("weights: each override needs string severity, string category and "
                          "numeric weight");
        }
        w.add_override({severity_or_throw(o["severity"].get<std::string>()),
                        o["category"].get<std::string>(), o["weight"].get<double>()});
      }
      continue;
    }
    if (!value.is_number())
    {
      throw DataError("weights: '" + key + "' must be a number");
    }
    w.set(severity_or_throw(key), value.get<double>());
  }
  return w;
}

SeverityWeights SeverityWeights::load(std::filesystem::path const &path)
{
  return parse(read_text_file(path));
}

void SeverityWeights::set(Severity s, double w)
{
  if (!(w >= 0.0) || !std::isfinite(w))
  {
    throw DataError(std::string("weights: ") + severity_name(s) + " must be finite and >= 0");
  }
  base_[s] = w;
}

void SeverityWeights::add_override(WeightOverride o)
{
  if (!(o.weight >= 0.0) || !std::isfinite(o.weight))
  {
    throw DataError("weights: override for '" + o.category + "' must be finite and >= 0");
  }
  overrides_.push_back(std::move(o));
}

std::optional<double> SeverityWeights::weight(Severity s, std::string const &category) const
{
  auto const key = normalize(category);
  for (auto const &o : overrides_)
  {
    if (o.severity == s && normalize(o.category) == key)
    {
      return o.weight;
    }
  }
  auto it = base_.find(s);
  if (it == base_.end())
  {
    return std::nullopt;
  }
  return it->second;
}

SeverityWeights SeverityWeights::scaled(double factor) const
{
  SeverityWeights w;
  for (auto const &[s, v] : base_)
  {
    w.set(s, v * factor);
  }
  for (auto o : overrides_)
  {
    o.weight *= factor;
    w.add_override(std::move(o));
  }
  return w;
}

std::string SeverityWeights::describe() const
{
  std::string out = "severity weights:\n";
  char buf[160];
  for (auto const &[s, v] : base_)
  {
    std::snprintf(buf, sizeof buf, "  %-16s %g\n", severity_name(s), v);
    out += buf;
  }
  for (auto const &o : overrides_)
  {
    std::snprintf(buf, sizeof buf, "  %-16s %g  (category %s)\n", severity_name(o.severity),
                  o.weight, o.category.c_str());
    out += buf;
  }
  return out;
}

ScoreTable score_dimension(std::span<const Annotation> annotations, ErrorTaxonomy const &taxonomy,
                           SeverityWeights const &weights, Dimension dimension,
                           std::span<const std::string> roster)
{
  using PairKey = std::tuple<std::string, std::string, std::string>;
  struct Acc
  {
    std::map<PairKey, double> penalty;
    std::size_t errors = 0;
  };
  ScoreTable table;
  table.dimension = dimension;
  std::map<std::string, Acc> by_system;
  for (auto const &id : roster)
  {
    by_system[id];
  }
  for (auto const &a : annotations)
  {
    auto &acc         = by_system[a.system_id];
    double &pen       = acc.penalty[{a.doc_id, a.segment_id, a.rater_id}];
    Dimension const d = classify_error(a.category, taxonomy, &table.unknown);
    if (d != dimension || d == Dimension::kOther)
    {
      continue;
    }
    auto const w = weights.weight(a.severity, a.category);
    if (!w)
    {
      throw DataError(std::string("missing weight for severity ") + severity_name(a.severity));
    }
    pen += *w;
    ++acc.errors;
  }
  for (auto const &[id, acc] : by_system)
  {
    SystemScore s;
    s.system_id = id;
    s.n_pairs   = acc.penalty.size();
    s.n_errors  = acc.errors;
    if (s.n_pairs > 0)
    {
      std::vector<double> v;
      v.reserve(acc.penalty.size());
      for (auto const &[k, p] : acc.penalty)
      {
        v.push_back(p);
      }
      double total = 0.0;
      for (double p : v)
      {
        total += p;
      }
      s.score = total == 0.0 ? 0.0 : -total / static_cast<double>(s.n_pairs);
    }
    table.systems.push_back(std::move(s));
  }
  return table;
}

PartitionCounts partition_counts(std::span<const Annotation> annotations,
                                 ErrorTaxonomy const &taxonomy)
{
  PartitionCounts c;
  for (auto const &a : annotations)
  {
    switch (classify_error(a.category, taxonomy))
    {
    case Dimension::kAccuracy:
      ++c.accuracy;
      break;
    case Dimension::kFluency:
      ++c.fluency;
      break;
    case Dimension::kOther:
      ++c.ignored;
      break;
    }
  }
  return c;
}

std::vector<Annotation> parse_mqm_tsv(std::string const &text)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
  {
    throw DataError("mqm: empty file");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
  {
    line.erase(0, 3);
  }
  auto const header = split_tabs(line);
  auto column       = [&](std::initializer_list<char const *> names) -> std::optional<std::size_t> {
    for (char const *n : names)
    {
      for (std::size_t i = 0; i < header.size(); ++i)
      {
        if (normalize(header[i]) == normalize(n))
        {
          return i;
        }
      }
    }
    return std::nullopt;
  };
  auto required = [&](std::initializer_list<char const *> names, char const *label) {
    auto c = column(names);
    if (!c)
    {
      throw DataError(std::string("mqm: missing required column '") + label + "'");
    }
    return *c;
  };
  std::size_t const c_system   = required({"system"}, "system");
  std::size_t const c_seg      = required({"seg_id", "segment_id", "globalSegId"}, "seg_id");
  std::size_t const c_rater    = required({"rater", "rater_id"}, "rater");
  std::size_t const c_category = required({"category"}, "category");
  std::size_t const c_severity = required({"severity"}, "severity");
  auto const c_doc             = column({"doc", "doc_id"});
  std::size_t const need =
      std::max({c_system, c_seg, c_rater, c_category, c_severity, c_doc.value_or(0)}) + 1;

  std::vector<Annotation> out;
  std::size_t lineno = 1;
  while (std::getline(in, line))
  {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
    {
      continue;
    }
    auto const f = split_tabs(line);
    if (f.size() < need)
    {
      throw DataError("mqm: line " + std::to_string(lineno) + ": expected at least " +
                      std::to_string(need) + " columns, found " + std::to_string(f.size()));
    }
    Annotation a;
    a.system_id  = f[c_system];
    a.segment_id = f[c_seg];
    a.rater_id   = f[c_rater];
    a.category   = f[c_category];
    a.doc_id     = c_doc ? f[*c_doc] : std::string();
    auto sev     = parse_severity(f[c_severity]);
    if (!sev)
    {
      throw DataError("mqm: line " + std::to_string(lineno) + ": unknown severity '" +
                      f[c_severity] + "'");
    }
    a.severity = *sev;
    if (normalize(a.category) == "non-translation!")
    {
      a.severity = Severity::kNonTranslation;
    }
    if (normalize(a.category).empty())
    {
      throw DataError("mqm: line " + std::to_string(lineno) + ": empty category");
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Annotation> load_mqm_tsv(std::filesystem::path const &path)
{
  return parse_mqm_tsv(read_text_file(path));
}

}  // namespace anplane::mqm
