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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anplane/error.hpp"

namespace anplane::mqm {

enum class Severity
{
  kMajor,
  kMinor,
  kNeutral,
  kNonTranslation,
};

enum class Dimension
{
  kAccuracy,
  kFluency,
  kOther,
};

char const *severity_name(Severity s) noexcept;
char const *dimension_name(Dimension d) noexcept;
/// Case-insensitive; accepts major, minor, neutral, non-translation and
/// no-error (as neutral).
std::optional<Severity> parse_severity(std::string const &text);

struct Annotation
{
  std::string system_id;
  std::string doc_id;
  std::string segment_id;
  std::string rater_id;
  std::string category;
  Severity severity = Severity::kMinor;
};

/// Category to dimension mapping. Lookups are case-insensitive and ignore
/// surrounding whitespace.
class ErrorTaxonomy
{
public:
  ErrorTaxonomy() = default;
  ErrorTaxonomy(std::string schema_id, std::vector<std::string> accuracy,
                std::vector<std::string> fluency, std::vector<std::string> other);

  static ErrorTaxonomy ende_jazh();
  static ErrorTaxonomy enes();
  /// JSON object with "accuracy", "fluency" and "other" string arrays.
  static ErrorTaxonomy parse(std::string const &json_text, std::string schema_id = "custom");
  static ErrorTaxonomy load(std::filesystem::path const &path);
  /// `ende`, `ende_jazh`, `jazh`, `enes` or `custom:FILE`.
  static ErrorTaxonomy from_spec(std::string const &spec);

  std::optional<Dimension> find(std::string const &category) const;
  std::string const &schema_id() const noexcept { return schema_id_; }
  std::size_t size() const noexcept { return table_.size(); }

private:
  std::string schema_id_;
  std::map<std::string, Dimension> table_;
};

/// Unknown categories seen while classifying, with counts.
using UnknownCategories = std::map<std::string, std::size_t>;

/// Unknown categories route to OTHER and are counted in `unknown` if given.
Dimension classify_error(std::string const &category, ErrorTaxonomy const &taxonomy,
                         UnknownCategories *unknown = nullptr);

struct WeightOverride
{
  Severity severity = Severity::kMinor;
  std::string category;
  double weight = 0.0;
};

class SeverityWeights
{
public:
  SeverityWeights() = default;

  /// MAJOR 5, MINOR 1, NON_TRANSLATION 25, NEUTRAL 0, MINOR Fluency/Punctuation 0.1.
  static SeverityWeights defaults();
  /// {"MAJOR": 5, ..., "overrides": [{"severity": .., "category": .., "weight": ..}]}
  static SeverityWeights parse(std::string const &json_text);
  static SeverityWeights load(std::filesystem::path const &path);

  void set(Severity s, double w);
  void add_override(WeightOverride o);
  std::optional<double> weight(Severity s, std::string const &category) const;
  SeverityWeights scaled(double factor) const;

  std::map<Severity, double> const &base() const noexcept { return base_; }
  std::vector<WeightOverride> const &overrides() const noexcept { return overrides_; }

  /// Human-readable table printed with every report.
  std::string describe() const;

private:
  std::map<Severity, double> base_;
  std::vector<WeightOverride> overrides_;
};

struct SystemScore
{
  std::string system_id;
  double score         = 0.0;  ///< mean over (segment, rater) pairs of -penalty
  std::size_t n_pairs  = 0;    ///< observed (segment, rater) pairs
  std::size_t n_errors = 0;    ///< annotations counted in this dimension
};

struct ScoreTable
{
  Dimension dimension = Dimension::kAccuracy;
  std::vector<SystemScore> systems;  ///< sorted by system id
  UnknownCategories unknown;
};

/// Systems in `roster` with no annotations score 0.
ScoreTable score_dimension(std::span<const Annotation> annotations, ErrorTaxonomy const &taxonomy,
                           SeverityWeights const &weights, Dimension dimension,
                           std::span<const std::string> roster = {});

struct PartitionCounts
{
  std::size_t accuracy = 0;
  std::size_t fluency  = 0;
  std::size_t ignored  = 0;
};

PartitionCounts partition_counts(std::span<const Annotation> annotations,
                                 ErrorTaxonomy const &taxonomy);

/// Tab-separated, header row first. Column order is free; recognised names are
/// system, doc|doc_id, seg_id|segment_id|globalSegId, rater, category, severity.
std::vector<Annotation> parse_mqm_tsv(std::string const &text);
std::vector<Annotation> load_mqm_tsv(std::filesystem::path const &path);

}  // namespace anplane::mqm
