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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anplane/error.hpp"

namespace anplane {

inline constexpr double kSyntheticTolerance = 1e-9;
inline constexpr double kIngestTolerance    = 1e-6;

/// Probability mass function over an ordered, labelled finite support.
class FiniteDistribution
{
public:
  FiniteDistribution() = default;

  /// Validates non-negativity, unique labels and sum-to-one within `tolerance`.
  FiniteDistribution(std::vector<std::string> labels, std::vector<double> probs,
                     double tolerance = kSyntheticTolerance);

  /// Labels "0", "1", ... for quick construction in numerical code.
  static FiniteDistribution from_probs(std::vector<double> probs,
                                       double tolerance = kSyntheticTolerance);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::span<const std::string> labels() const noexcept { return labels_; }
  std::optional<std::size_t> index_of(std::string const &label) const;

  bool operator==(FiniteDistribution const &) const = default;

private:
  std::vector<std::string> labels_;
  std::vector<double> probs_;
};

/// Joint mass P(x, y) stored row-major as [x][y].
class JointInstance
{
public:
  JointInstance() = default;
  JointInstance(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
                std::vector<std::vector<double>> joint, double tolerance = kSyntheticTolerance);

  std::size_t nx() const noexcept { return x_labels_.size(); }
  std::size_t ny() const noexcept { return y_labels_.size(); }
  double operator()(std::size_t x, std::size_t y) const { return joint_[x * ny() + y]; }

  std::span<const std::string> x_labels() const noexcept { return x_labels_; }
  std::span<const std::string> y_labels() const noexcept { return y_labels_; }

  FiniteDistribution marginal_x() const;
  FiniteDistribution marginal_y() const;
  /// P(y | x); throws when P_x(x) = 0.
  FiniteDistribution conditional(std::size_t x) const;

  bool operator==(JointInstance const &) const = default;

private:
  std::vector<std::string> x_labels_;
  std::vector<std::string> y_labels_;
  std::vector<double> joint_;
};

/// A translation system Q(y | x): one distribution over y per source x.
class ConditionalSystem
{
public:
  ConditionalSystem() = default;
  ConditionalSystem(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
                    std::vector<std::vector<double>> rows, double tolerance = kSyntheticTolerance);

  /// Every row equal to `row`; the input-independent system.
  static ConditionalSystem constant_rows(JointInstance const &inst, std::span<const double> row);

  std::size_t nx() const noexcept { return x_labels_.size(); }
  std::size_t ny() const noexcept { return y_labels_.size(); }
  double operator()(std::size_t x, std::size_t y) const { return rows_[x * ny() + y]; }
  std::span<const double> row(std::size_t x) const
  {
    return std::span<const double>(rows_).subspan(x * ny(), ny());
  }
  std::span<const std::string> x_labels() const noexcept { return x_labels_; }
  std::span<const std::string> y_labels() const noexcept { return y_labels_; }

  /// Throws InvalidArgument if label sets differ from the instance.
  void check_matches(JointInstance const &inst) const;

private:
  std::vector<std::string> x_labels_;
  std::vector<std::string> y_labels_;
  std::vector<double> rows_;
};

/// Δ(x, y_ref, y_cand), x-major.
class DistortionTable
{
public:
  DistortionTable() = default;
  DistortionTable(std::size_t nx, std::size_t ny, std::vector<double> values);
  static DistortionTable exact_match(std::size_t nx, std::size_t ny);
  static DistortionTable zeros(std::size_t nx, std::size_t ny);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  double operator()(std::size_t x, std::size_t y_ref, std::size_t y_cand) const
  {
    return values_[(x * ny_ + y_ref) * ny_ + y_cand];
  }
  std::span<const double> values() const noexcept { return values_; }
  DistortionTable scaled(double factor) const;

  bool operator==(DistortionTable const &) const = default;

private:
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::vector<double> values_;
};

struct CandidateRecord
{
  std::string text;
  std::string system_id;
  double accuracy = 0.0;  ///< oriented higher-is-better
  double logprob  = 0.0;  ///< log Γ(y), nats, ≤ 0
  int token_count = 1;

  double nll_per_token() const { return -logprob / token_count; }
  bool operator==(CandidateRecord const &) const = default;
};

struct SegmentRecord
{
  std::string segment_id;
  std::string source;
  std::string reference;
  std::vector<CandidateRecord> candidates;

  bool operator==(SegmentRecord const &) const = default;
};

enum class Orientation
{
  kHigherIsBetter,
  kLowerIsBetter,
};

struct SegmentFile
{
  Orientation orientation = Orientation::kHigherIsBetter;
  std::vector<SegmentRecord> segments;
};

struct CorpusLppStats
{
  double mean_lpp = 0.0;
  std::int64_t n_texts = 0;
};

struct LppSample
{
  double logprob  = 0.0;
  int token_count = 1;
};

/// Instance file contents: the joint, its distortion table, and optional
/// kernel / point data used by D2-type divergences.
struct InstanceBundle
{
  JointInstance joint;
  DistortionTable delta;
  FiniteDistribution r_y;
  std::optional<std::vector<std::vector<double>>> kernel_table;
  std::optional<std::string> kernel_preset;
  std::optional<std::vector<double>> points;

  bool operator==(InstanceBundle const &) const = default;
};

/// Reads a line-delimited segment file. Accuracy values are sign-normalised to
/// higher-is-better when the header declares `"accuracy_orientation": "lower"`.
SegmentFile load_segment_file(std::filesystem::path const &path);
std::vector<SegmentRecord> load_segments(std::filesystem::path const &path);
SegmentFile parse_segments(std::string const &text);
/// Writes the header plus one line per segment; accuracies are written as stored.
std::string serialize_segments(SegmentFile const &file);

InstanceBundle load_joint_instance(std::filesystem::path const &path);
InstanceBundle parse_joint_instance(std::string const &text);
std::string serialize_joint_instance(InstanceBundle const &bundle);

/// Monolingual statistics: per-text lines or a single summary object.
CorpusLppStats load_lpp_stats(std::filesystem::path const &path);
CorpusLppStats parse_lpp_stats(std::string const &text);

CorpusLppStats corpus_lpp(std::span<const LppSample> samples);

std::string read_text_file(std::filesystem::path const &path);

}  // namespace anplane
