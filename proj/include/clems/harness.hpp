// Copyright 2026 The CLEMS Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Experiment protocol: 50/25/25 splits, validation-based depth selection,
// test evaluation under all three reported criteria, and multi-run
// aggregation with normal-approximation confidence intervals.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clems/cost.hpp"
#include "clems/dataset.hpp"
#include "clems/embedding.hpp"
#include "clems/forest.hpp"
#include "clems/mds.hpp"
#include "clems/model.hpp"

namespace clems::harness {

struct Split {
  Dataset train;
  Dataset validation;
  Dataset test;
};

/// Seeded shuffle, then ceil(N/2) train, ceil(N/4) validation, rest test.
/// Throws ValidationError when N < 4.
Split split_dataset(const Dataset& data, std::uint64_t seed);

/// Mean per-instance criterion value. Throws DimensionError on a length
/// mismatch and ValidationError on empty input.
double evaluate(std::span<const LabelVector> truth, std::span<const LabelVector> preds, Criterion criterion);

/// True when `a` is strictly better than `b` under the criterion.
bool better(Criterion criterion, double a, double b) noexcept;

/// Embedding dimension given either as a count or as a percentage of K.
struct EmbedDim {
  double value = 100.0;
  bool percent = true;

  /// Percentages round up; the result is at least 1.
  int resolve(std::size_t num_labels) const;
  std::string to_string() const;
  /// "100%", "50%", "6". Throws ValidationError otherwise.
  static EmbedDim parse(std::string_view text);
};

/// Everything needed to fit one predictor, given the depth.
struct TrainConfig {
  Algorithm algorithm = Algorithm::kClems;
  Criterion criterion = Criterion::kF1;
  EmbedDim embed_dim;
  CandidateSource source = CandidateSource::kTrain;
  mds::Options mds;
  forest::ForestParams forest;
};

/// Fits the configured algorithm. For CANDIDATE_SOURCE all, `extra` supplies
/// the additional labels. Seeds for MDS and forest are derived from `seed`.
Model fit_model(const Dataset& train, const TrainConfig& config, std::uint64_t seed,
                const Dataset* extra = nullptr);

std::vector<int> default_depth_grid();

struct DepthSelection {
  int depth = 0;
  std::vector<double> validation_values;  // aligned with the grid
};

/// Evaluates `model` truncated at each grid depth on `validation` and returns
/// the best; ties go to the smaller depth. The model must have been trained
/// with max_depth at least max(grid).
DepthSelection select_depth(const Model& model, const Dataset& validation, Criterion criterion,
                            std::span<const int> grid);

/// Fits once at max(grid) on `train` and selects on `validation`. A tree
/// grown to depth D equals the deeper tree cut at D, so this is the same as
/// training one model per grid value.
DepthSelection select_depth(const Dataset& train, const Dataset& validation, const TrainConfig& config,
                            std::span<const int> grid, std::uint64_t seed);

inline constexpr int kResultsSchemaVersion = 1;

struct ExperimentConfig {
  std::string dataset_name;
  TrainConfig train;
  std::vector<int> depth_grid = default_depth_grid();
  int n_runs = 5;
  std::uint64_t master_seed = 0;
  /// Evaluate the nearest-neighbor decoding bound on every CLEMS test
  /// prediction whose truth is a candidate.
  bool verify_bound = false;
};

struct BoundStats {
  std::size_t checked = 0;
  std::size_t held = 0;
  std::size_t half_step_held = 0;
  std::size_t skipped = 0;  // truth label outside the candidate set

  bool all_held() const noexcept { return held == checked && half_step_held == checked; }
};

struct RunResult {
  int run = 0;
  std::uint64_t seed = 0;
  int depth = 0;
  std::map<Criterion, double> test_values;
  double wall_time_ms = 0.0;
  std::size_t num_candidates = 0;
  std::optional<BoundStats> bound;
};

struct Summary {
  double mean = 0.0;
  double std = 0.0;    // sample standard deviation, 0 for a single run
  double ci95 = 0.0;   // 1.96 * std / sqrt(n)
};

Summary summarize(std::span<const double> values);

/// Criteria reported for every run.
inline constexpr Criterion kReportedCriteria[] = {Criterion::kF1, Criterion::kAccuracy, Criterion::kRankLoss};

struct ExperimentResult {
  ExperimentConfig config;
  int resolved_dim = 0;
  std::vector<RunResult> runs;
  std::map<Criterion, Summary> summary;
};

/// Seed of run r, shared by every algorithm and criterion so runs are paired.
std::uint64_t run_seed(std::uint64_t master_seed, int run);

RunResult run_single(const Dataset& data, const ExperimentConfig& config, int run);
ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& config);

void write_results_json(std::ostream& out, const ExperimentResult& result);
/// Columns: dataset, algo, criterion, M, run, value, depth, seed, wall_time_ms;
/// one row per run and reported criterion.
void write_results_csv(std::ostream& out, const ExperimentResult& result, bool header = true);

}  // namespace clems::harness
