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

// Cost-sensitive label embedding.
//
// Every candidate label vector y_i is embedded twice: a truth-role point t_i
// and a prediction-role point p_i. MDS places them so that ||t_i - p_j||
// approximates sqrt(c(y_i, y_j)), weighted by the frequency of y_i. An
// instance labelled y is regressed onto t_y; decoding returns the candidate
// whose prediction-role point is nearest, so the distance it minimizes tracks
// c(truth, prediction) with the arguments in that order.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "clems/cost.hpp"
#include "clems/dataset.hpp"
#include "clems/mds.hpp"

namespace clems {

enum class CandidateSource { kTrain, kAll };

/// Distinct label vectors with occurrence counts, in first-seen order.
class CandidateSet {
 public:
  CandidateSet() = default;
  /// Throws ValidationError on duplicates, zero frequencies, size mismatch, or
  /// an empty list.
  CandidateSet(std::vector<LabelVector> labels, std::vector<std::size_t> freqs,
               CandidateSource source = CandidateSource::kTrain);

  std::size_t size() const noexcept { return labels_.size(); }
  const LabelVector& label(std::size_t i) const { return labels_.at(i); }
  std::size_t freq(std::size_t i) const { return freqs_.at(i); }
  std::span<const LabelVector> labels() const noexcept { return labels_; }
  std::span<const std::size_t> freqs() const noexcept { return freqs_; }
  CandidateSource source() const noexcept { return source_; }

  std::optional<std::size_t> index_of(const LabelVector& y) const;

 private:
  std::vector<LabelVector> labels_;
  std::vector<std::size_t> freqs_;
  CandidateSource source_ = CandidateSource::kTrain;
  std::unordered_map<LabelVector, std::size_t, LabelVectorHash> index_;
};

/// Collects the distinct labels of `data`; with kAll, the labels of `extra`
/// are added too and every contributing instance is counted.
CandidateSet build_candidate_set(const Dataset& data, CandidateSource source = CandidateSource::kTrain,
                                 const Dataset* extra = nullptr);

/// The 2L x 2L problem: objects [0, L) are truth-role copies, [L, 2L)
/// prediction-role copies. Only the off-diagonal blocks carry weight.
mds::Problem build_mirrored_problem(const CandidateSet& candidates, const CostSpec& cost, int dim);

struct EmbeddingOptions {
  int dim = 0;  // required, >= 1
  mds::Options mds;
};

struct Decoded {
  std::size_t index = 0;
  LabelVector label;
  double distance = 0.0;
};

/// z is the decoding-set point of the true label, z_q the decoded one.
struct BoundCheck {
  double lhs = 0.0;        // delta(c(y, y_q))^2
  double embed_err = 0.0;  // (d(z, z_q) - delta(c(y, y_q)))^2
  double regr_err = 0.0;   // d(z, z_hat)^2
  double half_step_gap = 0.0;  // d(z, z_hat) - d(z, z_q) / 2, nonnegative in theory
  bool holds = false;
};

class CsEmbedding {
 public:
  CsEmbedding(CandidateSet candidates, CostSpec cost, Eigen::MatrixXd truth_coords,
              Eigen::MatrixXd pred_coords, double stress, std::uint64_t seed, int iterations);

  const CandidateSet& candidates() const noexcept { return candidates_; }
  const CostSpec& cost() const noexcept { return cost_; }
  int dim() const noexcept { return static_cast<int>(truth_.cols()); }
  /// L x M truth-role coordinates, the regression targets.
  const Eigen::MatrixXd& truth_coords() const noexcept { return truth_; }
  /// L x M prediction-role coordinates, the decoding set.
  const Eigen::MatrixXd& pred_coords() const noexcept { return pred_; }
  double stress() const noexcept { return stress_; }
  std::uint64_t seed() const noexcept { return seed_; }
  int iterations() const noexcept { return iterations_; }

  /// Truth-role coordinates of y. Throws NotEmbeddableError if y is not a
  /// candidate.
  Eigen::VectorXd embed(const LabelVector& y) const;

  /// Nearest prediction-role point. Ties go to the more frequent candidate,
  /// then to the lower index.
  Decoded decode(std::span<const double> z) const;
  Decoded decode(const Eigen::VectorXd& z) const {
    return decode(std::span<const double>(z.data(), static_cast<std::size_t>(z.size())));
  }

  /// Evaluates the nearest-neighbor decoding bound for a candidate truth
  /// label and a predicted vector. `slack` absorbs float round-off.
  BoundCheck bound_check(const LabelVector& truth, std::span<const double> z_hat,
                             double slack = 1e-9) const;

 private:
  CandidateSet candidates_;
  CostSpec cost_;
  Eigen::MatrixXd truth_;
  Eigen::MatrixXd pred_;
  double stress_;
  std::uint64_t seed_;
  int iterations_;
};

/// Builds the mirrored problem, solves it, and splits the coordinates.
/// A single candidate is allowed: its two points coincide at the origin.
CsEmbedding fit_embedding(const CandidateSet& candidates, const CostSpec& cost,
                          const EmbeddingOptions& options);

}  // namespace clems
