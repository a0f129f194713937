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

// Cost-insensitive reference methods: principal label space transformation
// (PLST) and binary relevance (BR). Both round real-valued label scores at
// 0.5, with 0.5 itself rounding up.

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "clems/dataset.hpp"
#include "clems/forest.hpp"

namespace clems {

/// Mean-centered labels projected on the top right singular vectors.
struct PlstTransform {
  Eigen::VectorXd mean;        // K
  Eigen::MatrixXd projection;  // K x M, orthonormal columns

  Eigen::MatrixXd encode(const Eigen::MatrixXd& labels) const;  // N x K -> N x M
  Eigen::VectorXd decode_scores(const Eigen::VectorXd& z) const;  // M -> K
};

/// Throws ValidationError unless 1 <= dim <= K.
PlstTransform fit_plst_transform(const Eigen::MatrixXd& labels, int dim);

struct PlstModel {
  PlstTransform transform;
  forest::ForestModel regressor;

  LabelVector predict(std::span<const double> x) const;
  LabelVector predict_at_depth(std::span<const double> x, int depth) const;
};

PlstModel fit_plst(const Dataset& data, int dim, const forest::ForestParams& params, std::uint64_t seed);

struct BrModel {
  /// One target per label; the forest output estimates P(label = 1).
  forest::ForestModel classifiers;

  LabelVector predict(std::span<const double> x) const;
  LabelVector predict_at_depth(std::span<const double> x, int depth) const;
};

BrModel fit_br(const Dataset& data, const forest::ForestParams& params, std::uint64_t seed);

/// Component-wise score >= 0.5 -> 1.
LabelVector round_scores(const Eigen::VectorXd& scores);

}  // namespace clems
