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

// Example-based multi-label criteria and the cost view used for embedding.
//
// All functions take (truth, prediction) in that order. Rank loss is the
// only asymmetric one.

#include <optional>
#include <string>
#include <string_view>

#include "clems/dataset.hpp"

namespace clems {

enum class Criterion { kHamming, kF1, kAccuracy, kRankLoss };

/// Fraction of differing components.
double hamming_loss(const LabelVector& truth, const LabelVector& pred);

/// 2|y & p| / (|y| + |p|); 1 when both are empty.
double f1_score(const LabelVector& truth, const LabelVector& pred);

/// |y & p| / |y | p|; 1 when both are empty.
double accuracy_score(const LabelVector& truth, const LabelVector& pred);

/// Unnormalized count of mis-ordered relevant/irrelevant pairs, ties count 1/2.
double rank_loss(const LabelVector& truth, const LabelVector& pred);

/// True for criteria reported as scores (higher is better).
constexpr bool is_score(Criterion c) noexcept {
  return c == Criterion::kF1 || c == Criterion::kAccuracy;
}

/// Raw criterion value: score for F1/Accuracy, loss otherwise.
double criterion_value(Criterion c, const LabelVector& truth, const LabelVector& pred);

std::string_view criterion_name(Criterion c) noexcept;
/// Accepts "hamming", "f1", "accuracy"/"acc", "rank"/"rankloss"/"rank_loss".
std::optional<Criterion> parse_criterion(std::string_view name);

/// Penalty of predicting `pred` when the truth is `truth`, always >= 0 and zero
/// on the diagonal. Scores are turned into costs as 1 - score.
struct CostSpec {
  Criterion criterion = Criterion::kF1;

  double operator()(const LabelVector& truth, const LabelVector& pred) const;
};

double cost_of(const CostSpec& spec, const LabelVector& truth, const LabelVector& pred);

/// The isotonic transform applied to costs before embedding: sqrt.
double isotonic_delta(double cost);

}  // namespace clems
