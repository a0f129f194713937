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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "clems/baselines.hpp"
#include "clems/embedding.hpp"
#include "clems/forest.hpp"

namespace clems {

enum class Algorithm { kClems, kPlst, kBr };

std::string_view algorithm_name(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// Embedding plus a forest regressing features onto truth-role points.
struct ClemsModel {
  CsEmbedding embedding;
  forest::ForestModel regressor;

  LabelVector predict(std::span<const double> x) const;
  LabelVector predict_at_depth(std::span<const double> x, int depth) const;
};

/// Decodes the output of any regressor through the embedding.
LabelVector predict_with(const CsEmbedding& embedding, const forest::MultiTargetRegressor& regressor,
                         std::span<const double> x);

struct ClemsOptions {
  CostSpec cost;
  int dim = 0;
  CandidateSource source = CandidateSource::kTrain;
  mds::Options mds;
  forest::ForestParams forest;
  std::uint64_t forest_seed = 0;
};

/// Fits the embedding on the candidate labels of `train` (plus `extra` for
/// CandidateSource::kAll), then a forest from train features to the embedded training labels.
ClemsModel fit_clems(const Dataset& train, const ClemsOptions& options, const Dataset* extra = nullptr);

/// Any of the three trained predictors.
class Model {
 public:
  using Variant = std::variant<ClemsModel, PlstModel, BrModel>;

  explicit Model(Variant v) : v_(std::move(v)) {}

  Algorithm algorithm() const noexcept;
  const Variant& variant() const noexcept { return v_; }
  Variant& variant() noexcept { return v_; }

  const forest::ForestModel& regressor() const;
  forest::ForestModel& regressor();

  LabelVector predict(std::span<const double> x) const;
  LabelVector predict_at_depth(std::span<const double> x, int depth) const;
  std::vector<LabelVector> predict_all(const Dataset& data) const;

  std::vector<std::string> label_names;
  std::vector<std::string> feature_names;

 private:
  Variant v_;
};

}  // namespace clems
