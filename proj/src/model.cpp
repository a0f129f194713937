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

#include "clems/model.hpp"

#include <cctype>

#include "clems/error.hpp"

namespace clems {

std::string_view algorithm_name(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::kClems: return "clems";
    case Algorithm::kPlst: return "plst";
    case Algorithm::kBr: return "br";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  std::string s;
  for (char ch : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (s == "clems") return Algorithm::kClems;
  if (s == "plst") return Algorithm::kPlst;
  if (s == "br") return Algorithm::kBr;
  return std::nullopt;
}

LabelVector predict_with(const CsEmbedding& embedding, const forest::MultiTargetRegressor& regressor,
                         std::span<const double> x) {
  const Eigen::VectorXd z = regressor.predict(x);
  return embedding.decode(z).label;
}

LabelVector ClemsModel::predict(std::span<const double> x) const {
  return predict_with(embedding, regressor, x);
}

LabelVector ClemsModel::predict_at_depth(std::span<const double> x, int depth) const {
  return embedding.decode(regressor.predict_at_depth(x, depth)).label;
}

ClemsModel fit_clems(const Dataset& train, const ClemsOptions& options, const Dataset* extra) {
  const CandidateSet candidates = build_candidate_set(train, options.source, extra);
  EmbeddingOptions eo;
  eo.dim = options.dim;
  eo.mds = options.mds;
  CsEmbedding embedding = fit_embedding(candidates, options.cost, eo);

  Eigen::MatrixXd targets(static_cast<Eigen::Index>(train.size()), embedding.dim());
  for (std::size_t i = 0; i < train.size(); ++i)
    targets.row(static_cast<Eigen::Index>(i)) = embedding.embed(train[i].label).transpose();
  forest::ForestModel regressor =
      forest::fit_forest(train.feature_matrix(), targets, options.forest, options.forest_seed);
  return {std::move(embedding), std::move(regressor)};
}

Algorithm Model::algorithm() const noexcept {
  switch (v_.index()) {
    case 0: return Algorithm::kClems;
    case 1: return Algorithm::kPlst;
    default: return Algorithm::kBr;
  }
}

const forest::ForestModel& Model::regressor() const {
  return std::visit(
      [](const auto& m) -> const forest::ForestModel& {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BrModel>)
          return m.classifiers;
        else
          return m.regressor;
      },
      v_);
}

forest::ForestModel& Model::regressor() {
  return const_cast<forest::ForestModel&>(std::as_const(*this).regressor());
}

LabelVector Model::predict(std::span<const double> x) const {
  return std::visit([&](const auto& m) { return m.predict(x); }, v_);
}

LabelVector Model::predict_at_depth(std::span<const double> x, int depth) const {
  return std::visit([&](const auto& m) { return m.predict_at_depth(x, depth); }, v_);
}

std::vector<LabelVector> Model::predict_all(const Dataset& data) const {
  if (static_cast<int>(data.num_features()) != regressor().num_features())
    throw DimensionError("dataset has " + std::to_string(data.num_features()) +
                         " features, model expects " + std::to_string(regressor().num_features()));
  std::vector<LabelVector> out;
  out.reserve(data.size());
  for (const auto& inst : data.instances()) out.push_back(predict(inst.features));
  return out;
}

}  // namespace clems
