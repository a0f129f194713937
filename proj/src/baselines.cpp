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

#include "clems/baselines.hpp"

#include <string>

#include "clems/error.hpp"

namespace clems {

LabelVector round_scores(const Eigen::VectorXd& scores) {
  LabelVector y(static_cast<std::size_t>(scores.size()));
  for (Eigen::Index i = 0; i < scores.size(); ++i) y.set(static_cast<std::size_t>(i), scores(i) >= 0.5);
  return y;
}

Eigen::MatrixXd PlstTransform::encode(const Eigen::MatrixXd& labels) const {
  return (labels.rowwise() - mean.transpose()) * projection;
}

Eigen::VectorXd PlstTransform::decode_scores(const Eigen::VectorXd& z) const {
  if (z.size() != projection.cols()) throw DimensionError("PLST decode: embedding size mismatch");
  return mean + projection * z;
}

PlstTransform fit_plst_transform(const Eigen::MatrixXd& labels, int dim) {
  const auto k = static_cast<int>(labels.cols());
  if (dim < 1 || dim > k)
    throw ValidationError("PLST dimension must lie in [1, " + std::to_string(k) + "], got " +
                          std::to_string(dim));
  if (labels.rows() == 0) throw ValidationError("PLST needs at least one instance");
  PlstTransform t;
  t.mean = labels.colwise().mean().transpose();
  const Eigen::MatrixXd centered = labels.rowwise() - t.mean.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullV);
  t.projection = svd.matrixV().leftCols(dim);
  return t;
}

LabelVector PlstModel::predict(std::span<const double> x) const {
  return round_scores(transform.decode_scores(regressor.predict(x)));
}

LabelVector PlstModel::predict_at_depth(std::span<const double> x, int depth) const {
  return round_scores(transform.decode_scores(regressor.predict_at_depth(x, depth)));
}

PlstModel fit_plst(const Dataset& data, int dim, const forest::ForestParams& params, std::uint64_t seed) {
  const Eigen::MatrixXd labels = data.label_matrix();
  PlstTransform t = fit_plst_transform(labels, dim);
  const Eigen::MatrixXd targets = t.encode(labels);
  return {std::move(t), forest::fit_forest(data.feature_matrix(), targets, params, seed)};
}

LabelVector BrModel::predict(std::span<const double> x) const {
  return round_scores(classifiers.predict(x));
}

LabelVector BrModel::predict_at_depth(std::span<const double> x, int depth) const {
  return round_scores(classifiers.predict_at_depth(x, depth));
}

BrModel fit_br(const Dataset& data, const forest::ForestParams& params, std::uint64_t seed) {
  return {forest::fit_forest(data.feature_matrix(), data.label_matrix(), params, seed)};
}

}  // namespace clems
