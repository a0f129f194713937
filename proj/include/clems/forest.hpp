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

// CART regression trees and bagged random forests, one forest per target.
//
// Every node draws its feature subset from an RNG seeded by (tree seed, node
// path), so the tree grown with max_depth = D is exactly the top D levels of
// the tree grown with any larger max_depth. Each node also keeps its sample
// mean, which lets one deep fit answer predictions for every shallower depth.

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace clems::forest {

inline constexpr int kUnlimitedDepth = std::numeric_limits<int>::max();

struct Node {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  double value = 0.0;  // mean target of the samples reaching this node

  bool is_leaf() const noexcept { return feature < 0; }
};

struct TreeParams {
  int max_depth = kUnlimitedDepth;
  int min_leaf = 1;
  /// Features examined per split, at least one.
  int max_features = 1;
};

class Tree {
 public:
  Tree() = default;
  /// Nodes in preorder, root first. Throws ValidationError if the links are
  /// not a proper binary tree.
  explicit Tree(std::vector<Node> nodes);

  /// Root-to-leaf walk, stopping early once `depth_cap` splits were taken.
  double predict(std::span<const double> x, int depth_cap = kUnlimitedDepth) const;
  std::span<const Node> nodes() const noexcept { return nodes_; }
  /// Longest root-to-leaf path, in splits.
  int depth() const;

 private:
  std::vector<Node> nodes_;
};

/// Greedy variance-reduction tree. `weights` are per-row multiplicities
/// (bootstrap counts); rows with weight 0 are ignored. Split thresholds are
/// midpoints between consecutive distinct values; ties in gain go to the
/// lower feature index, then the lower threshold.
Tree fit_tree(const Eigen::MatrixXd& x, std::span<const double> targets,
              std::span<const double> weights, const TreeParams& params, std::uint64_t seed);

struct ForestParams {
  int n_trees = 100;
  int max_depth = kUnlimitedDepth;
  int min_leaf = 1;
  /// Fraction of the d features tried per split (at least one).
  double feature_fraction = 1.0 / 3.0;
  bool bootstrap = true;

  int features_per_split(int num_features) const;
};

/// Anything mapping a d-vector to an M-vector.
class MultiTargetRegressor {
 public:
  virtual ~MultiTargetRegressor() = default;
  virtual int num_features() const = 0;
  virtual int num_targets() const = 0;
  virtual Eigen::VectorXd predict(std::span<const double> x) const = 0;
};

/// M independent single-target forests.
class ForestModel : public MultiTargetRegressor {
 public:
  ForestModel() = default;
  ForestModel(ForestParams params, std::uint64_t seed, int num_features,
              std::vector<std::vector<Tree>> trees_per_target);

  int num_features() const override { return num_features_; }
  int num_targets() const override { return static_cast<int>(trees_.size()); }
  const ForestParams& params() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<std::vector<Tree>>& trees() const noexcept { return trees_; }

  /// Average over trees, per target, at the model's prediction depth.
  Eigen::VectorXd predict(std::span<const double> x) const override;
  /// Same, with trees truncated at `depth_cap` splits.
  Eigen::VectorXd predict_at_depth(std::span<const double> x, int depth_cap) const;

  /// Depth at which predict() evaluates; defaults to params().max_depth.
  int prediction_depth() const noexcept { return prediction_depth_; }
  /// Throws ValidationError if depth exceeds the trained max_depth.
  void set_prediction_depth(int depth);

 private:
  ForestParams params_;
  std::uint64_t seed_ = 0;
  int num_features_ = 0;
  int prediction_depth_ = kUnlimitedDepth;
  std::vector<std::vector<Tree>> trees_;
};

/// Fits one forest per column of `targets` (N x M). Tree k of target m uses
/// a seed derived from (seed, m, k); results do not depend on thread count.
ForestModel fit_forest(const Eigen::MatrixXd& x, const Eigen::MatrixXd& targets,
                       const ForestParams& params, std::uint64_t seed);

/// Mean of the k nearest training targets; a cheap stand-in regressor.
class KnnRegressor : public MultiTargetRegressor {
 public:
  KnnRegressor(Eigen::MatrixXd x, Eigen::MatrixXd targets, int k);

  int num_features() const override { return static_cast<int>(x_.cols()); }
  int num_targets() const override { return static_cast<int>(targets_.cols()); }
  Eigen::VectorXd predict(std::span<const double> x) const override;

 private:
  Eigen::MatrixXd x_;
  Eigen::MatrixXd targets_;
  int k_;
};

}  // namespace clems::forest
