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

#include "clems/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "clems/error.hpp"
#include "clems/random.hpp"

namespace clems::forest {

Tree::Tree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ValidationError("tree has no nodes");
  const int n = static_cast<int>(nodes_.size());
  std::vector<int> parents(nodes_.size(), 0);
  for (int i = 0; i < n; ++i) {
    const Node& node = nodes_[i];
    if (!std::isfinite(node.value)) throw ValidationError("tree node value is not finite");
    if (node.is_leaf()) continue;
    if (node.left <= i || node.right <= i || node.left >= n || node.right >= n)
      throw ValidationError("tree node " + std::to_string(i) + " has invalid children");
    ++parents[node.left];
    ++parents[node.right];
  }
  for (int i = 1; i < n; ++i)
    if (parents[i] != 1) throw ValidationError("tree node " + std::to_string(i) + " is not reachable once");
}

double Tree::predict(std::span<const double> x, int depth_cap) const {
  int i = 0;
  for (int depth = 0; depth < depth_cap; ++depth) {
    const Node& node = nodes_[i];
    if (node.is_leaf()) break;
    i = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return nodes_[i].value;
}

int Tree::depth() const {
  std::vector<int> level(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& node = nodes_[i];
    deepest = std::max(deepest, level[i]);
    if (!node.is_leaf()) {
      level[node.left] = level[i] + 1;
      level[node.right] = level[i] + 1;
    }
  }
  return deepest;
}

namespace {

struct Keyed {
  double x;
  std::uint32_t row;
};

class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& x, std::span<const double> targets,
              std::span<const double> weights, const TreeParams& params, std::uint64_t seed)
      : x_(x), t_(targets), w_(weights), params_(params), seed_(seed) {
    features_.resize(static_cast<std::size_t>(x.cols()));
    buffer_.reserve(static_cast<std::size_t>(x.rows()));
  }

  std::vector<Node> build(std::vector<std::uint32_t> rows) {
    rows_ = std::move(rows);
    grow(0, rows_.size(), 0, 1);
    return std::move(nodes_);
  }

 private:
  // Builds the subtree over rows_[begin, end) and returns its node index.
  int grow(std::size_t begin, std::size_t end, int depth, std::uint64_t path) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    double n = 0.0, sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t k = begin; k < end; ++k) {
      const std::uint32_t r = rows_[k];
      n += w_[r];
      sum += w_[r] * t_[r];
      lo = std::min(lo, t_[r]);
      hi = std::max(hi, t_[r]);
    }
    nodes_[id].value = sum / n;

    if (depth >= params_.max_depth || n < 2.0 * params_.min_leaf || lo == hi) return id;

    Split best = find_split(begin, end, n, sum, path);
    if (best.feature < 0) return id;

    auto* mid = std::partition(rows_.data() + begin, rows_.data() + end, [&](std::uint32_t r) {
      return x_(r, best.feature) <= best.threshold;
    });
    const auto split_at = static_cast<std::size_t>(mid - rows_.data());

    nodes_[id].feature = best.feature;
    nodes_[id].threshold = best.threshold;
    const int left = grow(begin, split_at, depth + 1, 2 * path);
    const int right = grow(split_at, end, depth + 1, 2 * path + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  struct Split {
    int feature = -1;
    double threshold = 0.0;
  };

  Split find_split(std::size_t begin, std::size_t end, double n, double sum, std::uint64_t path) {
    const int d = static_cast<int>(x_.cols());
    const int m = std::min(params_.max_features, d);
    std::iota(features_.begin(), features_.end(), 0);
    Rng rng(derive_seed(seed_, {path}));
    for (int i = 0; i < m; ++i) {
      const auto j = static_cast<std::size_t>(i) + uniform_index(rng, static_cast<std::uint64_t>(d - i));
      std::swap(features_[static_cast<std::size_t>(i)], features_[j]);
    }
    std::sort(features_.begin(), features_.begin() + m);

    Split best;
    double best_score = sum * sum / n;  // a split must beat the unsplit node
    const double min_leaf = params_.min_leaf;
    for (int fi = 0; fi < m; ++fi) {
      const int f = features_[static_cast<std::size_t>(fi)];
      buffer_.clear();
      for (std::size_t k = begin; k < end; ++k) buffer_.push_back({x_(rows_[k], f), rows_[k]});
      std::sort(buffer_.begin(), buffer_.end(),
                [](const Keyed& a, const Keyed& b) { return a.x < b.x; });
      if (buffer_.front().x == buffer_.back().x) continue;

      double wl = 0.0, sl = 0.0;
      for (std::size_t k = 0; k + 1 < buffer_.size(); ++k) {
        const std::uint32_t r = buffer_[k].row;
        wl += w_[r];
        sl += w_[r] * t_[r];
        if (buffer_[k].x == buffer_[k + 1].x) continue;
        const double wr = n - wl;
        if (wl < min_leaf || wr < min_leaf) continue;
        const double sr = sum - sl;
        const double score = sl * sl / wl + sr * sr / wr;
        if (score > best_score) {
          best_score = score;
          best.feature = f;
          const double a = buffer_[k].x, b = buffer_[k + 1].x;
          double mid = a + 0.5 * (b - a);
          if (!(mid >= a && mid < b)) mid = a;
          best.threshold = mid;
        }
      }
    }
    return best;
  }

  const Eigen::MatrixXd& x_;
  std::span<const double> t_;
  std::span<const double> w_;
  TreeParams params_;
  std::uint64_t seed_;
  std::vector<std::uint32_t> rows_;
  std::vector<int> features_;
  std::vector<Keyed> buffer_;
  std::vector<Node> nodes_;
};

}  // namespace

Tree fit_tree(const Eigen::MatrixXd& x, std::span<const double> targets,
              std::span<const double> weights, const TreeParams& params, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (targets.size() != n || weights.size() != n)
    throw DimensionError("fit_tree: features, targets and weights disagree on N");
  if (params.max_depth < 0) throw ValidationError("max_depth must be >= 0");
  if (params.min_leaf < 1) throw ValidationError("min_leaf must be >= 1");
  if (params.max_features < 1) throw ValidationError("max_features must be >= 1");
  std::vector<std::uint32_t> rows;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0.0 || !std::isfinite(weights[i]))
      throw ValidationError("sample weights must be finite and nonnegative");
    if (!std::isfinite(targets[i])) throw ValidationError("targets must be finite");
    if (weights[i] > 0.0) rows.push_back(static_cast<std::uint32_t>(i));
  }
  if (rows.empty()) throw ValidationError("fit_tree: no training rows");
  TreeBuilder builder(x, targets, weights, params, seed);
  return Tree(builder.build(std::move(rows)));
}

int ForestParams::features_per_split(int num_features) const {
  const int m = static_cast<int>(std::floor(feature_fraction * num_features + 1e-9));
  return std::clamp(m, 1, std::max(1, num_features));
}

ForestModel::ForestModel(ForestParams params, std::uint64_t seed, int num_features,
                         std::vector<std::vector<Tree>> trees_per_target)
    : params_(params),
      seed_(seed),
      num_features_(num_features),
      prediction_depth_(params.max_depth),
      trees_(std::move(trees_per_target)) {
  for (const auto& trees : trees_)
    if (static_cast<int>(trees.size()) != params_.n_trees)
      throw ValidationError("every target must have n_trees trees");
}

Eigen::VectorXd ForestModel::predict(std::span<const double> x) const {
  return predict_at_depth(x, prediction_depth_);
}

Eigen::VectorXd ForestModel::predict_at_depth(std::span<const double> x, int depth_cap) const {
  if (static_cast<int>(x.size()) != num_features_)
    throw DimensionError("predict: expected " + std::to_string(num_features_) + " features, got " +
                         std::to_string(x.size()));
  Eigen::VectorXd out(static_cast<Eigen::Index>(trees_.size()));
  for (std::size_t m = 0; m < trees_.size(); ++m) {
    double acc = 0.0;
    for (const Tree& tree : trees_[m]) acc += tree.predict(x, depth_cap);
    out(static_cast<Eigen::Index>(m)) = acc / static_cast<double>(trees_[m].size());
  }
  return out;
}

void ForestModel::set_prediction_depth(int depth) {
  if (depth < 0 || depth > params_.max_depth)
    throw ValidationError("prediction depth must lie in [0, max_depth]");
  prediction_depth_ = depth;
}

ForestModel fit_forest(const Eigen::MatrixXd& x, const Eigen::MatrixXd& targets,
                       const ForestParams& params, std::uint64_t seed) {
  if (x.rows() != targets.rows())
    throw DimensionError("fit_forest: " + std::to_string(x.rows()) + " feature rows vs " +
                         std::to_string(targets.rows()) + " target rows");
  if (x.rows() == 0) throw ValidationError("fit_forest: empty training data");
  if (params.n_trees < 1) throw ValidationError("n_trees must be >= 1");
  const auto n = static_cast<std::size_t>(x.rows());
  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_leaf = params.min_leaf;
  tp.max_features = params.features_per_split(static_cast<int>(x.cols()));

  std::vector<std::vector<Tree>> all(static_cast<std::size_t>(targets.cols()));
  std::vector<double> weights(n);
  for (Eigen::Index m = 0; m < targets.cols(); ++m) {
    const Eigen::VectorXd column = targets.col(m);
    const std::span<const double> t(column.data(), n);
    auto& trees = all[static_cast<std::size_t>(m)];
    trees.reserve(static_cast<std::size_t>(params.n_trees));
    for (int k = 0; k < params.n_trees; ++k) {
      const std::uint64_t tree_seed =
          derive_seed(seed, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k)});
      if (params.bootstrap) {
        std::fill(weights.begin(), weights.end(), 0.0);
        Rng rng(derive_seed(tree_seed, {0xb007ULL}));
        for (std::size_t i = 0; i < n; ++i) weights[uniform_index(rng, n)] += 1.0;
      } else {
        std::fill(weights.begin(), weights.end(), 1.0);
      }
      trees.push_back(fit_tree(x, t, weights, tp, tree_seed));
    }
  }
  return ForestModel(params, seed, static_cast<int>(x.cols()), std::move(all));
}

KnnRegressor::KnnRegressor(Eigen::MatrixXd x, Eigen::MatrixXd targets, int k)
    : x_(std::move(x)), targets_(std::move(targets)), k_(k) {
  if (x_.rows() != targets_.rows()) throw DimensionError("KnnRegressor: row counts differ");
  if (x_.rows() == 0 || k_ < 1) throw ValidationError("KnnRegressor needs data and k >= 1");
}

Eigen::VectorXd KnnRegressor::predict(std::span<const double> x) const {
  if (static_cast<Eigen::Index>(x.size()) != x_.cols())
    throw DimensionError("KnnRegressor: feature dimension mismatch");
  const Eigen::Map<const Eigen::RowVectorXd> q(x.data(), x_.cols());
  std::vector<std::pair<double, Eigen::Index>> dist;
  dist.reserve(static_cast<std::size_t>(x_.rows()));
  for (Eigen::Index i = 0; i < x_.rows(); ++i) dist.emplace_back((x_.row(i) - q).squaredNorm(), i);
  const auto k = static_cast<std::size_t>(std::min<Eigen::Index>(k_, x_.rows()));
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(targets_.cols());
  for (std::size_t i = 0; i < k; ++i) out += targets_.row(dist[i].second).transpose();
  return out / static_cast<double>(k);
}

}  // namespace clems::forest
