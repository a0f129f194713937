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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace clems {

/// A K-bit label vector. Elements are always 0 or 1.
class LabelVector {
 public:
  LabelVector() = default;
  explicit LabelVector(std::size_t k) : bits_(k, 0) {}
  LabelVector(std::initializer_list<int> bits);
  explicit LabelVector(std::vector<std::uint8_t> bits);

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
  void set(std::size_t i, bool on) { bits_.at(i) = on ? 1 : 0; }

  /// Number of ones.
  std::size_t count() const noexcept;
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  /// "0101"-style rendering, handy in diagnostics.
  std::string to_string() const;

  friend bool operator==(const LabelVector&, const LabelVector&) = default;
  friend auto operator<=>(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct LabelVectorHash {
  std::size_t operator()(const LabelVector& y) const noexcept;
};

struct Instance {
  std::vector<double> features;
  LabelVector label;
};

/// Instances sharing one feature dimension d and one label count K.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t num_features, std::size_t num_labels)
      : d_(num_features), k_(num_labels) {}

  /// Throws DimensionError if the instance does not match d and K.
  void add(Instance instance);

  std::size_t num_features() const noexcept { return d_; }
  std::size_t num_labels() const noexcept { return k_; }
  std::size_t size() const noexcept { return instances_.size(); }
  bool empty() const noexcept { return instances_.empty(); }

  const Instance& operator[](std::size_t i) const { return instances_[i]; }
  std::span<const Instance> instances() const noexcept { return instances_; }

  /// Copies the listed rows, in order, into a new dataset with the same schema.
  Dataset subset(std::span<const std::size_t> rows) const;

  /// N x d feature matrix (column-major, as the forest wants it).
  Eigen::MatrixXd feature_matrix() const;
  /// N x K label matrix with 0/1 entries.
  Eigen::MatrixXd label_matrix() const;
  std::vector<LabelVector> labels() const;

  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;

 private:
  std::size_t d_ = 0;
  std::size_t k_ = 0;
  std::vector<Instance> instances_;
};

}  // namespace clems
