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

#include "clems/dataset.hpp"

#include "clems/error.hpp"

namespace clems {

LabelVector::LabelVector(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw ValidationError("label bits must be 0 or 1");
    bits_.push_back(static_cast<std::uint8_t>(b));
  }
}

LabelVector::LabelVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_)
    if (b > 1) throw ValidationError("label bits must be 0 or 1");
}

std::size_t LabelVector::count() const noexcept {
  std::size_t n = 0;
  for (auto b : bits_) n += b;
  return n;
}

std::string LabelVector::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

std::size_t LabelVectorHash::operator()(const LabelVector& y) const noexcept {
  // FNV-1a over the bits.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : y.bits()) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  h ^= y.size();
  return static_cast<std::size_t>(h);
}

void Dataset::add(Instance instance) {
  if (instance.features.size() != d_)
    throw DimensionError("instance has " + std::to_string(instance.features.size()) +
                         " features, dataset expects " + std::to_string(d_));
  if (instance.label.size() != k_)
    throw DimensionError("instance has " + std::to_string(instance.label.size()) +
                         " labels, dataset expects " + std::to_string(k_));
  instances_.push_back(std::move(instance));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out(d_, k_);
  out.feature_names = feature_names;
  out.label_names = label_names;
  out.instances_.reserve(rows.size());
  for (std::size_t r : rows) out.instances_.push_back(instances_.at(r));
  return out;
}

Eigen::MatrixXd Dataset::feature_matrix() const {
  Eigen::MatrixXd x(instances_.size(), d_);
  for (std::size_t i = 0; i < instances_.size(); ++i)
    for (std::size_t j = 0; j < d_; ++j) x(i, j) = instances_[i].features[j];
  return x;
}

Eigen::MatrixXd Dataset::label_matrix() const {
  Eigen::MatrixXd y(instances_.size(), k_);
  for (std::size_t i = 0; i < instances_.size(); ++i)
    for (std::size_t j = 0; j < k_; ++j) y(i, j) = instances_[i].label[j] ? 1.0 : 0.0;
  return y;
}

std::vector<LabelVector> Dataset::labels() const {
  std::vector<LabelVector> out;
  out.reserve(instances_.size());
  for (const auto& inst : instances_) out.push_back(inst.label);
  return out;
}

}  // namespace clems
