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

#include "clems/embedding.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "clems/error.hpp"

namespace clems {

CandidateSet::CandidateSet(std::vector<LabelVector> labels, std::vector<std::size_t> freqs,
                           CandidateSource source)
    : labels_(std::move(labels)), freqs_(std::move(freqs)), source_(source) {
  if (labels_.empty()) throw ValidationError("candidate set is empty");
  if (labels_.size() != freqs_.size())
    throw ValidationError("candidate labels and frequencies differ in length");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (freqs_[i] == 0) throw ValidationError("candidate frequency must be >= 1");
    if (labels_[i].size() != labels_[0].size())
      throw DimensionError("candidate labels differ in length");
    if (!index_.emplace(labels_[i], i).second)
      throw ValidationError("duplicate candidate " + labels_[i].to_string());
  }
}

std::optional<std::size_t> CandidateSet::index_of(const LabelVector& y) const {
  auto it = index_.find(y);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CandidateSet build_candidate_set(const Dataset& data, CandidateSource source, const Dataset* extra) {
  if (data.empty()) throw ValidationError("cannot build a candidate set from an empty dataset");
  std::vector<LabelVector> labels;
  std::vector<std::size_t> freqs;
  std::unordered_map<LabelVector, std::size_t, LabelVectorHash> seen;
  auto count = [&](const Dataset& ds) {
    for (const auto& inst : ds.instances()) {
      auto [it, fresh] = seen.emplace(inst.label, labels.size());
      if (fresh) {
        labels.push_back(inst.label);
        freqs.push_back(0);
      }
      ++freqs[it->second];
    }
  };
  count(data);
  if (source == CandidateSource::kAll && extra != nullptr) {
    if (extra->num_labels() != data.num_labels())
      throw DimensionError("extra dataset has a different label count");
    count(*extra);
  }
  return CandidateSet(std::move(labels), std::move(freqs), source);
}

mds::Problem build_mirrored_problem(const CandidateSet& candidates, const CostSpec& cost, int dim) {
  const auto l = static_cast<Eigen::Index>(candidates.size());
  mds::Problem p;
  p.dim = dim;
  p.dissimilarity = Eigen::MatrixXd::Zero(2 * l, 2 * l);
  p.weight = Eigen::MatrixXd::Zero(2 * l, 2 * l);
  for (Eigen::Index i = 0; i < l; ++i) {
    const auto fi = static_cast<double>(candidates.freq(static_cast<std::size_t>(i)));
    for (Eigen::Index j = 0; j < l; ++j) {
      // Truth y_i against prediction y_j.
      const double d = isotonic_delta(cost(candidates.label(static_cast<std::size_t>(i)),
                                           candidates.label(static_cast<std::size_t>(j))));
      p.dissimilarity(i, l + j) = d;
      p.dissimilarity(l + j, i) = d;
      p.weight(i, l + j) = fi;
      p.weight(l + j, i) = fi;
    }
  }
  return p;
}

CsEmbedding::CsEmbedding(CandidateSet candidates, CostSpec cost, Eigen::MatrixXd truth_coords,
                         Eigen::MatrixXd pred_coords, double stress, std::uint64_t seed,
                         int iterations)
    : candidates_(std::move(candidates)),
      cost_(cost),
      truth_(std::move(truth_coords)),
      pred_(std::move(pred_coords)),
      stress_(stress),
      seed_(seed),
      iterations_(iterations) {
  const auto l = static_cast<Eigen::Index>(candidates_.size());
  if (truth_.rows() != l || pred_.rows() != l || truth_.cols() != pred_.cols() || truth_.cols() < 1)
    throw DimensionError("embedding coordinates must be L x M with M >= 1");
}

Eigen::VectorXd CsEmbedding::embed(const LabelVector& y) const {
  auto idx = candidates_.index_of(y);
  if (!idx) throw NotEmbeddableError("label " + y.to_string() + " is not in the candidate set");
  return truth_.row(static_cast<Eigen::Index>(*idx)).transpose();
}

Decoded CsEmbedding::decode(std::span<const double> z) const {
  const Eigen::Index m = pred_.cols();
  if (static_cast<Eigen::Index>(z.size()) != m)
    throw DimensionError("decode: expected a " + std::to_string(m) + "-vector, got " +
                         std::to_string(z.size()));
  std::size_t best = 0;
  double best_sq = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < pred_.rows(); ++i) {
    double sq = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      const double diff = pred_(i, k) - z[static_cast<std::size_t>(k)];
      sq += diff * diff;
    }
    const auto ui = static_cast<std::size_t>(i);
    if (sq < best_sq || (sq == best_sq && candidates_.freq(ui) > candidates_.freq(best))) {
      best = ui;
      best_sq = sq;
    }
  }
  return {best, candidates_.label(best), std::sqrt(best_sq)};
}

BoundCheck CsEmbedding::bound_check(const LabelVector& truth, std::span<const double> z_hat,
                                        double slack) const {
  auto idx = candidates_.index_of(truth);
  if (!idx) throw NotEmbeddableError("label " + truth.to_string() + " is not in the candidate set");
  const Decoded q = decode(z_hat);
  const Eigen::VectorXd z = pred_.row(static_cast<Eigen::Index>(*idx)).transpose();
  const Eigen::VectorXd zq = pred_.row(static_cast<Eigen::Index>(q.index)).transpose();
  const Eigen::Map<const Eigen::VectorXd> zh(z_hat.data(), static_cast<Eigen::Index>(z_hat.size()));

  const double delta = isotonic_delta(cost_(truth, q.label));
  const double d_zzq = (z - zq).norm();
  const double d_zzh = (z - zh).norm();
  BoundCheck out;
  out.lhs = delta * delta;
  out.embed_err = (d_zzq - delta) * (d_zzq - delta);
  out.regr_err = d_zzh * d_zzh;
  out.half_step_gap = d_zzh - 0.5 * d_zzq;
  out.holds = out.lhs <= 5.0 * (out.embed_err + out.regr_err) + slack;
  return out;
}

CsEmbedding fit_embedding(const CandidateSet& candidates, const CostSpec& cost,
                          const EmbeddingOptions& options) {
  if (options.dim < 1) throw ValidationError("embedding dimension must be >= 1");
  if (candidates.size() == 1)
    std::clog << "warning: single candidate label, decoding will be constant\n";
  const mds::Problem problem = build_mirrored_problem(candidates, cost, options.dim);
  const mds::Solution sol = mds::solve(problem, options.mds);
  const auto l = static_cast<Eigen::Index>(candidates.size());
  return CsEmbedding(candidates, cost, sol.coords.topRows(l), sol.coords.bottomRows(l),
                     sol.stress(), options.mds.seed, sol.iterations);
}

}  // namespace clems
