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

#include "clems/cost.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "clems/error.hpp"

namespace clems {
namespace {

void check_lengths(const LabelVector& a, const LabelVector& b) {
  if (a.size() != b.size())
    throw DimensionError("label vectors differ in length: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
}

struct Overlap {
  std::size_t both = 0;
  std::size_t truth = 0;
  std::size_t pred = 0;
};

Overlap overlap(const LabelVector& y, const LabelVector& p) {
  check_lengths(y, p);
  Overlap o;
  for (std::size_t i = 0; i < y.size(); ++i) {
    o.both += (y[i] && p[i]);
    o.truth += y[i];
    o.pred += p[i];
  }
  return o;
}

}  // namespace

double hamming_loss(const LabelVector& truth, const LabelVector& pred) {
  check_lengths(truth, pred);
  if (truth.size() == 0) return 0.0;
  std::size_t diff = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) diff += (truth[i] != pred[i]);
  return static_cast<double>(diff) / static_cast<double>(truth.size());
}

double f1_score(const LabelVector& truth, const LabelVector& pred) {
  const Overlap o = overlap(truth, pred);
  if (o.truth + o.pred == 0) return 1.0;
  return 2.0 * static_cast<double>(o.both) / static_cast<double>(o.truth + o.pred);
}

double accuracy_score(const LabelVector& truth, const LabelVector& pred) {
  const Overlap o = overlap(truth, pred);
  const std::size_t uni = o.truth + o.pred - o.both;
  if (uni == 0) return 1.0;
  return static_cast<double>(o.both) / static_cast<double>(uni);
}

double rank_loss(const LabelVector& truth, const LabelVector& pred) {
  check_lengths(truth, pred);
  // Pairs (i, j) with truth[i] = 1, truth[j] = 0. For binary predictions the
  // pair is inverted when pred[i] = 0 and pred[j] = 1, tied when equal.
  std::size_t rel_on = 0, rel_off = 0, irr_on = 0, irr_off = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i])
      (pred[i] ? rel_on : rel_off)++;
    else
      (pred[i] ? irr_on : irr_off)++;
  }
  const double inverted = static_cast<double>(rel_off * irr_on);
  const double tied = static_cast<double>(rel_on * irr_on + rel_off * irr_off);
  return inverted + 0.5 * tied;
}

double criterion_value(Criterion c, const LabelVector& truth, const LabelVector& pred) {
  switch (c) {
    case Criterion::kHamming: return hamming_loss(truth, pred);
    case Criterion::kF1: return f1_score(truth, pred);
    case Criterion::kAccuracy: return accuracy_score(truth, pred);
    case Criterion::kRankLoss: return rank_loss(truth, pred);
  }
  throw ValidationError("unknown criterion");
}

std::string_view criterion_name(Criterion c) noexcept {
  switch (c) {
    case Criterion::kHamming: return "hamming";
    case Criterion::kF1: return "f1";
    case Criterion::kAccuracy: return "accuracy";
    case Criterion::kRankLoss: return "rank_loss";
  }
  return "unknown";
}

std::optional<Criterion> parse_criterion(std::string_view name) {
  std::string s;
  for (char ch : name)
    if (ch != '_' && ch != '-') s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (s == "hamming") return Criterion::kHamming;
  if (s == "f1") return Criterion::kF1;
  if (s == "accuracy" || s == "acc") return Criterion::kAccuracy;
  if (s == "rank" || s == "rankloss") return Criterion::kRankLoss;
  return std::nullopt;
}

double CostSpec::operator()(const LabelVector& truth, const LabelVector& pred) const {
  const double v = criterion_value(criterion, truth, pred);
  return is_score(criterion) ? 1.0 - v : v;
}

double cost_of(const CostSpec& spec, const LabelVector& truth, const LabelVector& pred) {
  return spec(truth, pred);
}

double isotonic_delta(double cost) {
  if (!(cost >= 0.0)) throw DomainError("isotonic_delta needs a nonnegative cost");
  return std::sqrt(cost);
}

}  // namespace clems
