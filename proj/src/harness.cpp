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

#include "clems/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "clems/baselines.hpp"
#include "clems/error.hpp"
#include "clems/random.hpp"

namespace clems::harness {

Split split_dataset(const Dataset& data, std::uint64_t seed) {
  const std::size_t n = data.size();
  if (n < 4) throw ValidationError("split needs at least 4 instances, got " + std::to_string(n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(std::span<std::size_t>(order), rng);
  const std::size_t n_train = (n + 1) / 2;
  const std::size_t n_val = (n + 3) / 4;
  std::span<const std::size_t> all(order);
  return {data.subset(all.subspan(0, n_train)), data.subset(all.subspan(n_train, n_val)),
          data.subset(all.subspan(n_train + n_val))};
}

double evaluate(std::span<const LabelVector> truth, std::span<const LabelVector> preds, Criterion criterion) {
  if (truth.size() != preds.size())
    throw DimensionError("evaluate: " + std::to_string(truth.size()) + " truths vs " +
                         std::to_string(preds.size()) + " predictions");
  if (truth.empty()) throw ValidationError("evaluate: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) sum += criterion_value(criterion, truth[i], preds[i]);
  return sum / static_cast<double>(truth.size());
}

bool better(Criterion criterion, double a, double b) noexcept {
  return is_score(criterion) ? a > b : a < b;
}

int EmbedDim::resolve(std::size_t num_labels) const {
  if (!(value > 0.0)) throw ValidationError("embedding dimension must be positive");
  const double m = percent ? std::ceil(value * static_cast<double>(num_labels) / 100.0 - 1e-9) : value;
  return std::max(1, static_cast<int>(m));
}

std::string EmbedDim::to_string() const {
  std::string s = std::to_string(value);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return percent ? s + "%" : s;
}

EmbedDim EmbedDim::parse(std::string_view text) {
  EmbedDim out;
  out.percent = !text.empty() && text.back() == '%';
  if (out.percent) text.remove_suffix(1);
  try {
    std::size_t used = 0;
    const std::string s(text);
    out.value = std::stod(s, &used);
    if (used != s.size()) throw ValidationError("");
  } catch (const std::exception&) {
    throw ValidationError("bad embedding dimension '" + std::string(text) + "'");
  }
  if (!(out.value > 0.0) || (!out.percent && out.value != std::floor(out.value)))
    throw ValidationError("embedding dimension must be a positive integer or a percentage");
  return out;
}

Model fit_model(const Dataset& train, const TrainConfig& config, std::uint64_t seed, const Dataset* extra) {
  const int dim = config.embed_dim.resolve(train.num_labels());
  const std::uint64_t forest_seed = derive_seed(seed, {2});
  std::optional<Model> model;
  switch (config.algorithm) {
    case Algorithm::kClems: {
      ClemsOptions o;
      o.cost = CostSpec{config.criterion};
      o.dim = dim;
      o.source = config.source;
      o.mds = config.mds;
      o.mds.seed = derive_seed(seed, {1});
      o.forest = config.forest;
      o.forest_seed = forest_seed;
      model.emplace(fit_clems(train, o, config.source == CandidateSource::kAll ? extra : nullptr));
      break;
    }
    case Algorithm::kPlst:
      model.emplace(fit_plst(train, std::min<int>(dim, static_cast<int>(train.num_labels())), config.forest,
                             forest_seed));
      break;
    case Algorithm::kBr:
      model.emplace(fit_br(train, config.forest, forest_seed));
      break;
  }
  model->label_names = train.label_names;
  model->feature_names = train.feature_names;
  return std::move(*model);
}

std::vector<int> default_depth_grid() { return {5, 10, 15, 20, 25, 30, 35}; }

DepthSelection select_depth(const Model& model, const Dataset& validation, Criterion criterion,
                            std::span<const int> grid) {
  if (grid.empty()) throw ValidationError("depth grid is empty");
  const int trained = model.regressor().params().max_depth;
  const std::vector<LabelVector> truth = validation.labels();
  DepthSelection sel;
  std::optional<std::size_t> best;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (grid[g] < 0 || grid[g] > trained)
      throw ValidationError("grid depth " + std::to_string(grid[g]) + " exceeds the trained depth");
    std::vector<LabelVector> preds;
    preds.reserve(validation.size());
    for (const auto& inst : validation.instances()) preds.push_back(model.predict_at_depth(inst.features, grid[g]));
    sel.validation_values.push_back(evaluate(truth, preds, criterion));
    const double v = sel.validation_values.back();
    const double b = best ? sel.validation_values[*best] : 0.0;
    if (!best || better(criterion, v, b) || (v == b && grid[g] < grid[*best])) best = g;
  }
  sel.depth = grid[*best];
  return sel;
}

DepthSelection select_depth(const Dataset& train, const Dataset& validation, const TrainConfig& config,
                            std::span<const int> grid, std::uint64_t seed) {
  if (grid.empty()) throw ValidationError("depth grid is empty");
  TrainConfig deep = config;
  deep.forest.max_depth = *std::max_element(grid.begin(), grid.end());
  return select_depth(fit_model(train, deep, seed), validation, config.criterion, grid);
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
    s.ci95 = 1.96 * s.std / std::sqrt(n);
  }
  return s;
}

std::uint64_t run_seed(std::uint64_t master_seed, int run) {
  return derive_seed(master_seed, {static_cast<std::uint64_t>(run)});
}

namespace {

Dataset concat(const Dataset& a, const Dataset& b) {
  Dataset out(a.num_features(), a.num_labels());
  out.feature_names = a.feature_names;
  out.label_names = a.label_names;
  for (const auto& inst : a.instances()) out.add(inst);
  for (const auto& inst : b.instances()) out.add(inst);
  return out;
}

}  // namespace

RunResult run_single(const Dataset& data, const ExperimentConfig& config, int run) {
  if (config.depth_grid.empty()) throw ValidationError("depth grid is empty");
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r;
  r.run = run;
  r.seed = run_seed(config.master_seed, run);
  Split split = split_dataset(data, derive_seed(r.seed, {0}));

  TrainConfig tc = config.train;
  tc.forest.max_depth = *std::max_element(config.depth_grid.begin(), config.depth_grid.end());
  const Dataset unseen = concat(split.validation, split.test);
  Model model = fit_model(split.train, tc, derive_seed(r.seed, {1}), &unseen);

  const DepthSelection sel = select_depth(model, split.validation, tc.criterion, config.depth_grid);
  r.depth = sel.depth;
  model.regressor().set_prediction_depth(sel.depth);

  const std::vector<LabelVector> truth = split.test.labels();
  const std::vector<LabelVector> preds = model.predict_all(split.test);
  for (Criterion c : kReportedCriteria) r.test_values[c] = evaluate(truth, preds, c);

  if (const auto* cm = std::get_if<ClemsModel>(&model.variant())) {
    r.num_candidates = cm->embedding.candidates().size();
    if (config.verify_bound) {
      BoundStats ts;
      for (const auto& inst : split.test.instances()) {
        if (!cm->embedding.candidates().index_of(inst.label)) {
          ++ts.skipped;
          continue;
        }
        const Eigen::VectorXd z_hat = cm->regressor.predict(inst.features);
        const BoundCheck chk = cm->embedding.bound_check(
            inst.label, std::span<const double>(z_hat.data(), static_cast<std::size_t>(z_hat.size())));
        ++ts.checked;
        if (chk.holds) ++ts.held;
        if (chk.half_step_gap >= -1e-9) ++ts.half_step_held;
      }
      r.bound = ts;
    }
  }
  r.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& config) {
  if (config.n_runs < 1) throw ValidationError("n_runs must be at least 1");
  if (config.depth_grid.empty()) throw ValidationError("depth grid is empty");
  ExperimentResult res;
  res.config = config;
  res.resolved_dim = config.train.embed_dim.resolve(data.num_labels());
  for (int run = 0; run < config.n_runs; ++run) res.runs.push_back(run_single(data, config, run));
  for (Criterion c : kReportedCriteria) {
    std::vector<double> values;
    for (const auto& r : res.runs) values.push_back(r.test_values.at(c));
    res.summary[c] = summarize(values);
  }
  return res;
}

void write_results_json(std::ostream& out, const ExperimentResult& result) {
  using nlohmann::json;
  const auto& cfg = result.config;
  json grid = cfg.depth_grid;
  json doc{
      {"schema", "clems-experiment"},
      {"schema_version", kResultsSchemaVersion},
      {"config",
       {{"dataset", cfg.dataset_name},
        {"algorithm", std::string(algorithm_name(cfg.train.algorithm))},
        {"criterion", std::string(criterion_name(cfg.train.criterion))},
        {"embed_dim", cfg.train.embed_dim.to_string()},
        {"resolved_dim", result.resolved_dim},
        {"candidate_source", cfg.train.source == CandidateSource::kAll ? "all" : "train"},
        {"depth_grid", grid},
        {"n_trees", cfg.train.forest.n_trees},
        {"feature_fraction", cfg.train.forest.feature_fraction},
        {"min_leaf", cfg.train.forest.min_leaf},
        {"n_runs", cfg.n_runs},
        {"master_seed", cfg.master_seed}}}};
  json summary = json::object();
  for (const auto& [c, s] : result.summary)
    summary[std::string(criterion_name(c))] = {{"mean", s.mean}, {"std", s.std}, {"ci95", s.ci95}};
  doc["summary"] = summary;
  json runs = json::array();
  for (const auto& r : result.runs) {
    json values = json::object();
    for (const auto& [c, v] : r.test_values) values[std::string(criterion_name(c))] = v;
    json jr{{"run", r.run},       {"seed", r.seed}, {"depth", r.depth}, {"test", values},
            {"wall_time_ms", r.wall_time_ms}, {"num_candidates", r.num_candidates}};
    if (r.bound)
      jr["decoding_bound"] = {{"checked", r.bound->checked},
                       {"held", r.bound->held},
                       {"half_step_held", r.bound->half_step_held},
                       {"skipped", r.bound->skipped}};
    runs.push_back(std::move(jr));
  }
  doc["runs"] = runs;
  out << doc.dump(2) << '\n';
}

void write_results_csv(std::ostream& out, const ExperimentResult& result, bool header) {
  const auto& cfg = result.config;
  if (header) out << "dataset,algo,criterion,M,run,value,depth,seed,wall_time_ms\n";
  const auto old = out.precision(17);
  for (const auto& r : result.runs)
    for (Criterion c : kReportedCriteria)
      out << cfg.dataset_name << ',' << algorithm_name(cfg.train.algorithm) << ',' << criterion_name(c) << ','
          << result.resolved_dim << ',' << r.run << ',' << r.test_values.at(c) << ',' << r.depth << ','
          << r.seed << ',' << r.wall_time_ms << '\n';
  out.precision(old);
}

}  // namespace clems::harness
