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

// clems: train, predict, evaluate and benchmark cost-sensitive label
// embedding models from the command line.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "clems/error.hpp"
#include "clems/harness.hpp"
#include "clems/io.hpp"
#include "clems/random.hpp"

#ifndef CLEMS_DATA_DIR
#define CLEMS_DATA_DIR "data"
#endif

namespace {

using namespace clems;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataArgs {
  std::string name;
  std::string data_dir;
  std::string arff;
  std::string xml;
  std::string csv;
  std::size_t labels = 0;

  void add_to(CLI::App* app) {
    app->add_option("--data", name, "Dataset name, resolved to <data-dir>/<name>.arff and .xml");
    app->add_option("--data-dir", data_dir, "Directory holding Mulan datasets");
    app->add_option("--arff", arff, "Mulan ARFF file");
    app->add_option("--xml", xml, "Mulan XML label header");
    app->add_option("--csv", csv, "Numeric CSV with labels in the last columns");
    app->add_option("--labels", labels, "Label column count for --csv");
  }

  std::string display_name() const {
    if (!name.empty()) return name;
    const std::string& p = !arff.empty() ? arff : csv;
    return std::filesystem::path(p).stem().string();
  }

  Dataset load() const {
    namespace fs = std::filesystem;
    auto require = [](const fs::path& p, const char* flag) {
      if (!fs::exists(p)) throw UsageError(std::string(flag) + ": no such file " + p.string());
    };
    if (!csv.empty()) {
      if (labels == 0) throw UsageError("--labels is required with --csv");
      require(csv, "--csv");
      return io::load_csv(csv, labels);
    }
    fs::path a = arff, x = xml;
    if (!name.empty()) {
      fs::path dir = data_dir;
      if (dir.empty()) {
        const char* env = std::getenv("CLEMS_DATA_DIR");
        dir = env ? env : CLEMS_DATA_DIR;
      }
      if (a.empty()) a = dir / (name + ".arff");
      if (x.empty()) x = dir / (name + ".xml");
    }
    if (a.empty()) throw UsageError("--data: a dataset is required (--data, --arff/--xml or --csv)");
    if (x.empty()) throw UsageError("--xml is required with --arff");
    require(a, name.empty() ? "--arff" : "--data");
    require(x, name.empty() ? "--xml" : "--data");
    return io::load_mulan(a, x);
  }
};

struct ModelArgs {
  std::string algo = "clems";
  std::string criterion = "f1";
  std::string embed_dim = "100%";
  std::string source = "train";
  int trees = 100;
  double feature_fraction = 1.0 / 3.0;
  int min_leaf = 1;
  int mds_max_iter = 300;
  double mds_tol = 1e-6;

  void add_to(CLI::App* app) {
    app->add_option("--algo", algo, "clems, plst or br")->capture_default_str();
    app->add_option("--criterion", criterion, "f1, accuracy, rank_loss or hamming")->capture_default_str();
    app->add_option("--embed-dim", embed_dim, "Embedding dimension, absolute or percent of K")
        ->capture_default_str();
    app->add_option("--source", source, "Candidate labels: train or all")->capture_default_str();
    app->add_option("--trees", trees, "Trees per target")->capture_default_str();
    app->add_option("--feature-fraction", feature_fraction, "Features tried per split, as a fraction of d")
        ->capture_default_str();
    app->add_option("--min-leaf", min_leaf, "Minimum samples per leaf")->capture_default_str();
    app->add_option("--mds-max-iter", mds_max_iter, "SMACOF iteration cap")->capture_default_str();
    app->add_option("--mds-tol", mds_tol, "SMACOF relative stress tolerance")->capture_default_str();
  }

  harness::TrainConfig config() const {
    harness::TrainConfig tc;
    const auto a = parse_algorithm(algo);
    if (!a) throw UsageError("--algo: unknown algorithm '" + algo + "'");
    tc.algorithm = *a;
    const auto c = parse_criterion(criterion);
    if (!c) throw UsageError("--criterion: unknown criterion '" + criterion + "'");
    tc.criterion = *c;
    try {
      tc.embed_dim = harness::EmbedDim::parse(embed_dim);
    } catch (const ValidationError& e) {
      throw UsageError(std::string("--embed-dim: ") + e.what());
    }
    if (source == "train")
      tc.source = CandidateSource::kTrain;
    else if (source == "all")
      tc.source = CandidateSource::kAll;
    else
      throw UsageError("--source: expected train or all, got '" + source + "'");
    if (trees < 1) throw UsageError("--trees must be at least 1");
    if (!(feature_fraction > 0.0 && feature_fraction <= 1.0))
      throw UsageError("--feature-fraction must be in (0, 1]");
    if (min_leaf < 1) throw UsageError("--min-leaf must be at least 1");
    tc.forest.n_trees = trees;
    tc.forest.feature_fraction = feature_fraction;
    tc.forest.min_leaf = min_leaf;
    tc.mds.max_iter = mds_max_iter;
    tc.mds.tol = mds_tol;
    return tc;
  }
};

std::vector<int> parse_grid(const std::string& text) {
  std::vector<int> grid;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size() || v < 1) throw std::invalid_argument("");
      grid.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("--depth-grid: bad depth '" + tok + "'");
    }
  }
  if (grid.empty()) throw UsageError("--depth-grid is empty");
  return grid;
}

std::ofstream open_out(const std::string& path, const char* flag) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError(std::string(flag) + ": cannot write " + path);
  return out;
}

// Writes to `path`, or to stdout when the path is empty or "-".
template <typename Fn>
void emit(const std::string& path, const char* flag, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
  } else {
    std::ofstream out = open_out(path, flag);
    fn(out);
  }
}

Model load_model_arg(const std::string& path) {
  if (!std::filesystem::exists(path)) throw UsageError("--model: no such file " + path);
  return io::load_model(path);
}

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "parse_error";
  if (dynamic_cast<const IncompatibleVersionError*>(&e)) return "incompatible_version";
  if (dynamic_cast<const SchemaError*>(&e)) return "schema_error";
  if (dynamic_cast<const UnsupportedError*>(&e)) return "unsupported";
  if (dynamic_cast<const DimensionError*>(&e)) return "dimension_error";
  if (dynamic_cast<const ValidationError*>(&e)) return "validation_error";
  if (dynamic_cast<const DomainError*>(&e)) return "domain_error";
  if (dynamic_cast<const DecompositionError*>(&e)) return "decomposition_error";
  if (dynamic_cast<const NotEmbeddableError*>(&e)) return "not_embeddable";
  if (dynamic_cast<const Error*>(&e)) return "error";
  return "internal_error";
}

void report(const char* kind, const std::string& message) {
  nlohmann::json j{{"error", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-sensitive label embedding for multi-label classification", "clems"};
  app.require_subcommand(1);

  // train
  DataArgs train_data;
  ModelArgs train_model;
  std::optional<int> train_depth;
  std::uint64_t train_seed = 0;
  std::string train_out;
  std::string train_grid = "5,10,15,20,25,30,35";
  auto* train = app.add_subcommand("train", "Fit a model and save it");
  train_data.add_to(train);
  train_model.add_to(train);
  train->add_option("--depth", train_depth, "Tree depth; selected on an internal split when omitted");
  train->add_option("--depth-grid", train_grid, "Comma-separated depths for selection")->capture_default_str();
  train->add_option("--seed", train_seed, "Seed")->capture_default_str();
  train->add_option("--out", train_out, "Model file")->required();

  // predict
  DataArgs pred_data;
  std::string pred_model, pred_out;
  auto* predict = app.add_subcommand("predict", "Predict label vectors with a saved model");
  pred_data.add_to(predict);
  predict->add_option("--model", pred_model, "Model file")->required();
  predict->add_option("--out", pred_out, "Predictions CSV (stdout if omitted)");

  // eval
  DataArgs eval_data;
  std::string eval_preds, eval_out;
  auto* eval = app.add_subcommand("eval", "Score predictions against the dataset's labels");
  eval_data.add_to(eval);
  eval->add_option("--predictions", eval_preds, "Predictions CSV")->required();
  eval->add_option("--out", eval_out, "Metrics JSON (stdout if omitted)");

  // experiment
  DataArgs exp_data;
  ModelArgs exp_model;
  std::optional<std::uint64_t> exp_seed;
  int exp_runs = 5;
  std::string exp_grid = "5,10,15,20,25,30,35", exp_out, exp_csv;
  bool exp_verify = false;
  auto* experiment = app.add_subcommand("experiment", "Run the split/select/evaluate protocol several times");
  exp_data.add_to(experiment);
  exp_model.add_to(experiment);
  experiment->add_option("--runs", exp_runs, "Number of runs")->capture_default_str();
  experiment->add_option("--seed", exp_seed, "Master seed")->required();
  experiment->add_option("--depth-grid", exp_grid, "Comma-separated depths")->capture_default_str();
  experiment->add_option("--out", exp_out, "Results JSON (stdout if omitted)");
  experiment->add_option("--results-csv", exp_csv, "Flat per-run CSV");
  experiment->add_flag("--verify-bound", exp_verify, "Check the decoding bound on every test prediction");

  // dump-embedding
  std::string dump_model, dump_out;
  auto* dump = app.add_subcommand("dump-embedding", "Write the embedding of a CLEMS model as CSV");
  dump->add_option("--model", dump_model, "Model file")->required();
  dump->add_option("--out", dump_out, "CSV file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report("usage", e.what());
    return kExitUsage;
  }

  try {
    if (*train) {
      const Dataset data = train_data.load();
      harness::TrainConfig tc = train_model.config();
      int depth = 0;
      if (train_depth) {
        if (*train_depth < 1) throw UsageError("--depth must be at least 1");
        depth = *train_depth;
      } else {
        const std::vector<int> grid = parse_grid(train_grid);
        harness::Split s = harness::split_dataset(data, derive_seed(train_seed, {0}));
        Dataset inner_val = s.validation;
        for (const auto& inst : s.test.instances()) inner_val.add(inst);
        depth = harness::select_depth(s.train, inner_val, tc, grid, derive_seed(train_seed, {1})).depth;
        std::clog << "selected depth " << depth << '\n';
      }
      tc.forest.max_depth = depth;
      const Model model = harness::fit_model(data, tc, train_seed);
      io::save_model(model, train_out);
    } else if (*predict) {
      const Model model = load_model_arg(pred_model);
      const Dataset data = pred_data.load();
      const auto preds = model.predict_all(data);
      emit(pred_out, "--out", [&](std::ostream& out) { io::write_predictions_csv(out, preds, model.label_names); });
    } else if (*eval) {
      const Dataset data = eval_data.load();
      if (!std::filesystem::exists(eval_preds)) throw UsageError("--predictions: no such file " + eval_preds);
      const auto preds = io::read_predictions_csv(io::read_file(eval_preds));
      const auto truth = data.labels();
      nlohmann::json metrics{{"n", truth.size()}};
      for (Criterion c : {Criterion::kF1, Criterion::kAccuracy, Criterion::kRankLoss, Criterion::kHamming})
        metrics[std::string(criterion_name(c))] = harness::evaluate(truth, preds, c);
      emit(eval_out, "--out", [&](std::ostream& out) { out << metrics.dump(2) << '\n'; });
    } else if (*experiment) {
      const Dataset data = exp_data.load();
      harness::ExperimentConfig cfg;
      cfg.dataset_name = exp_data.display_name();
      cfg.train = exp_model.config();
      cfg.depth_grid = parse_grid(exp_grid);
      if (exp_runs < 1) throw UsageError("--runs must be at least 1");
      cfg.n_runs = exp_runs;
      cfg.master_seed = *exp_seed;
      cfg.verify_bound = exp_verify;
      const auto result = harness::run_experiment(data, cfg);
      emit(exp_out, "--out", [&](std::ostream& out) { harness::write_results_json(out, result); });
      if (!exp_csv.empty()) {
        std::ofstream out = open_out(exp_csv, "--results-csv");
        harness::write_results_csv(out, result);
      }
      if (exp_verify)
        for (const auto& r : result.runs)
          if (r.bound && !r.bound->all_held()) {
            report("verification_failed", "decoding bound violated in run " + std::to_string(r.run));
            return kExitFailure;
          }
    } else if (*dump) {
      const Model model = load_model_arg(dump_model);
      const auto* cm = std::get_if<ClemsModel>(&model.variant());
      if (!cm) throw UsageError("--model: not a CLEMS model (algorithm " +
                                std::string(algorithm_name(model.algorithm())) + ")");
      emit(dump_out, "--out", [&](std::ostream& out) { io::write_embedding_csv(out, cm->embedding); });
    }
  } catch (const UsageError& e) {
    report("usage", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    report(error_kind(e), e.what());
    return kExitFailure;
  }
  return EXIT_SUCCESS;
}
