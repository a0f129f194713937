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

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "clems/error.hpp"
#include "clems/io.hpp"

namespace clems::io {
namespace {

using nlohmann::json;

constexpr const char* kFormatName = "clems-model";

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

// Field access that reports the JSON path of whatever is missing or mistyped.
template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " is not an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError("missing field " + where + "." + key);
  try {
    return it->template get<T>();
  } catch (const json::exception&) {
    throw ValidationError("field " + where + "." + key + " has the wrong type");
  }
}

const json& child(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " is not an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError("missing field " + where + "." + key);
  return *it;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& where) {
  const auto rows = field<Eigen::Index>(j, "rows", where);
  const auto cols = field<Eigen::Index>(j, "cols", where);
  const auto data = field<std::vector<std::vector<double>>>(j, "data", where);
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows))
    throw ValidationError(where + ": row count does not match data");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = data[static_cast<std::size_t>(i)];
    if (row.size() != static_cast<std::size_t>(cols)) throw ValidationError(where + ": ragged row");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

json depth_to_json(int depth) {
  return depth == forest::kUnlimitedDepth ? json(nullptr) : json(depth);
}

int depth_from_json(const json& obj, const char* key, const std::string& where) {
  const json& v = child(obj, key, where);
  if (v.is_null()) return forest::kUnlimitedDepth;
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ValidationError("field " + where + "." + key + " must be a nonnegative integer or null");
  return v.get<int>();
}

json tree_to_json(const forest::Tree& tree) {
  json feature = json::array(), threshold = json::array(), left = json::array(),
       right = json::array(), value = json::array();
  for (const auto& n : tree.nodes()) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"value", value}};
}

forest::Tree tree_from_json(const json& j, const std::string& where) {
  const auto feature = field<std::vector<int>>(j, "feature", where);
  const auto threshold = field<std::vector<double>>(j, "threshold", where);
  const auto left = field<std::vector<int>>(j, "left", where);
  const auto right = field<std::vector<int>>(j, "right", where);
  const auto value = field<std::vector<double>>(j, "value", where);
  const std::size_t n = feature.size();
  if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n)
    throw ValidationError(where + ": node arrays differ in length");
  std::vector<forest::Node> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = {feature[i], threshold[i], left[i], right[i], value[i]};
  return forest::Tree(std::move(nodes));
}

json forest_to_json(const forest::ForestModel& f) {
  const auto& p = f.params();
  json trees = json::array();
  for (const auto& per_target : f.trees()) {
    json list = json::array();
    for (const auto& t : per_target) list.push_back(tree_to_json(t));
    trees.push_back(std::move(list));
  }
  return {{"params",
           {{"n_trees", p.n_trees},
            {"max_depth", depth_to_json(p.max_depth)},
            {"min_leaf", p.min_leaf},
            {"feature_fraction", p.feature_fraction},
            {"bootstrap", p.bootstrap}}},
          {"seed", f.seed()},
          {"num_features", f.num_features()},
          {"prediction_depth", depth_to_json(f.prediction_depth())},
          {"trees", std::move(trees)}};
}

forest::ForestModel forest_from_json(const json& j, const std::string& where) {
  const json& pj = child(j, "params", where);
  const std::string pw = where + ".params";
  forest::ForestParams p;
  p.n_trees = field<int>(pj, "n_trees", pw);
  p.max_depth = depth_from_json(pj, "max_depth", pw);
  p.min_leaf = field<int>(pj, "min_leaf", pw);
  p.feature_fraction = field<double>(pj, "feature_fraction", pw);
  p.bootstrap = field<bool>(pj, "bootstrap", pw);
  const auto seed = field<std::uint64_t>(j, "seed", where);
  const int d = field<int>(j, "num_features", where);
  const int depth = depth_from_json(j, "prediction_depth", where);
  const json& tj = child(j, "trees", where);
  if (!tj.is_array()) throw ValidationError(where + ".trees is not an array");
  std::vector<std::vector<forest::Tree>> trees;
  for (std::size_t m = 0; m < tj.size(); ++m) {
    if (!tj[m].is_array()) throw ValidationError(where + ".trees[" + std::to_string(m) + "] is not an array");
    std::vector<forest::Tree> list;
    for (std::size_t k = 0; k < tj[m].size(); ++k)
      list.push_back(tree_from_json(tj[m][k], where + ".trees[" + std::to_string(m) + "][" +
                                                  std::to_string(k) + "]"));
    trees.push_back(std::move(list));
  }
  forest::ForestModel model(p, seed, d, std::move(trees));
  model.set_prediction_depth(depth);
  return model;
}

LabelVector label_from_string(const std::string& s, const std::string& where) {
  std::vector<std::uint8_t> bits;
  for (char c : s) {
    if (c != '0' && c != '1') throw ValidationError(where + ": label strings must contain only 0 and 1");
    bits.push_back(c == '1' ? 1 : 0);
  }
  return LabelVector(std::move(bits));
}

json embedding_to_json(const CsEmbedding& e) {
  const auto& cands = e.candidates();
  json labels = json::array(), freqs = json::array();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    labels.push_back(cands.label(i).to_string());
    freqs.push_back(cands.freq(i));
  }
  return {{"criterion", std::string(criterion_name(e.cost().criterion))},
          {"candidate_source", cands.source() == CandidateSource::kAll ? "all" : "train"},
          {"candidates", labels},
          {"frequencies", freqs},
          {"truth_coords", matrix_to_json(e.truth_coords())},
          {"pred_coords", matrix_to_json(e.pred_coords())},
          {"stress", e.stress()},
          {"seed", e.seed()},
          {"iterations", e.iterations()}};
}

CsEmbedding embedding_from_json(const json& j, const std::string& where) {
  const auto crit_name = field<std::string>(j, "criterion", where);
  const auto crit = parse_criterion(crit_name);
  if (!crit) throw ValidationError(where + ": unknown criterion '" + crit_name + "'");
  const auto source_name = field<std::string>(j, "candidate_source", where);
  if (source_name != "all" && source_name != "train")
    throw ValidationError(where + ": unknown candidate_source '" + source_name + "'");
  const auto label_strings = field<std::vector<std::string>>(j, "candidates", where);
  const auto freqs = field<std::vector<std::size_t>>(j, "frequencies", where);
  std::vector<LabelVector> labels;
  for (const auto& s : label_strings) labels.push_back(label_from_string(s, where));
  CandidateSet cands(std::move(labels), freqs,
                     source_name == "all" ? CandidateSource::kAll : CandidateSource::kTrain);
  Eigen::MatrixXd truth = matrix_from_json(child(j, "truth_coords", where), where + ".truth_coords");
  Eigen::MatrixXd pred = matrix_from_json(child(j, "pred_coords", where), where + ".pred_coords");
  return CsEmbedding(std::move(cands), CostSpec{*crit}, std::move(truth), std::move(pred),
                     field<double>(j, "stress", where), field<std::uint64_t>(j, "seed", where),
                     field<int>(j, "iterations", where));
}

std::size_t line_of_offset(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

std::string serialize_model(const Model& model) {
  json doc{{"format", kFormatName},
           {"format_version", kModelFormatVersion},
           {"algorithm", std::string(algorithm_name(model.algorithm()))},
           {"label_names", model.label_names},
           {"feature_names", model.feature_names}};
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ClemsModel>) {
          doc["embedding"] = embedding_to_json(m.embedding);
          doc["forest"] = forest_to_json(m.regressor);
        } else if constexpr (std::is_same_v<T, PlstModel>) {
          doc["plst"] = {{"mean", matrix_to_json(m.transform.mean)},
                         {"projection", matrix_to_json(m.transform.projection)}};
          doc["forest"] = forest_to_json(m.regressor);
        } else {
          doc["forest"] = forest_to_json(m.classifiers);
        }
      },
      model.variant());
  return doc.dump(1) + "\n";
}

Model deserialize_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), std::string("model JSON: ") + e.what());
  }
  const std::string root = "model";
  if (field<std::string>(doc, "format", root) != kFormatName)
    throw ValidationError("not a CLEMS model file (format field differs)");
  const int version = field<int>(doc, "format_version", root);
  if (version != kModelFormatVersion)
    throw IncompatibleVersionError("model format version " + std::to_string(version) +
                                   " is not supported (expected " + std::to_string(kModelFormatVersion) + ")");
  const auto algo_name = field<std::string>(doc, "algorithm", root);
  const auto algo = parse_algorithm(algo_name);
  if (!algo) throw ValidationError("unknown algorithm '" + algo_name + "'");

  forest::ForestModel f = forest_from_json(child(doc, "forest", root), "model.forest");
  std::optional<Model> model;
  switch (*algo) {
    case Algorithm::kClems: {
      CsEmbedding e = embedding_from_json(child(doc, "embedding", root), "model.embedding");
      if (f.num_targets() != e.dim())
        throw ValidationError("forest target count does not match the embedding dimension");
      model.emplace(ClemsModel{std::move(e), std::move(f)});
      break;
    }
    case Algorithm::kPlst: {
      const json& pj = child(doc, "plst", root);
      PlstTransform t;
      const Eigen::MatrixXd mean = matrix_from_json(child(pj, "mean", "model.plst"), "model.plst.mean");
      t.projection = matrix_from_json(child(pj, "projection", "model.plst"), "model.plst.projection");
      if (mean.cols() != 1 || t.projection.rows() != mean.rows() || f.num_targets() != t.projection.cols())
        throw ValidationError("PLST transform shapes are inconsistent");
      t.mean = mean.col(0);
      model.emplace(PlstModel{std::move(t), std::move(f)});
      break;
    }
    case Algorithm::kBr:
      model.emplace(BrModel{std::move(f)});
      break;
  }
  model->label_names = field<std::vector<std::string>>(doc, "label_names", root);
  model->feature_names = field<std::vector<std::string>>(doc, "feature_names", root);
  return std::move(*model);
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_model(model);
  if (!out) throw Error("failed writing " + path.string());
}

Model load_model(const std::filesystem::path& path) { return deserialize_model(read_file(path)); }

}  // namespace clems::io
