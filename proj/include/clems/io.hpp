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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "clems/dataset.hpp"
#include "clems/embedding.hpp"
#include "clems/mds.hpp"
#include "clems/model.hpp"

namespace clems::io {

// ---------------------------------------------------------------------------
// ARFF

enum class AttributeKind { kNumeric, kBinaryNominal };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::kNumeric;
};

struct ArffRelation {
  std::string name;
  std::vector<Attribute> attributes;
  std::vector<std::vector<double>> rows;  // dense, sparse rows expanded with 0
};

/// Supports @relation, numeric/real/integer and {0,1} nominal attributes,
/// dense and sparse @data rows, '%' comment lines and case-insensitive
/// keywords. Throws ParseError (with line) on malformed input and
/// UnsupportedError for other attribute types.
ArffRelation parse_arff(std::string_view text);

// ---------------------------------------------------------------------------
// Datasets

/// Label names from a Mulan XML header, in document order (nested labels
/// included).
std::vector<std::string> parse_mulan_labels(std::string_view xml);

/// Attributes named in the label list become labels (in list order); all
/// other attributes become features (in file order).
Dataset dataset_from_relation(const ArffRelation& relation, const std::vector<std::string>& label_names);

Dataset load_mulan(const std::filesystem::path& arff, const std::filesystem::path& xml);

/// Numeric CSV whose last `num_labels` columns are 0/1 labels. A first row
/// containing any non-numeric cell is taken as a header.
Dataset load_csv(const std::filesystem::path& path, std::size_t num_labels);
Dataset parse_csv(std::string_view text, std::size_t num_labels);

std::string read_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Predictions and exports

/// One row per instance, one 0/1 column per label, with a header.
void write_predictions_csv(std::ostream& out, const std::vector<LabelVector>& preds,
                           const std::vector<std::string>& label_names);
std::vector<LabelVector> read_predictions_csv(std::string_view text);

/// Columns: role (t|p), candidate_index, frequency, z0..z{M-1}.
void write_embedding_csv(std::ostream& out, const CsEmbedding& embedding);

/// Columns: index, role, x0..x{M-1}. `roles` may be empty (role left blank).
void write_mds_csv(std::ostream& out, const mds::Solution& solution,
                   const std::vector<std::string>& roles = {});

// ---------------------------------------------------------------------------
// Model files

inline constexpr int kModelFormatVersion = 1;

std::string serialize_model(const Model& model);
/// Throws ParseError for malformed JSON, ValidationError for a well-formed
/// document missing fields, IncompatibleVersionError for other versions.
Model deserialize_model(std::string_view text);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace clems::io
