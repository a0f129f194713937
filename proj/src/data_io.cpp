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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "clems/error.hpp"
#include "clems/io.hpp"

namespace clems::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool starts_with_keyword(std::string_view line, std::string_view keyword) {
  if (line.size() < keyword.size()) return false;
  for (std::size_t i = 0; i < keyword.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(line[i])) != keyword[i]) return false;
  return line.size() == keyword.size() || std::isspace(static_cast<unsigned char>(line[keyword.size()]));
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

// Calls fn(line_number, line) for each line, with '\r' stripped.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    fn(line_no, line);
    if (end == text.size()) break;
    start = end + 1;
  }
}

Attribute parse_attribute(std::size_t line_no, std::string_view rest) {
  rest = trim(rest);
  if (rest.empty()) throw ParseError(line_no, "@attribute without a name");
  Attribute attr;
  std::string_view type;
  if (rest.front() == '\'' || rest.front() == '"') {
    const std::size_t close = rest.find(rest.front(), 1);
    if (close == std::string_view::npos) throw ParseError(line_no, "unterminated attribute name");
    attr.name = std::string(rest.substr(1, close - 1));
    type = trim(rest.substr(close + 1));
  } else {
    std::size_t ws = 0;
    while (ws < rest.size() && !std::isspace(static_cast<unsigned char>(rest[ws])) && rest[ws] != '{') ++ws;
    attr.name = std::string(rest.substr(0, ws));
    type = trim(rest.substr(ws));
  }
  if (type.empty()) throw ParseError(line_no, "attribute '" + attr.name + "' has no type");

  if (type.front() == '{') {
    if (type.back() != '}') throw ParseError(line_no, "unterminated nominal value list");
    std::vector<std::string> values;
    for (auto v : split(type.substr(1, type.size() - 2), ','))
      values.emplace_back(unquote(trim(v)));
    std::sort(values.begin(), values.end());
    if (values != std::vector<std::string>{"0", "1"})
      throw UnsupportedError("line " + std::to_string(line_no) + ": nominal attribute '" + attr.name +
                             "' must have values {0,1}");
    attr.kind = AttributeKind::kBinaryNominal;
    return attr;
  }
  const std::string t = lower(type);
  if (t == "numeric" || t == "real" || t == "integer") {
    attr.kind = AttributeKind::kNumeric;
    return attr;
  }
  throw UnsupportedError("line " + std::to_string(line_no) + ": attribute type '" + std::string(type) +
                         "' is not supported");
}

double parse_value(std::size_t line_no, std::string_view token, const Attribute& attr) {
  token = unquote(trim(token));
  if (token == "?")
    throw ParseError(line_no, "missing value for attribute '" + attr.name + "' is not supported");
  double v = 0.0;
  if (attr.kind == AttributeKind::kBinaryNominal) {
    if (token == "0") return 0.0;
    if (token == "1") return 1.0;
    throw ParseError(line_no, "value '" + std::string(token) + "' is not in {0,1} for '" + attr.name + "'");
  }
  if (!parse_double(token, v))
    throw ParseError(line_no, "bad numeric value '" + std::string(token) + "' for '" + attr.name + "'");
  return v;
}

}  // namespace

ArffRelation parse_arff(std::string_view text) {
  ArffRelation rel;
  bool in_data = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '%') return;
    if (!in_data) {
      if (starts_with_keyword(line, "@relation")) {
        rel.name = std::string(unquote(trim(line.substr(9))));
      } else if (starts_with_keyword(line, "@attribute")) {
        rel.attributes.push_back(parse_attribute(line_no, line.substr(10)));
      } else if (starts_with_keyword(line, "@data")) {
        if (rel.attributes.empty()) throw ParseError(line_no, "@data before any @attribute");
        in_data = true;
      } else {
        throw ParseError(line_no, "unexpected header line");
      }
      return;
    }
    const std::size_t n = rel.attributes.size();
    std::vector<double> row(n, 0.0);
    if (line.front() == '{') {
      if (line.back() != '}') throw ParseError(line_no, "unterminated sparse row");
      const std::string_view body = trim(line.substr(1, line.size() - 2));
      if (!body.empty()) {
        for (auto item : split(body, ',')) {
          item = trim(item);
          std::size_t ws = 0;
          while (ws < item.size() && !std::isspace(static_cast<unsigned char>(item[ws]))) ++ws;
          const std::string_view idx_text = item.substr(0, ws);
          std::size_t idx = 0;
          auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
          if (ec != std::errc() || ptr != idx_text.data() + idx_text.size() || idx_text.empty())
            throw ParseError(line_no, "bad sparse index '" + std::string(idx_text) + "'");
          if (idx >= n)
            throw ParseError(line_no, "sparse index " + std::to_string(idx) + " out of range");
          const std::string_view value = trim(item.substr(ws));
          if (value.empty()) throw ParseError(line_no, "sparse entry without a value");
          row[idx] = parse_value(line_no, value, rel.attributes[idx]);
        }
      }
    } else {
      const auto tokens = split(line, ',');
      if (tokens.size() != n)
        throw ParseError(line_no, "row has " + std::to_string(tokens.size()) + " values, expected " +
                                      std::to_string(n));
      for (std::size_t i = 0; i < n; ++i) row[i] = parse_value(line_no, tokens[i], rel.attributes[i]);
    }
    rel.rows.push_back(std::move(row));
  });
  if (rel.attributes.empty()) throw ParseError(1, "no @attribute declarations");
  if (!in_data) throw ParseError(1, "no @data section");
  return rel;
}

std::vector<std::string> parse_mulan_labels(std::string_view xml) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(xml)};
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(e.line(), "label XML: " + e.message());
  }
  std::vector<std::string> names;
  auto walk = [&](auto&& self, const pt::ptree& node) -> void {
    for (const auto& [key, child] : node) {
      if (key != "label") continue;
      auto name = child.template get_optional<std::string>("<xmlattr>.name");
      if (!name) throw SchemaError("label XML: <label> element without a name attribute");
      names.push_back(*name);
      self(self, child);
    }
  };
  auto root = tree.get_child_optional("labels");
  if (!root) throw SchemaError("label XML: missing <labels> root element");
  walk(walk, *root);
  if (names.empty()) throw SchemaError("label XML lists no labels");
  return names;
}

Dataset dataset_from_relation(const ArffRelation& relation, const std::vector<std::string>& label_names) {
  std::unordered_map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < relation.attributes.size(); ++i)
    by_name.emplace(relation.attributes[i].name, i);

  std::vector<std::size_t> label_cols;
  std::vector<char> is_label(relation.attributes.size(), 0);
  for (const auto& name : label_names) {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw SchemaError("label '" + name + "' is not an attribute of the ARFF file");
    if (is_label[it->second]) throw SchemaError("label '" + name + "' listed twice");
    is_label[it->second] = 1;
    label_cols.push_back(it->second);
  }
  std::vector<std::size_t> feature_cols;
  for (std::size_t i = 0; i < relation.attributes.size(); ++i)
    if (!is_label[i]) feature_cols.push_back(i);

  Dataset ds(feature_cols.size(), label_cols.size());
  ds.label_names = label_names;
  for (auto c : feature_cols) ds.feature_names.push_back(relation.attributes[c].name);
  for (std::size_t r = 0; r < relation.rows.size(); ++r) {
    const auto& row = relation.rows[r];
    Instance inst;
    inst.features.reserve(feature_cols.size());
    for (auto c : feature_cols) inst.features.push_back(row[c]);
    std::vector<std::uint8_t> bits;
    bits.reserve(label_cols.size());
    for (auto c : label_cols) {
      if (row[c] != 0.0 && row[c] != 1.0)
        throw ValidationError("row " + std::to_string(r) + ": label '" + relation.attributes[c].name +
                              "' is not binary");
      bits.push_back(row[c] == 1.0 ? 1 : 0);
    }
    inst.label = LabelVector(std::move(bits));
    ds.add(std::move(inst));
  }
  return ds;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset load_mulan(const std::filesystem::path& arff, const std::filesystem::path& xml) {
  const ArffRelation rel = parse_arff(read_file(arff));
  return dataset_from_relation(rel, parse_mulan_labels(read_file(xml)));
}

Dataset parse_csv(std::string_view text, std::size_t num_labels) {
  if (num_labels == 0) throw ValidationError("CSV needs at least one label column");
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  bool first = true;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const std::string_view line = trim(raw);
    if (line.empty()) return;
    const auto cells = split(line, ',');
    std::vector<double> values(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells.size() && numeric; ++i) numeric = parse_double(cells[i], values[i]);
    if (width == 0) width = cells.size();
    if (cells.size() != width)
      throw ParseError(line_no, "row has " + std::to_string(cells.size()) + " columns, expected " +
                                    std::to_string(width));
    if (!numeric) {
      if (!first) throw ParseError(line_no, "non-numeric cell in data row");
      for (auto c : cells) header.emplace_back(unquote(trim(c)));
    } else {
      rows.push_back(std::move(values));
    }
    first = false;
  });
  if (num_labels >= width)
    throw ValidationError("CSV has " + std::to_string(width) + " columns, cannot take " +
                          std::to_string(num_labels) + " labels and keep a feature");
  const std::size_t d = width - num_labels;
  Dataset ds(d, num_labels);
  for (std::size_t i = 0; i < width; ++i) {
    std::string name = header.empty() ? (i < d ? "x" + std::to_string(i) : "y" + std::to_string(i - d))
                                      : header[i];
    (i < d ? ds.feature_names : ds.label_names).push_back(std::move(name));
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Instance inst;
    inst.features.assign(rows[r].begin(), rows[r].begin() + static_cast<std::ptrdiff_t>(d));
    std::vector<std::uint8_t> bits;
    for (std::size_t j = d; j < width; ++j) {
      const double v = rows[r][j];
      if (v != 0.0 && v != 1.0)
        throw ValidationError("CSV row " + std::to_string(r) + ": label column " + std::to_string(j) +
                              " is not 0/1");
      bits.push_back(v == 1.0 ? 1 : 0);
    }
    inst.label = LabelVector(std::move(bits));
    ds.add(std::move(inst));
  }
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, std::size_t num_labels) {
  return parse_csv(read_file(path), num_labels);
}

void write_predictions_csv(std::ostream& out, const std::vector<LabelVector>& preds,
                           const std::vector<std::string>& label_names) {
  const std::size_t k = preds.empty() ? label_names.size() : preds.front().size();
  for (std::size_t j = 0; j < k; ++j) {
    if (j) out << ',';
    out << (j < label_names.size() ? label_names[j] : "y" + std::to_string(j));
  }
  out << '\n';
  for (const auto& y : preds) {
    for (std::size_t j = 0; j < y.size(); ++j) out << (j ? "," : "") << (y[j] ? '1' : '0');
    out << '\n';
  }
}

std::vector<LabelVector> read_predictions_csv(std::string_view text) {
  std::vector<LabelVector> out;
  bool header_seen = false;
  std::size_t width = 0;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const std::string_view line = trim(raw);
    if (line.empty()) return;
    const auto cells = split(line, ',');
    if (!header_seen) {
      header_seen = true;
      width = cells.size();
      return;
    }
    if (cells.size() != width) throw ParseError(line_no, "prediction row width differs from header");
    std::vector<std::uint8_t> bits;
    for (auto c : cells) {
      c = trim(c);
      if (c != "0" && c != "1") throw ParseError(line_no, "prediction cells must be 0 or 1");
      bits.push_back(c == "1" ? 1 : 0);
    }
    out.emplace_back(std::move(bits));
  });
  return out;
}

void write_embedding_csv(std::ostream& out, const CsEmbedding& embedding) {
  out.precision(17);
  out << "role,candidate_index,frequency";
  for (int k = 0; k < embedding.dim(); ++k) out << ",z" << k;
  out << '\n';
  const auto& cands = embedding.candidates();
  for (const char role : {'t', 'p'}) {
    const auto& coords = role == 't' ? embedding.truth_coords() : embedding.pred_coords();
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
      out << role << ',' << i << ',' << cands.freq(static_cast<std::size_t>(i));
      for (Eigen::Index k = 0; k < coords.cols(); ++k) out << ',' << coords(i, k);
      out << '\n';
    }
  }
}

void write_mds_csv(std::ostream& out, const mds::Solution& solution, const std::vector<std::string>& roles) {
  out.precision(17);
  out << "index,role";
  for (Eigen::Index k = 0; k < solution.coords.cols(); ++k) out << ",x" << k;
  out << '\n';
  for (Eigen::Index i = 0; i < solution.coords.rows(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    out << i << ',' << (ui < roles.size() ? roles[ui] : "");
    for (Eigen::Index k = 0; k < solution.coords.cols(); ++k) out << ',' << solution.coords(i, k);
    out << '\n';
  }
}

}  // namespace clems::io
