/* Copyright 2026 The jacprop Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "jacprop/model_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <initializer_list>
#include <string>

#include "json.hpp"

#include "jacprop/errors.hpp"

namespace jacprop {
namespace {

using nlohmann::json;

constexpr double kDefaultLeakyAlpha = 0.01;

std::string layer_prefix(std::size_t pos) {
  return "layer " + std::to_string(pos) + ": ";
}

void require_keys(const json& object, std::initializer_list<std::string_view> allowed,
                  const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (auto name : allowed) known = known || key == name;
    if (!known) throw SchemaError(where + "unknown key \"" + key + "\"");
  }
}

const json& require_field(const json& object, const char* key,
                          const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw SchemaError(where + "missing required key \"" + key + "\"");
  }
  return *it;
}

double number_at(const json& value, const std::string& where) {
  if (!value.is_number()) throw SchemaError(where + "expected a number");
  return value.get<double>();
}

Vector parse_number_array(const json& value, const std::string& where) {
  if (!value.is_array()) throw SchemaError(where + "expected an array");
  Vector out(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = number_at(value[i], where);
  }
  return out;
}

Matrix parse_weights(const json& value, const std::string& where) {
  if (!value.is_array()) {
    throw SchemaError(where + "weights must be an array of rows");
  }
  if (value.empty()) return Matrix(0, 0);
  const std::size_t cols = value[0].is_array() ? value[0].size() : 0;
  Matrix out(static_cast<Eigen::Index>(value.size()),
             static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < value.size(); ++r) {
    const auto& row = value[r];
    const std::string row_where = where + "weights row " + std::to_string(r + 1) + ": ";
    if (!row.is_array()) throw SchemaError(row_where + "expected an array");
    if (row.size() != cols) {
      throw SchemaError(row_where + "has " + std::to_string(row.size()) +
                        " entries, expected " + std::to_string(cols) +
                        " (ragged weights)");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          number_at(row[c], row_where);
    }
  }
  return out;
}

ActivationSpec parse_activation(const json& value, const std::string& where) {
  if (!value.is_object()) throw SchemaError(where + "activation must be an object");
  require_keys(value, {"kind", "alpha", "relu_zero_policy"}, where + "activation: ");
  const auto& kind_value = require_field(value, "kind", where + "activation: ");
  if (!kind_value.is_string()) {
    throw SchemaError(where + "activation kind must be a string");
  }
  const auto kind_name = kind_value.get<std::string>();
  const auto kind = parse_activation_kind(kind_name);
  if (!kind) {
    throw SchemaError(where + "unknown activation kind \"" + kind_name + "\"");
  }

  ActivationSpec spec;
  spec.kind = *kind;
  if (auto it = value.find("alpha"); it != value.end()) {
    if (spec.kind != ActivationKind::kLeakyRelu) {
      throw SchemaError(where + "alpha is only valid for leaky_relu");
    }
    spec.alpha = number_at(*it, where + "alpha: ");
  } else if (spec.kind == ActivationKind::kLeakyRelu) {
    spec.alpha = kDefaultLeakyAlpha;
  }
  if (auto it = value.find("relu_zero_policy"); it != value.end()) {
    if (!has_singular_point(spec.kind)) {
      throw SchemaError(where +
                        "relu_zero_policy is only valid for relu and leaky_relu");
    }
    const auto policy =
        it->is_string() ? parse_relu_zero_policy(it->get<std::string>())
                        : std::nullopt;
    if (!policy) throw SchemaError(where + "unknown relu_zero_policy");
    spec.relu_zero_policy = *policy;
  }
  return spec;
}

json activation_to_json(const ActivationSpec& spec) {
  json out;
  out["kind"] = std::string(to_string(spec.kind));
  if (spec.kind == ActivationKind::kLeakyRelu) out["alpha"] = spec.alpha;
  if (has_singular_point(spec.kind)) {
    out["relu_zero_policy"] = std::string(to_string(spec.relu_zero_policy));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

}  // namespace

LayeredModel parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("model syntax error at byte " + std::to_string(e.byte) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw SchemaError("model document must be an object");
  require_keys(doc, {"schema_version", "input_dim", "layers"}, "");

  const auto& version = require_field(doc, "schema_version", "");
  if (!version.is_string() || version.get<std::string>() != "1") {
    throw SchemaError("schema_version must be the string \"1\"");
  }
  const auto& input_dim = require_field(doc, "input_dim", "");
  if (!input_dim.is_number_integer() || input_dim.get<long long>() <= 0) {
    throw SchemaError("input_dim must be a positive integer");
  }
  const auto& layers = require_field(doc, "layers", "");
  if (!layers.is_array()) throw SchemaError("layers must be an array");

  std::vector<AffineLayer> affine;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& layer = layers[i];
    const std::string where = layer_prefix(i + 1);
    if (!layer.is_object()) throw SchemaError(where + "expected an object");
    require_keys(layer, {"weights", "bias", "activation"}, where);

    AffineLayer out;
    out.weights = parse_weights(require_field(layer, "weights", where), where);
    out.activation =
        parse_activation(require_field(layer, "activation", where), where);
    if (auto it = layer.find("bias"); it != layer.end()) {
      out.bias = parse_number_array(*it, where + "bias: ");
      if (out.bias->size() != out.weights.rows()) {
        throw ValidationError(where + "bias has " +
                              std::to_string(out.bias->size()) +
                              " entries but weights have " +
                              std::to_string(out.weights.rows()) + " rows");
      }
    }
    affine.push_back(std::move(out));
  }
  return fold_biases(input_dim.get<std::size_t>(), affine);
}

LayeredModel load_model(std::string_view text) {
  LayeredModel model = parse_model(text);
  require_valid(model);
  return model;
}

std::string save_model(const LayeredModel& model) {
  json doc;
  doc["schema_version"] = "1";
  doc["input_dim"] = model.feature_dim();
  json layers = json::array();
  for (const auto& layer : unfold_biases(model)) {
    json entry;
    json rows = json::array();
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        row.push_back(layer.weights(r, c));
      }
      rows.push_back(std::move(row));
    }
    entry["weights"] = std::move(rows);
    if (layer.bias) {
      json bias = json::array();
      for (Eigen::Index r = 0; r < layer.bias->size(); ++r) {
        bias.push_back((*layer.bias)[r]);
      }
      entry["bias"] = std::move(bias);
    }
    entry["activation"] = activation_to_json(layer.activation);
    layers.push_back(std::move(entry));
  }
  doc["layers"] = std::move(layers);
  return doc.dump(2) + "\n";
}

std::string format_number(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf.data(), end);
}

std::string emit_matrix(const Matrix& matrix,
                        const std::vector<std::string>& header) {
  std::string out;
  if (!header.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c) out += ',';
      out += header[c];
    }
    out += '\n';
  }
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      const double v = matrix(r, c);
      if (!std::isfinite(v)) {
        throw NonFiniteError("matrix entry (" + std::to_string(r + 1) + "," +
                                 std::to_string(c + 1) + ") is not finite",
                             0, static_cast<std::size_t>(r) + 1);
      }
      if (c) out += ',';
      out += format_number(v);
    }
    out += '\n';
  }
  return out;
}

Vector parse_vector(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ParseError("empty vector");
  std::vector<double> values;
  std::size_t column = 0;
  while (true) {
    ++column;
    const auto comma = text.find(',');
    std::string_view token = trim(text.substr(0, comma));
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc{} ||
        ptr != token.data() + token.size() || !std::isfinite(v)) {
      throw ParseError("malformed number \"" + std::string(token) +
                       "\" in column " + std::to_string(column));
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

Matrix parse_matrix(std::string_view text, bool has_header) {
  std::vector<Vector> rows;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    try {
      rows.push_back(parse_vector(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (rows.back().size() != rows.front().size()) {
      throw ParseError("line " + std::to_string(line_no) + " has " +
                       std::to_string(rows.back().size()) + " columns, expected " +
                       std::to_string(rows.front().size()));
    }
  }
  if (rows.empty()) return Matrix(0, 0);
  Matrix out(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  }
  return out;
}

std::string report_to_json(const SensitivityReport& report) {
  nlohmann::ordered_json doc;
  doc["feature_scores"] = report.feature_scores;
  doc["output_scores"] = report.output_scores;
  doc["feature_ranking"] = report.feature_ranking;
  doc["output_ranking"] = report.output_ranking;
  auto hits = nlohmann::ordered_json::array();
  for (const auto& hit : report.singular_hits) {
    hits.push_back({hit.layer, hit.coordinate});
  }
  doc["singular_hits"] = std::move(hits);
  doc["same_unit"] = report.same_unit;
  return doc.dump(2) + "\n";
}

std::string comparison_to_json(const ComparisonResult& result) {
  nlohmann::ordered_json doc;
  doc["max_abs_diff"] = result.max_abs_diff;
  doc["max_rel_diff"] = result.max_rel_diff;
  doc["argmax_location"] = {result.argmax_row, result.argmax_col};
  doc["within_tolerance"] = result.within_tolerance;
  return doc.dump(2) + "\n";
}

}  // namespace jacprop
