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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "jacprop/fd_oracle.hpp"
#include "jacprop/model.hpp"
#include "jacprop/sensitivity.hpp"
#include "jacprop/types.hpp"

namespace jacprop {

// Model file format (JSON, UTF-8, closed schema):
//
//   {
//     "schema_version": "1",
//     "input_dim": 2,
//     "layers": [
//       {"weights": [[1, 2]], "bias": [0.5],
//        "activation": {"kind": "leaky_relu", "alpha": 0.01,
//                       "relu_zero_policy": "derivative_zero"}}
//     ]
//   }
//
// "bias", "alpha" (leaky_relu only) and "relu_zero_policy" (relu and
// leaky_relu only) are optional. Unknown keys anywhere are rejected.

// Parses and folds biases without validating dimensions. Throws ParseError
// for JSON syntax errors and SchemaError for schema violations.
LayeredModel parse_model(std::string_view text);

// parse_model() followed by require_valid().
LayeredModel load_model(std::string_view text);

// Canonical document; save_model(load_model(save_model(m))) reproduces the
// first document byte for byte.
std::string save_model(const LayeredModel& model);

// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

// One CSV line per row, '\n' terminated, optional header line. Throws
// NonFiniteError for NaN or infinite entries.
std::string emit_matrix(const Matrix& matrix,
                        const std::vector<std::string>& header = {});

// Comma separated decimals; whitespace around tokens is ignored. Throws
// ParseError naming the 1-based column of a malformed token.
Vector parse_vector(std::string_view text);

// Rectangular CSV produced by emit_matrix(). Blank lines are skipped.
Matrix parse_matrix(std::string_view text, bool has_header = false);

std::string report_to_json(const SensitivityReport& report);
std::string comparison_to_json(const ComparisonResult& result);

}  // namespace jacprop
