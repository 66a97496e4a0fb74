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

#include <cstddef>

#include "jacprop/model.hpp"
#include "jacprop/types.hpp"

namespace jacprop {

enum class FdScheme { kForward, kCentral };

struct FdConfig {
  double step = 1e-5;  // absolute, not scaled by |x_j|
  FdScheme scheme = FdScheme::kCentral;
};

// Finite-difference estimate of J_F(x), one input coordinate at a time.
//   forward: (F(x + h e_j) - F(x)) / h, m + 1 model evaluations
//   central: (F(x + h e_j) - F(x - h e_j)) / 2h, 2m model evaluations
// Evaluations are single threaded and reported through `counter`.
// Throws NonFiniteError whose index() is the 1-based probe number.
Matrix finite_difference_jacobian(const LayeredModel& model, const Vector& x,
                                  const FdConfig& cfg = {},
                                  EvalCounter* counter = nullptr);

struct ComparisonResult {
  double max_abs_diff = 0.0;
  double max_rel_diff = 0.0;   // max |a - b| / (1 + |a|)
  std::size_t argmax_row = 1;  // 1-based location of max_abs_diff
  std::size_t argmax_col = 1;
  bool within_tolerance = false;
};

// Throws DimensionError when shapes differ or either matrix is empty.
ComparisonResult compare_jacobians(const Matrix& a, const Matrix& b,
                                   double tolerance);

}  // namespace jacprop
