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
#include <utility>
#include <vector>

#include "jacprop/jacobian.hpp"
#include "jacprop/types.hpp"

namespace jacprop {

// Per-instance sensitivity summary of a Jacobian.
//
// Column j of J says how every output moves per unit change of feature j, so
// the column's Euclidean norm ranks features by influence. Row i says how
// output i responds to every feature; comparing row norms is most meaningful
// when the outputs share a unit (class probabilities, for instance), which
// the caller records in `same_unit`. Indices are 1-based and rankings break
// ties by ascending index.
struct SensitivityReport {
  std::vector<double> feature_scores;
  std::vector<double> output_scores;
  std::vector<std::size_t> feature_ranking;
  std::vector<std::size_t> output_ranking;
  Matrix per_entry;
  std::vector<SingularHit> singular_hits;
  bool same_unit = false;
};

enum class Axis { kFeature, kOutput };

// Throws NonFiniteError for a non-finite entry.
SensitivityReport build_report(const Matrix& jacobian, bool same_unit = false);

// First min(k, axis length) ranked (index, score) pairs.
std::vector<std::pair<std::size_t, double>> top_k(
    const SensitivityReport& report, Axis axis, std::size_t k);

}  // namespace jacprop
