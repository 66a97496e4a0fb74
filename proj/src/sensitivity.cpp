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

#include "jacprop/sensitivity.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "jacprop/errors.hpp"

namespace jacprop {
namespace {

// 1-based indices ordered by descending score, ties by ascending index.
std::vector<std::size_t> rank(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{1});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t lhs, std::size_t rhs) {
                     return scores[lhs - 1] > scores[rhs - 1];
                   });
  return order;
}

}  // namespace

SensitivityReport build_report(const Matrix& jacobian, bool same_unit) {
  for (Eigen::Index j = 0; j < jacobian.cols(); ++j) {
    for (Eigen::Index i = 0; i < jacobian.rows(); ++i) {
      if (!std::isfinite(jacobian(i, j))) {
        throw NonFiniteError("Jacobian entry (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ") is not finite",
                             0, static_cast<std::size_t>(i) + 1);
      }
    }
  }

  SensitivityReport report;
  report.same_unit = same_unit;
  report.per_entry = jacobian;
  report.feature_scores.reserve(jacobian.cols());
  for (Eigen::Index j = 0; j < jacobian.cols(); ++j) {
    report.feature_scores.push_back(jacobian.col(j).norm());
  }
  report.output_scores.reserve(jacobian.rows());
  for (Eigen::Index i = 0; i < jacobian.rows(); ++i) {
    report.output_scores.push_back(jacobian.row(i).norm());
  }
  report.feature_ranking = rank(report.feature_scores);
  report.output_ranking = rank(report.output_scores);
  return report;
}

std::vector<std::pair<std::size_t, double>> top_k(
    const SensitivityReport& report, Axis axis, std::size_t k) {
  const auto& ranking =
      axis == Axis::kFeature ? report.feature_ranking : report.output_ranking;
  const auto& scores =
      axis == Axis::kFeature ? report.feature_scores : report.output_scores;
  const std::size_t count = std::min(k, ranking.size());
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    out.emplace_back(ranking[r], scores[ranking[r] - 1]);
  }
  return out;
}

}  // namespace jacprop
