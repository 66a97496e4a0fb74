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

#include "jacprop/fd_oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "jacprop/errors.hpp"

namespace jacprop {
namespace {

Vector probe(const LayeredModel& model, const Vector& x, std::size_t index,
             EvalCounter* counter) {
  Vector y;
  try {
    y = evaluate(model, x, counter);
  } catch (const NonFiniteError& e) {
    throw NonFiniteError("probe " + std::to_string(index) + ": " + e.what(), 0,
                         index);
  }
  return y;
}

}  // namespace

Matrix finite_difference_jacobian(const LayeredModel& model, const Vector& x,
                                  const FdConfig& cfg, EvalCounter* counter) {
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) {
    throw DimensionError("finite-difference step must be positive and finite");
  }
  require_valid(model);
  if (static_cast<std::size_t>(x.size()) != model.feature_dim()) {
    throw DimensionError("input has " + std::to_string(x.size()) +
                         " features but the model expects " +
                         std::to_string(model.feature_dim()));
  }

  const Eigen::Index m = x.size();
  const auto n = static_cast<Eigen::Index>(model.output_dim());
  const double h = cfg.step;
  Matrix jac(n, m);
  std::size_t probe_index = 0;

  if (cfg.scheme == FdScheme::kForward) {
    const Vector base = probe(model, x, ++probe_index, counter);
    for (Eigen::Index j = 0; j < m; ++j) {
      Vector shifted = x;
      shifted[j] += h;
      jac.col(j) = (probe(model, shifted, ++probe_index, counter) - base) / h;
    }
  } else {
    for (Eigen::Index j = 0; j < m; ++j) {
      Vector up = x;
      Vector down = x;
      up[j] += h;
      down[j] -= h;
      const Vector f_up = probe(model, up, ++probe_index, counter);
      const Vector f_down = probe(model, down, ++probe_index, counter);
      jac.col(j) = (f_up - f_down) / (2.0 * h);
    }
  }
  return jac;
}

ComparisonResult compare_jacobians(const Matrix& a, const Matrix& b,
                                   double tolerance) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("cannot compare a " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " matrix with a " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + " matrix");
  }
  if (a.size() == 0) throw DimensionError("cannot compare empty matrices");

  ComparisonResult out;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double diff = std::abs(a(i, j) - b(i, j));
      const double rel = diff / (1.0 + std::abs(a(i, j)));
      if (std::isnan(diff)) {
        out.max_abs_diff = std::numeric_limits<double>::quiet_NaN();
        out.max_rel_diff = out.max_abs_diff;
        out.argmax_row = static_cast<std::size_t>(i) + 1;
        out.argmax_col = static_cast<std::size_t>(j) + 1;
        return out;
      }
      if (diff > out.max_abs_diff) {
        out.max_abs_diff = diff;
        out.argmax_row = static_cast<std::size_t>(i) + 1;
        out.argmax_col = static_cast<std::size_t>(j) + 1;
      }
      if (rel > out.max_rel_diff) out.max_rel_diff = rel;
    }
  }
  out.within_tolerance = out.max_abs_diff <= tolerance;
  return out;
}

}  // namespace jacprop
