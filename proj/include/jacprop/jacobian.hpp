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
#include <vector>

#include "jacprop/model.hpp"
#include "jacprop/types.hpp"

namespace jacprop {

struct SingularHit {
  std::size_t layer = 0;       // 2..L
  std::size_t coordinate = 0;  // 1-based unit within the layer

  friend bool operator==(const SingularHit&, const SingularHit&) = default;
};

// Everything produced by one forward Jacobian pass. Index k of `per_layer`
// and `activations` holds layer k+1; index k of `weighted_inputs` holds layer
// k+2. Constant units introduced by bias folding are stripped throughout, so
// J^[l] is always width(l) x m.
struct JacobianTrace {
  Matrix full;                   // J_F(x), n x m
  std::vector<Matrix> per_layer;  // J^[1..L]; J^[1] = I_m, J^[L] = full
  std::vector<Vector> activations;
  std::vector<Vector> weighted_inputs;
  std::vector<SingularHit> singular_hits;
};

// Jacobian of the model at x, propagated from input to output in a single
// traversal:
//
//   a^[1] = x, J^[1] = I
//   z^[l] = W^[l] a^[l-1]
//   a^[l] = sigma^[l](z^[l])
//   J^[l] = J_sigma(z^[l]) W^[l] J^[l-1]
//
// Each weight matrix meets exactly one vector and one matrix. The product is
// associated whichever way is cheaper, and elementwise activations scale rows
// instead of forming a diagonal matrix.
//
// Throws SingularityError (with the layer filled in) under the reject policy,
// NonFiniteError when any intermediate overflows, DimensionError or
// ValidationError for bad arguments.
JacobianTrace jacobian_forward(const LayeredModel& model, const Vector& x,
                               EvalCounter* counter = nullptr);

// J^[layer] for layer in 1..L. Throws std::out_of_range otherwise.
const Matrix& jacobian_at_layer(const JacobianTrace& trace, std::size_t layer);

}  // namespace jacprop
