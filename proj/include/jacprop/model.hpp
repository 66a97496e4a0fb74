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

#include <atomic>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jacprop/activation.hpp"
#include "jacprop/types.hpp"

namespace jacprop {

// Layer numbering follows the usual feedforward convention: layer 1 is the
// input x, layers 2..L are the entries of LayeredModel::layers in order.
// Validation findings instead name the 1-based position in `layers`, which
// is what a model file author sees.

struct LayerDef {
  Matrix weights;  // n^[l] x n^[l-1]
  ActivationSpec activation;
  // When set, the last row of `weights` selects the incoming constant-1 unit
  // and that unit bypasses the activation, so the next layer can keep its
  // bias as an ordinary weight column.
  bool carries_constant = false;

  friend bool operator==(const LayerDef& a, const LayerDef& b) {
    return a.weights.rows() == b.weights.rows() &&
           a.weights.cols() == b.weights.cols() && a.weights == b.weights &&
           a.activation == b.activation && a.carries_constant == b.carries_constant;
  }
};

// A bias-free layered model y = F(x). Biases are represented as an extra
// weight column paired with a constant-1 input (see fold_biases()).
//
// Plain value type. validate_model() reports problems; evaluating functions
// require a valid model.
struct LayeredModel {
  // Width of the input including the constant unit when constant_input is set.
  std::size_t input_dim = 0;
  std::vector<LayerDef> layers;
  // The last input coordinate is a constant 1 appended by forward().
  bool constant_input = false;

  // L, counting the input layer.
  std::size_t num_layers() const noexcept { return layers.size() + 1; }
  // m, the number of user-visible input features.
  std::size_t feature_dim() const noexcept {
    return input_dim - (constant_input ? 1 : 0);
  }
  std::size_t output_dim() const;
  // n^[l] without any carried constant unit, l in 1..L.
  std::size_t width(std::size_t layer) const;

  friend bool operator==(const LayeredModel&, const LayeredModel&) = default;
};

// A layer as exported by a training framework: W a + b followed by sigma.
struct AffineLayer {
  Matrix weights;
  std::optional<Vector> bias;
  ActivationSpec activation;
};

struct Violation {
  std::size_t layer = 0;  // 1-based position in `layers`; 0 = whole model
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Counts evaluations for instrumentation. Safe to share across threads.
struct EvalCounter {
  std::atomic<std::size_t> model_evaluations{0};
  // Number of weighted inputs z = W a computed, summed over layers.
  std::atomic<std::size_t> layer_evaluations{0};

  void reset() noexcept {
    model_evaluations = 0;
    layer_evaluations = 0;
  }
};

std::vector<Violation> validate_model(const LayeredModel& model);

// Throws ValidationError listing every violation.
void require_valid(const LayeredModel& model);

// [W | b]. Throws DimensionError when b.size() != W.rows().
Matrix fold_bias(const Matrix& weights, const Vector& bias);

// Canonical bias-free form of an affine model. With no biases anywhere the
// weights are used as given. Otherwise the input gains a constant unit, every
// hidden layer carries it forward and every layer gets a bias column (zero
// where the layer had no bias). Shape errors are left for validate_model().
LayeredModel fold_biases(std::size_t input_dim,
                         const std::vector<AffineLayer>& layers);

// Inverse of fold_biases(): strips carried units and splits bias columns back
// out. Layers whose input has no constant unit get no bias.
std::vector<AffineLayer> unfold_biases(const LayeredModel& model);

// Appends the constant unit when the model expects one. Throws
// DimensionError / NonFiniteError for a bad instance vector.
Vector augment_input(const LayeredModel& model, const Vector& x);

// sigma applied to a layer's weighted input, honoring a carried constant.
Vector layer_activation_apply(const LayerDef& layer, const Vector& z);

// a^[1..L]; a^[1] = x and the last entry is y. Carried constants are not
// reported. Throws NonFiniteError naming the first layer that overflows.
std::vector<Vector> forward(const LayeredModel& model, const Vector& x,
                            EvalCounter* counter = nullptr);

// Final activation only.
Vector evaluate(const LayeredModel& model, const Vector& x,
                EvalCounter* counter = nullptr);

// Layers first..last (2 <= first <= last <= L) as a model of its own, taking
// a^[first-1] as input and producing a^[last].
LayeredModel submodel(const LayeredModel& model, std::size_t first,
                      std::size_t last);

}  // namespace jacprop
