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

#include "jacprop/jacobian.hpp"

#include <stdexcept>
#include <string>

#include "jacprop/errors.hpp"

namespace jacprop {
namespace {

// J_sigma as a diagonal (elementwise kinds) or a dense block (softmax). A
// carried constant unit contributes a trailing 1 on the diagonal.
struct LayerJacobian {
  bool diagonal = true;
  Vector diag;
  Matrix dense;
};

LayerJacobian layer_jacobian(const LayerDef& layer, const Vector& z,
                             std::size_t l, std::vector<SingularHit>& hits) {
  const Eigen::Index n = z.size() - (layer.carries_constant ? 1 : 0);
  const Vector head = z.head(n);
  LayerJacobian out;
  std::vector<std::size_t> coords;
  try {
    if (is_elementwise(layer.activation.kind)) {
      out.diag = Vector::Ones(z.size());
      out.diag.head(n) = activation_derivative(layer.activation, head, &coords);
    } else {
      out.diagonal = false;
      out.dense = Matrix::Identity(z.size(), z.size());
      out.dense.topLeftCorner(n, n) =
          activation_jacobian(layer.activation, head).matrix;
    }
  } catch (const SingularityError& e) {
    throw SingularityError("layer " + std::to_string(l) + ": " + e.what(), l,
                           e.coordinate());
  }
  for (auto c : coords) hits.push_back({l, c});
  return out;
}

}  // namespace

JacobianTrace jacobian_forward(const LayeredModel& model, const Vector& x,
                               EvalCounter* counter) {
  require_valid(model);
  Vector a = augment_input(model, x);
  if (counter) ++counter->model_evaluations;

  const Eigen::Index m = static_cast<Eigen::Index>(model.feature_dim());
  Matrix jac = Matrix::Identity(a.size(), a.size());

  JacobianTrace trace;
  trace.activations.reserve(model.num_layers());
  trace.per_layer.reserve(model.num_layers());
  trace.weighted_inputs.reserve(model.layers.size());
  trace.activations.push_back(x);
  trace.per_layer.push_back(Matrix::Identity(m, m));

  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const auto& layer = model.layers[i];
    const auto& w = layer.weights;
    const std::size_t l = i + 2;

    const Vector z = w * a;
    if (counter) ++counter->layer_evaluations;
    if (!z.allFinite()) {
      throw NonFiniteError(
          "weighted input at layer " + std::to_string(l) + " is not finite", l,
          0);
    }
    a = layer_activation_apply(layer, z);
    if (!a.allFinite()) {
      throw NonFiniteError(
          "activation at layer " + std::to_string(l) + " is not finite", l, 0);
    }

    const LayerJacobian local =
        layer_jacobian(layer, z, l, trace.singular_hits);
    // Narrowing layers fold J_sigma into W first; widening layers push J
    // through W first. Either order yields the same product.
    const bool scale_weights_first = w.rows() <= w.cols();
    if (local.diagonal) {
      if (scale_weights_first) {
        const Matrix scaled = local.diag.asDiagonal() * w;
        jac = scaled * jac;
      } else {
        const Matrix propagated = w * jac;
        jac = local.diag.asDiagonal() * propagated;
      }
    } else {
      if (scale_weights_first) {
        const Matrix scaled = local.dense * w;
        jac = scaled * jac;
      } else {
        const Matrix propagated = w * jac;
        jac = local.dense * propagated;
      }
    }
    if (!jac.allFinite()) {
      throw NonFiniteError(
          "Jacobian at layer " + std::to_string(l) + " is not finite", l, 0);
    }

    const Eigen::Index width =
        a.size() - (layer.carries_constant ? 1 : 0);
    trace.weighted_inputs.emplace_back(z.head(width));
    trace.activations.emplace_back(a.head(width));
    trace.per_layer.emplace_back(jac.topLeftCorner(width, m));
  }
  trace.full = trace.per_layer.back();
  return trace;
}

const Matrix& jacobian_at_layer(const JacobianTrace& trace,
                                std::size_t layer) {
  if (layer < 1 || layer > trace.per_layer.size()) {
    throw std::out_of_range("layer " + std::to_string(layer) + " outside 1.." +
                            std::to_string(trace.per_layer.size()));
  }
  return trace.per_layer[layer - 1];
}

}  // namespace jacprop
