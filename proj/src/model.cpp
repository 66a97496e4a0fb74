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

#include "jacprop/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "jacprop/errors.hpp"

namespace jacprop {
namespace {

bool input_has_constant(const LayeredModel& model, std::size_t index) {
  return index == 0 ? model.constant_input
                    : model.layers[index - 1].carries_constant;
}

std::string shape_string(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

std::size_t LayeredModel::output_dim() const {
  if (layers.empty()) return feature_dim();
  const auto& last = layers.back();
  return static_cast<std::size_t>(last.weights.rows()) -
         (last.carries_constant ? 1 : 0);
}

std::size_t LayeredModel::width(std::size_t layer) const {
  if (layer < 1 || layer > num_layers()) {
    throw std::out_of_range("layer " + std::to_string(layer) +
                            " outside 1.." + std::to_string(num_layers()));
  }
  if (layer == 1) return feature_dim();
  const auto& def = layers[layer - 2];
  return static_cast<std::size_t>(def.weights.rows()) -
         (def.carries_constant ? 1 : 0);
}

std::vector<Violation> validate_model(const LayeredModel& model) {
  std::vector<Violation> out;
  if (model.input_dim == 0) out.push_back({0, "input_dim must be positive"});
  if (model.constant_input && model.input_dim < 2) {
    out.push_back({0, "a constant input unit needs at least one feature"});
  }
  if (model.layers.empty()) out.push_back({0, "model has no layers"});

  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const auto& layer = model.layers[i];
    const std::size_t pos = i + 1;
    const auto rows = static_cast<std::size_t>(layer.weights.rows());
    const auto cols = static_cast<std::size_t>(layer.weights.cols());

    if (rows == 0 || cols == 0) {
      out.push_back({pos, "weights must have at least one row and one column"});
    }
    const std::size_t expected =
        i == 0 ? model.input_dim
               : static_cast<std::size_t>(model.layers[i - 1].weights.rows());
    if (cols != expected) {
      std::ostringstream msg;
      msg << "weights are " << shape_string(layer.weights) << " so layer "
          << pos << " expects " << cols << " inputs but "
          << (i == 0 ? "the input has " : "the previous layer emits ")
          << expected;
      out.push_back({pos, msg.str()});
    }
    if (!layer.weights.allFinite()) {
      out.push_back({pos, "weights contain a non-finite entry"});
    }
    if (auto reason = check_activation(layer.activation); !reason.empty()) {
      out.push_back({pos, reason});
    }
    if (layer.carries_constant) {
      if (i + 1 == model.layers.size()) {
        out.push_back({pos, "the output layer cannot carry a constant unit"});
      }
      if (!input_has_constant(model, i)) {
        out.push_back({pos, "carries a constant unit it never receives"});
      }
      if (rows < 2) {
        out.push_back({pos, "a carrying layer needs at least one real unit"});
      } else if (cols > 0) {
        Vector selector = Vector::Zero(layer.weights.cols());
        selector[selector.size() - 1] = 1.0;
        if (layer.weights.row(layer.weights.rows() - 1).transpose() !=
            selector) {
          out.push_back(
              {pos, "the carried unit's weight row must select the constant"});
        }
      }
    }
  }
  return out;
}

void require_valid(const LayeredModel& model) {
  const auto violations = validate_model(model);
  if (violations.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& v : violations) {
    msg += v.layer == 0 ? std::string(" model: ")
                        : " layer " + std::to_string(v.layer) + ": ";
    msg += v.message + ";";
  }
  msg.pop_back();
  throw ValidationError(msg);
}

Matrix fold_bias(const Matrix& weights, const Vector& bias) {
  if (bias.size() != weights.rows()) {
    throw DimensionError("bias has " + std::to_string(bias.size()) +
                         " entries but weights have " +
                         std::to_string(weights.rows()) + " rows");
  }
  Matrix out(weights.rows(), weights.cols() + 1);
  out << weights, bias;
  return out;
}

LayeredModel fold_biases(std::size_t input_dim,
                         const std::vector<AffineLayer>& layers) {
  LayeredModel model;
  model.input_dim = input_dim;
  bool any_bias = false;
  for (const auto& layer : layers) any_bias = any_bias || layer.bias.has_value();

  if (!any_bias) {
    for (const auto& layer : layers) {
      model.layers.push_back({layer.weights, layer.activation, false});
    }
    return model;
  }

  model.input_dim = input_dim + 1;
  model.constant_input = true;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& layer = layers[i];
    Matrix folded = fold_bias(
        layer.weights, layer.bias.value_or(Vector::Zero(layer.weights.rows())));
    const bool carries = i + 1 < layers.size();
    if (carries) {
      folded.conservativeResize(folded.rows() + 1, Eigen::NoChange);
      folded.row(folded.rows() - 1).setZero();
      folded(folded.rows() - 1, folded.cols() - 1) = 1.0;
    }
    model.layers.push_back({std::move(folded), layer.activation, carries});
  }
  return model;
}

std::vector<AffineLayer> unfold_biases(const LayeredModel& model) {
  std::vector<AffineLayer> out;
  out.reserve(model.layers.size());
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const auto& layer = model.layers[i];
    const Eigen::Index rows =
        layer.weights.rows() - (layer.carries_constant ? 1 : 0);
    AffineLayer affine;
    affine.activation = layer.activation;
    if (input_has_constant(model, i)) {
      const Eigen::Index cols = layer.weights.cols() - 1;
      affine.weights = layer.weights.topLeftCorner(rows, cols);
      affine.bias = layer.weights.col(cols).head(rows);
    } else {
      affine.weights = layer.weights.topRows(rows);
    }
    out.push_back(std::move(affine));
  }
  return out;
}

Vector augment_input(const LayeredModel& model, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != model.feature_dim()) {
    throw DimensionError("input has " + std::to_string(x.size()) +
                         " features but the model expects " +
                         std::to_string(model.feature_dim()));
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw NonFiniteError(
          "input feature " + std::to_string(i + 1) + " is not finite", 1,
          static_cast<std::size_t>(i) + 1);
    }
  }
  if (!model.constant_input) return x;
  Vector a(x.size() + 1);
  a << x, 1.0;
  return a;
}

Vector layer_activation_apply(const LayerDef& layer, const Vector& z) {
  if (!layer.carries_constant) return activation_apply(layer.activation, z);
  const Eigen::Index n = z.size() - 1;
  Vector a(z.size());
  a.head(n) = activation_apply(layer.activation, z.head(n));
  a[n] = z[n];
  return a;
}

std::vector<Vector> forward(const LayeredModel& model, const Vector& x,
                            EvalCounter* counter) {
  require_valid(model);
  Vector a = augment_input(model, x);
  if (counter) ++counter->model_evaluations;

  std::vector<Vector> activations;
  activations.reserve(model.num_layers());
  activations.push_back(x);
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const auto& layer = model.layers[i];
    const std::size_t l = i + 2;
    const Vector z = layer.weights * a;
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
    activations.push_back(layer.carries_constant ? Vector(a.head(a.size() - 1))
                                                 : a);
  }
  return activations;
}

Vector evaluate(const LayeredModel& model, const Vector& x,
                EvalCounter* counter) {
  return forward(model, x, counter).back();
}

LayeredModel submodel(const LayeredModel& model, std::size_t first,
                      std::size_t last) {
  const std::size_t L = model.num_layers();
  if (first < 2 || first > last || last > L) {
    throw std::out_of_range("submodel range " + std::to_string(first) + ".." +
                            std::to_string(last) + " outside 2.." +
                            std::to_string(L));
  }
  LayeredModel out;
  if (first == 2) {
    out.input_dim = model.input_dim;
    out.constant_input = model.constant_input;
  } else {
    const auto& before = model.layers[first - 3];
    out.input_dim = static_cast<std::size_t>(before.weights.rows());
    out.constant_input = before.carries_constant;
  }
  out.layers.assign(model.layers.begin() + static_cast<std::ptrdiff_t>(first - 2),
                    model.layers.begin() + static_cast<std::ptrdiff_t>(last - 1));
  auto& tail = out.layers.back();
  if (tail.carries_constant) {
    tail.weights.conservativeResize(tail.weights.rows() - 1, Eigen::NoChange);
    tail.carries_constant = false;
  }
  return out;
}

}  // namespace jacprop
