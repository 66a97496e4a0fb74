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

// Seeded generators for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "jacprop/model.hpp"

namespace jacprop::testing {

struct RandomNet {
  std::size_t input_dim = 0;
  std::vector<AffineLayer> layers;

  LayeredModel model() const { return fold_biases(input_dim, layers); }
};

struct NetShape {
  std::size_t min_layers = 2;  // L, counting the input layer
  std::size_t max_layers = 5;
  std::size_t min_width = 1;
  std::size_t max_width = 8;
  std::vector<ActivationKind> kinds = {
      ActivationKind::kIdentity, ActivationKind::kLogistic,
      ActivationKind::kTanh, ActivationKind::kSoftplus};
  double softmax_last = 0.5;  // probability the output layer is softmax
  double bias = 0.0;          // probability each layer has a bias
  double weight_scale = 1.0;  // weights ~ U[-scale, scale]
};

inline std::size_t uniform_size(std::mt19937_64& rng, std::size_t lo,
                                std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Matrix uniform_matrix(std::mt19937_64& rng, Eigen::Index rows,
                             Eigen::Index cols, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = u(rng);
  }
  return m;
}

inline Vector uniform_vector(std::mt19937_64& rng, Eigen::Index n,
                             double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline RandomNet random_net(std::mt19937_64& rng, const NetShape& shape = {}) {
  RandomNet net;
  const std::size_t L = uniform_size(rng, shape.min_layers, shape.max_layers);
  net.input_dim = uniform_size(rng, shape.min_width, shape.max_width);
  std::bernoulli_distribution softmax_last(shape.softmax_last);
  std::bernoulli_distribution has_bias(shape.bias);
  std::size_t prev = net.input_dim;
  for (std::size_t l = 2; l <= L; ++l) {
    const std::size_t width = uniform_size(rng, shape.min_width, shape.max_width);
    AffineLayer layer;
    layer.weights = uniform_matrix(rng, static_cast<Eigen::Index>(width),
                                   static_cast<Eigen::Index>(prev),
                                   shape.weight_scale);
    layer.activation.kind =
        shape.kinds[uniform_size(rng, 0, shape.kinds.size() - 1)];
    if (l == L && softmax_last(rng)) {
      layer.activation.kind = ActivationKind::kSoftmax;
    }
    if (has_bias(rng)) {
      layer.bias = uniform_vector(rng, static_cast<Eigen::Index>(width));
    }
    net.layers.push_back(std::move(layer));
    prev = width;
  }
  return net;
}

// Fixed-width net with the given activations, weights ~ U[-1, 1].
inline RandomNet seeded_net(std::uint64_t seed, std::vector<std::size_t> widths,
                            std::vector<ActivationSpec> activations) {
  std::mt19937_64 rng(seed);
  RandomNet net;
  net.input_dim = widths.front();
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    net.layers.push_back({uniform_matrix(rng,
                                         static_cast<Eigen::Index>(widths[i + 1]),
                                         static_cast<Eigen::Index>(widths[i])),
                          std::nullopt, activations[i]});
  }
  return net;
}

// The 4 -> 5 -> 5 -> 3, tanh/tanh/softmax model used across the suites.
inline RandomNet reference_net() {
  return seeded_net(7, {4, 5, 5, 3},
                    {ActivationSpec::tanh(), ActivationSpec::tanh(),
                     ActivationSpec::softmax()});
}

inline Vector reference_input() {
  Vector x(4);
  x << 0.1, -0.2, 0.3, -0.4;
  return x;
}

}  // namespace jacprop::testing
