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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jacprop/types.hpp"

namespace jacprop {

enum class ActivationKind {
  kIdentity,
  kLogistic,
  kTanh,
  kSoftplus,
  kRelu,
  kLeakyRelu,
  kSoftmax,
};

// Derivative assigned to relu / leaky_relu at exactly z == 0.
//   kDerivativeZero: left-hand derivative (0 for relu, alpha for leaky_relu).
//   kDerivativeOne:  right-hand derivative (1).
//   kReject:         raise SingularityError.
enum class ReluZeroPolicy {
  kDerivativeZero,
  kDerivativeOne,
  kReject,
};

struct ActivationSpec {
  ActivationKind kind = ActivationKind::kIdentity;
  double alpha = 0.0;  // leaky_relu slope, ignored by every other kind
  ReluZeroPolicy relu_zero_policy = ReluZeroPolicy::kDerivativeZero;

  static ActivationSpec identity() { return {}; }
  static ActivationSpec logistic() { return {ActivationKind::kLogistic}; }
  static ActivationSpec tanh() { return {ActivationKind::kTanh}; }
  static ActivationSpec softplus() { return {ActivationKind::kSoftplus}; }
  static ActivationSpec softmax() { return {ActivationKind::kSoftmax}; }
  static ActivationSpec relu(
      ReluZeroPolicy policy = ReluZeroPolicy::kDerivativeZero) {
    return {ActivationKind::kRelu, 0.0, policy};
  }
  static ActivationSpec leaky_relu(
      double alpha, ReluZeroPolicy policy = ReluZeroPolicy::kDerivativeZero) {
    return {ActivationKind::kLeakyRelu, alpha, policy};
  }

  friend bool operator==(const ActivationSpec&,
                         const ActivationSpec&) = default;
};

// Kinds whose Jacobian is diagonal.
bool is_elementwise(ActivationKind kind) noexcept;
bool has_singular_point(ActivationKind kind) noexcept;

// Empty string when the activation is usable, otherwise the reason it is not.
std::string check_activation(const ActivationSpec& spec);

std::string_view to_string(ActivationKind kind) noexcept;
std::string_view to_string(ReluZeroPolicy policy) noexcept;
std::optional<ActivationKind> parse_activation_kind(std::string_view name);
std::optional<ReluZeroPolicy> parse_relu_zero_policy(std::string_view name);

struct ActivationJacobian {
  Matrix matrix;
  // True iff a relu-type coordinate sat exactly on the kink and the policy
  // supplied a one-sided derivative.
  bool singular_hit = false;
  // 1-based coordinates where that happened.
  std::vector<std::size_t> singular_coordinates;
};

// Value of the activation. Throws NonFiniteError for non-finite input.
Vector activation_apply(const ActivationSpec& spec, const Vector& z);

// Full n x n Jacobian at z. Throws SingularityError under the reject policy
// when a relu-type coordinate is exactly zero (layer reported as 0).
ActivationJacobian activation_jacobian(const ActivationSpec& spec,
                                       const Vector& z);

// Diagonal of the Jacobian for elementwise kinds; avoids materializing the
// n x n matrix. Throws std::logic_error for softmax.
Vector activation_derivative(const ActivationSpec& spec, const Vector& z,
                             std::vector<std::size_t>* singular_coordinates);

}  // namespace jacprop
