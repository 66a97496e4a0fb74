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

#include "jacprop/activation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "jacprop/errors.hpp"

namespace jacprop {
namespace {

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  if (z > 30.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

void require_finite(const Vector& z) {
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i])) {
      throw NonFiniteError("activation input is not finite at coordinate " +
                               std::to_string(i + 1),
                           0, static_cast<std::size_t>(i) + 1);
    }
  }
}

Vector softmax(const Vector& z) {
  const double shift = z.maxCoeff();
  Vector e = (z.array() - shift).exp().matrix();
  return e / e.sum();
}

// One-sided derivative of relu / leaky_relu at the kink.
double kink_derivative(const ActivationSpec& spec, std::size_t coordinate) {
  switch (spec.relu_zero_policy) {
    case ReluZeroPolicy::kDerivativeZero:
      return spec.kind == ActivationKind::kLeakyRelu ? spec.alpha : 0.0;
    case ReluZeroPolicy::kDerivativeOne:
      return 1.0;
    case ReluZeroPolicy::kReject:
      break;
  }
  throw SingularityError(std::string(to_string(spec.kind)) +
                             " evaluated at its singular point z = 0 "
                             "(coordinate " +
                             std::to_string(coordinate) + ")",
                         0, coordinate);
}

}  // namespace

bool is_elementwise(ActivationKind kind) noexcept {
  return kind != ActivationKind::kSoftmax;
}

bool has_singular_point(ActivationKind kind) noexcept {
  return kind == ActivationKind::kRelu || kind == ActivationKind::kLeakyRelu;
}

std::string check_activation(const ActivationSpec& spec) {
  switch (spec.kind) {
    case ActivationKind::kIdentity:
    case ActivationKind::kLogistic:
    case ActivationKind::kTanh:
    case ActivationKind::kSoftplus:
    case ActivationKind::kRelu:
    case ActivationKind::kSoftmax:
      return {};
    case ActivationKind::kLeakyRelu:
      if (!std::isfinite(spec.alpha) || spec.alpha < 0.0) {
        return "leaky_relu alpha must be finite and >= 0";
      }
      return {};
  }
  return "unknown activation kind";
}

std::string_view to_string(ActivationKind kind) noexcept {
  switch (kind) {
    case ActivationKind::kIdentity: return "identity";
    case ActivationKind::kLogistic: return "logistic";
    case ActivationKind::kTanh: return "tanh";
    case ActivationKind::kSoftplus: return "softplus";
    case ActivationKind::kRelu: return "relu";
    case ActivationKind::kLeakyRelu: return "leaky_relu";
    case ActivationKind::kSoftmax: return "softmax";
  }
  return "unknown";
}

std::string_view to_string(ReluZeroPolicy policy) noexcept {
  switch (policy) {
    case ReluZeroPolicy::kDerivativeZero: return "derivative_zero";
    case ReluZeroPolicy::kDerivativeOne: return "derivative_one";
    case ReluZeroPolicy::kReject: return "reject";
  }
  return "unknown";
}

std::optional<ActivationKind> parse_activation_kind(std::string_view name) {
  for (auto kind :
       {ActivationKind::kIdentity, ActivationKind::kLogistic,
        ActivationKind::kTanh, ActivationKind::kSoftplus, ActivationKind::kRelu,
        ActivationKind::kLeakyRelu, ActivationKind::kSoftmax}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::optional<ReluZeroPolicy> parse_relu_zero_policy(std::string_view name) {
  for (auto policy : {ReluZeroPolicy::kDerivativeZero,
                      ReluZeroPolicy::kDerivativeOne, ReluZeroPolicy::kReject}) {
    if (to_string(policy) == name) return policy;
  }
  return std::nullopt;
}

Vector activation_apply(const ActivationSpec& spec, const Vector& z) {
  require_finite(z);
  switch (spec.kind) {
    case ActivationKind::kIdentity:
      return z;
    case ActivationKind::kLogistic:
      return z.unaryExpr(&logistic);
    case ActivationKind::kTanh:
      return z.array().tanh().matrix();
    case ActivationKind::kSoftplus:
      return z.unaryExpr(&softplus);
    case ActivationKind::kRelu:
      return z.cwiseMax(0.0);
    case ActivationKind::kLeakyRelu: {
      const double alpha = spec.alpha;
      return z.unaryExpr([alpha](double v) { return v < 0.0 ? alpha * v : v; });
    }
    case ActivationKind::kSoftmax:
      if (z.size() == 0) throw DimensionError("softmax of an empty vector");
      return softmax(z);
  }
  throw std::logic_error("unhandled activation kind");
}

Vector activation_derivative(const ActivationSpec& spec, const Vector& z,
                             std::vector<std::size_t>* singular_coordinates) {
  require_finite(z);
  switch (spec.kind) {
    case ActivationKind::kIdentity:
      return Vector::Ones(z.size());
    case ActivationKind::kLogistic:
      return z.unaryExpr([](double v) {
        const double s = logistic(v);
        return s * (1.0 - s);
      });
    case ActivationKind::kTanh:
      return (1.0 - z.array().tanh().square()).matrix();
    case ActivationKind::kSoftplus:
      return z.unaryExpr(&logistic);
    case ActivationKind::kRelu:
    case ActivationKind::kLeakyRelu: {
      const double below = spec.kind == ActivationKind::kRelu ? 0.0 : spec.alpha;
      Vector d(z.size());
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        if (z[i] > 0.0) {
          d[i] = 1.0;
        } else if (z[i] < 0.0) {
          d[i] = below;
        } else {
          const auto coordinate = static_cast<std::size_t>(i) + 1;
          d[i] = kink_derivative(spec, coordinate);
          if (singular_coordinates) singular_coordinates->push_back(coordinate);
        }
      }
      return d;
    }
    case ActivationKind::kSoftmax:
      break;
  }
  throw std::logic_error("activation_derivative: softmax is not elementwise");
}

ActivationJacobian activation_jacobian(const ActivationSpec& spec,
                                       const Vector& z) {
  ActivationJacobian out;
  if (spec.kind == ActivationKind::kSoftmax) {
    require_finite(z);
    if (z.size() == 0) throw DimensionError("softmax of an empty vector");
    const Vector s = softmax(z);
    out.matrix = Matrix(s.asDiagonal()) - s * s.transpose();
    return out;
  }
  const Vector d = activation_derivative(spec, z, &out.singular_coordinates);
  out.matrix = d.asDiagonal();
  out.singular_hit = !out.singular_coordinates.empty();
  return out;
}

}  // namespace jacprop
