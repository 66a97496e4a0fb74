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
#include <stdexcept>
#include <string>
#include <utility>

namespace jacprop {

// Every failure raised by the library derives from Error, so callers that do
// not care about the category can catch a single type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A NaN or infinity was supplied or produced. `layer` is the layer
// number (1 = input) or, for finite-difference probes, 0; `index` is the
// 1-based offending coordinate or probe, 0 when unknown.
class NonFiniteError : public Error {
 public:
  NonFiniteError(std::string what, std::size_t layer, std::size_t index)
      : Error(std::move(what)), layer_(layer), index_(index) {}

  std::size_t layer() const noexcept { return layer_; }
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t layer_;
  std::size_t index_;
};

// ReLU-type activation evaluated at exactly zero under the reject policy.
class SingularityError : public Error {
 public:
  SingularityError(std::string what, std::size_t layer, std::size_t coordinate)
      : Error(std::move(what)), layer_(layer), coordinate_(coordinate) {}

  std::size_t layer() const noexcept { return layer_; }
  std::size_t coordinate() const noexcept { return coordinate_; }

 private:
  std::size_t layer_;
  std::size_t coordinate_;
};

// Malformed text: JSON syntax errors, bad numeric tokens, ragged CSV.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed document that does not match the model file schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Model failed validate_model().
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace jacprop
